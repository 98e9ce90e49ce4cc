//! Plain-text chain files.
//!
//! A chain file starts with `#`-prefixed `key = value` header lines, the
//! first of which is the version line, followed by one CSV header and one row
//! per retained draw. Floats use the shortest representation that parses back
//! to the same bits, so a write/read round trip is lossless.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use outsel_core::{ChainDraws, ChainOutput, ParameterState, PriorConfig, SamplerConfig};

use crate::error::{IoError, Result};

pub const VERSION_LINE: &str = "# outsel chain file v1";

/// Column names for a model with `n` individuals and `k` outcomes.
pub fn columns(n: usize, k: usize) -> Vec<String> {
    let mut cols = vec!["chain".to_string()];
    let indexed = |cols: &mut Vec<String>, name: &str, m: usize| {
        cols.extend((1..=m).map(|i| format!("{name}[{i}]")));
    };
    indexed(&mut cols, "beta", k);
    indexed(&mut cols, "I", k);
    cols.push("mu".into());
    cols.push("tau".into());
    indexed(&mut cols, "sigma", k);
    cols.push("sigma_r".into());
    indexed(&mut cols, "nu", k);
    indexed(&mut cols, "gamma", k);
    indexed(&mut cols, "alpha", n);
    cols
}

fn push_row(out: &mut String, chain: usize, s: &ParameterState) {
    let _ = write!(out, "{chain}");
    let mut num = |x: f64| {
        let _ = write!(out, ",{x}");
    };
    s.beta.iter().for_each(|&x| num(x));
    s.indicators.iter().for_each(|&b| num(if b { 1.0 } else { 0.0 }));
    num(s.mu);
    num(s.tau);
    s.sigma.iter().for_each(|&x| num(x));
    num(s.sigma_r);
    s.nu.iter().for_each(|&x| num(x));
    s.gamma.iter().for_each(|&x| num(x));
    s.alpha.iter().for_each(|&x| num(x));
    out.push('\n');
}

pub fn format_chain(chain: &ChainOutput) -> Result<String> {
    let mut out = String::new();
    let draws = chain.chains.first().map_or(0, |c| c.draws.len());
    writeln!(out, "{VERSION_LINE}").unwrap();
    writeln!(out, "# n = {}", chain.n).unwrap();
    writeln!(out, "# k = {}", chain.k).unwrap();
    writeln!(out, "# chains = {}", chain.chains.len()).unwrap();
    writeln!(out, "# draws_per_chain = {draws}").unwrap();
    for c in &chain.chains {
        writeln!(out, "# chain.{}.seed = {}", c.chain_index, c.seed).unwrap();
    }
    writeln!(out, "# prior = {}", to_json(&chain.prior)?).unwrap();
    writeln!(out, "# sampler = {}", to_json(&chain.config)?).unwrap();
    out.push_str(&columns(chain.n, chain.k).join(","));
    out.push('\n');
    for c in &chain.chains {
        if c.draws.len() != draws {
            return Err(IoError::Schema(format!(
                "chain {} has {} draws, expected {draws}",
                c.chain_index,
                c.draws.len()
            )));
        }
        for s in &c.draws {
            push_row(&mut out, c.chain_index, s);
        }
    }
    Ok(out)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| IoError::Parse(e.to_string()))
}

pub fn write_chain(chain: &ChainOutput, path: &Path) -> Result<()> {
    crate::write_atomic(path, format_chain(chain)?.as_bytes())
}

fn header_value<'a>(header: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    header
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| IoError::Schema(format!("missing header `{key}`")))
}

fn header_usize(header: &BTreeMap<String, String>, key: &str) -> Result<usize> {
    let v = header_value(header, key)?;
    v.parse()
        .map_err(|_| IoError::Schema(format!("header `{key}` is not a count: `{v}`")))
}

pub fn parse_chain(text: &str) -> Result<ChainOutput> {
    let mut lines = text.lines().enumerate().peekable();
    match lines.next() {
        Some((_, l)) if l.trim_end() == VERSION_LINE => {}
        Some((_, l)) => return Err(IoError::Version(l.to_string())),
        None => return Err(IoError::Truncated("empty chain file".into())),
    }
    let mut header = BTreeMap::new();
    while let Some((_, l)) = lines.next_if(|(_, l)| l.starts_with('#')) {
        let body = l.trim_start_matches('#').trim();
        if let Some((key, value)) = body.split_once('=') {
            header.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let n = header_usize(&header, "n")?;
    let k = header_usize(&header, "k")?;
    let n_chains = header_usize(&header, "chains")?;
    let draws = header_usize(&header, "draws_per_chain")?;
    let prior: PriorConfig = serde_json::from_str(header_value(&header, "prior")?)
        .map_err(|e| IoError::Schema(format!("prior header: {e}")))?;
    let config: SamplerConfig = serde_json::from_str(header_value(&header, "sampler")?)
        .map_err(|e| IoError::Schema(format!("sampler header: {e}")))?;
    let mut chains = Vec::with_capacity(n_chains);
    for c in 0..n_chains {
        let key = format!("chain.{c}.seed");
        let v = header_value(&header, &key)?;
        let seed = v
            .parse()
            .map_err(|_| IoError::Schema(format!("header `{key}` is not a seed: `{v}`")))?;
        chains.push(ChainDraws {
            chain_index: c,
            seed,
            draws: Vec::with_capacity(draws),
        });
    }

    let expected = columns(n, k);
    let Some((_, col_line)) = lines.next() else {
        return Err(IoError::Truncated("missing column header".into()));
    };
    let found: Vec<&str> = col_line.split(',').map(str::trim).collect();
    if let Some(bad) = found.iter().find(|c| !expected.iter().any(|e| e == *c)) {
        return Err(IoError::Schema(format!("unknown column `{bad}`")));
    }
    if found.len() != expected.len() || found.iter().zip(&expected).any(|(a, b)| a != b) {
        return Err(IoError::Schema(format!(
            "columns do not match the n = {n}, k = {k} layout"
        )));
    }

    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected.len() {
            return Err(IoError::Truncated(format!(
                "line {lineno} has {} fields, expected {}",
                fields.len(),
                expected.len()
            )));
        }
        let c: usize = fields[0]
            .parse()
            .ok()
            .filter(|c| *c < n_chains)
            .ok_or_else(|| IoError::Schema(format!("line {lineno}: bad chain index `{}`", fields[0])))?;
        let mut vals = fields[1..].iter().enumerate().map(|(i, f)| {
            f.parse::<f64>().map_err(|_| IoError::NonNumeric {
                line: lineno,
                column: expected[i + 1].clone(),
                value: f.to_string(),
            })
        });
        let mut take = |m: usize| (0..m).map(|_| vals.next().unwrap()).collect::<Result<Vec<f64>>>();
        let beta = take(k)?;
        let indicators = take(k)?.into_iter().map(|x| x != 0.0).collect();
        let mu = take(1)?[0];
        let tau = take(1)?[0];
        let sigma = take(k)?;
        let sigma_r = take(1)?[0];
        let nu = take(k)?;
        let gamma = take(k)?;
        let alpha = take(n)?;
        chains[c].draws.push(ParameterState {
            nu,
            alpha,
            beta,
            gamma,
            mu,
            tau,
            sigma,
            sigma_r,
            indicators,
        });
    }
    for c in &chains {
        if c.draws.len() != draws {
            return Err(IoError::Truncated(format!(
                "chain {} has {} draws, header says {draws}",
                c.chain_index,
                c.draws.len()
            )));
        }
    }
    Ok(ChainOutput {
        n,
        k,
        prior,
        config,
        chains,
    })
}

pub fn read_chain(path: &Path) -> Result<ChainOutput> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_chain(&text)
}
