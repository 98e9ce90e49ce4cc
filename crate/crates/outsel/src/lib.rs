//! File formats, parallel execution and the command line for `outsel-core`.

pub mod chain_io;
pub mod cli;
pub mod dataset_io;
pub mod error;
pub mod manifest;
pub mod results_io;
pub mod runner;

pub use error::{IoError, Result};
pub use outsel_core as core;

use std::fs;
use std::io::Write;
use std::path::Path;

/// Writes `contents` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{file_name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(IoError::io(&tmp))?;
    f.write_all(contents).map_err(IoError::io(&tmp))?;
    f.sync_all().map_err(IoError::io(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(IoError::io(path))
}
