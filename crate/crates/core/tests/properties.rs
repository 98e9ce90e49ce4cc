use outsel_core::metrics::{classify_probabilities, detection_counts, mse};
use outsel_core::{stack_long, standardize, Dataset};
use proptest::prelude::*;

fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (2usize..12, 1usize..5)
        .prop_flat_map(|(n, k)| {
            (
                prop::collection::vec(-3.0f64..3.0, n),
                prop::collection::vec(-3.0f64..3.0, n),
                prop::collection::vec(prop::collection::vec(prop::option::weighted(0.8, -10.0f64..10.0), k), n),
            )
        })
        .prop_filter_map("each outcome needs two distinct values", |(x, z, y)| {
            let k = y[0].len();
            let names = (1..=k).map(|i| format!("y{i}")).collect();
            Dataset::new(x, z, y, names).ok()
        })
}

proptest! {
    #[test]
    fn stacking_keeps_every_observed_cell(data in dataset_strategy()) {
        let design = stack_long(&data);
        prop_assert_eq!(design.len(), data.observed_count());
        for r in design.rows() {
            prop_assert_eq!(data.outcome(r.individual, r.outcome), Some(r.y));
            prop_assert_eq!(r.exposure, data.exposure()[r.individual]);
            let x = r.x_interactions(data.k());
            prop_assert_eq!(x.iter().filter(|v| **v != 0.0).count() <= 1, true);
            prop_assert_eq!(x[r.outcome], r.exposure);
        }
        prop_assert_eq!(design.unstack(), data.outcome_rows());
    }

    #[test]
    fn standardized_outcomes_have_zero_mean_unit_sd(data in dataset_strategy()) {
        let (std_data, rec) = standardize(&data).unwrap();
        for k in 0..data.k() {
            let col: Vec<f64> = std_data.observed_column(k).collect();
            let m = col.iter().sum::<f64>() / col.len() as f64;
            let v = col.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / (col.len() - 1) as f64;
            prop_assert!(m.abs() < 1e-9);
            prop_assert!((v - 1.0).abs() < 1e-9);
            prop_assert!((rec.effect_to_original(k, 2.0) - 2.0 * rec.sds[k]).abs() < 1e-12);
        }
        // missingness pattern is unchanged
        for j in 0..data.n() {
            for k in 0..data.k() {
                prop_assert_eq!(data.outcome(j, k).is_some(), std_data.outcome(j, k).is_some());
            }
        }
    }

    #[test]
    fn detection_counts_partition_identified(
        pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..40)
    ) {
        let (classified, relevant): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
        let c = detection_counts(&classified, &relevant).unwrap();
        prop_assert_eq!(c.n_identified, c.n_correct + c.n_false_positive);
        prop_assert!(c.n_correct <= relevant.iter().filter(|r| **r).count());
        prop_assert_eq!(c.n_identified, classified.iter().filter(|r| **r).count());
    }

    #[test]
    fn mse_is_nonnegative_and_zero_on_truth(
        v in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30)
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        prop_assert!(mse(&a, &b).unwrap() >= 0.0);
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn classification_commutes_with_permutation(
        probs in prop::collection::vec(0.0f64..=1.0, 1..30),
        seed in any::<u64>(),
    ) {
        let mut order: Vec<usize> = (0..probs.len()).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<f64> = order.iter().map(|&i| probs[i]).collect();
        let a = classify_probabilities(&probs);
        let b = classify_probabilities(&permuted);
        for (pos, &i) in order.iter().enumerate() {
            prop_assert_eq!(b[pos], a[i]);
        }
    }
}
