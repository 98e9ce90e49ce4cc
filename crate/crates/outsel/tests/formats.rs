use outsel::dataset_io::{format_dataset, parse_dataset};
use outsel_core::Dataset;
use proptest::prelude::*;

fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (2usize..10, 1usize..4)
        .prop_flat_map(|(n, k)| {
            (
                prop::collection::vec(-1e3f64..1e3, n),
                prop::collection::vec(-1e3f64..1e3, n),
                prop::collection::vec(prop::collection::vec(prop::option::weighted(0.7, -1e6f64..1e6), k), n),
            )
        })
        .prop_filter_map("each outcome needs two distinct values", |(x, z, y)| {
            let k = y[0].len();
            let names = (0..k).map(|i| format!("outcome {i}")).collect();
            Dataset::new(x, z, y, names).ok()
        })
}

proptest! {
    #[test]
    fn dataset_csv_round_trip(data in dataset_strategy()) {
        let back = parse_dataset(&format_dataset(&data)).unwrap();
        prop_assert_eq!(back, data);
    }
}
