use std::collections::BTreeMap;

use proptest::prelude::*;

use sbraid::spec::{pairs, parse_spec, serialize_spec, OffsetSpec};
use sbraid::trees::{boxing_to_marking, enumerate_markings, enumerate_trees, marking_to_boxing};

fn arb_spec() -> impl Strategy<Value = OffsetSpec> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let k = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec(prop::collection::btree_set(-2i64..=2, 0..4), k),
            )
        })
        .prop_map(|(n, sets)| {
            let mut map: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
            for (pair, set) in pairs(n).into_iter().zip(sets) {
                if !set.is_empty() {
                    map.insert(pair, set.into_iter().collect());
                }
            }
            OffsetSpec::new(n, &map).expect("generated spec is well formed")
        })
}

proptest! {
    #[test]
    fn spec_serialization_round_trips(spec in arb_spec()) {
        let text = serialize_spec(&spec);
        let back = parse_spec(&text).expect("serialized spec parses");
        prop_assert_eq!(back.n(), spec.n());
        for (a, b) in pairs(spec.n()) {
            prop_assert_eq!(back.offsets(a, b), spec.offsets(a, b));
        }
    }

    #[test]
    fn marking_boxing_round_trips(n in 1usize..=4, m in 0i64..=1, pick in any::<prop::sample::Index>()) {
        let trees = enumerate_trees(n, m);
        let tree = &trees[pick.index(trees.len())];
        for mt in enumerate_markings(tree) {
            let boxed = marking_to_boxing(&mt);
            prop_assert_eq!(boxing_to_marking(&boxed), mt);
        }
    }
}
