use proptest::prelude::*;
use semitopo::io::{
    parse_assignment, parse_schedule, parse_semitopology, parse_trace, serialize_assignment, serialize_schedule,
    serialize_semitopology, serialize_trace, RawAssignment, RawEvent, Trace,
};
use semitopo_core::generators::random_semitopology;
use semitopo_core::sim::run_random;
use semitopo_core::valuation::{Value, ValueAssignment};

fn arb_value() -> impl Strategy<Value = Value> {
    prop_oneof![Just(Value::T), Just(Value::F)]
}

proptest! {
    #[test]
    fn semitopology_roundtrip(n in 1usize..12, m in 1usize..10, seed in any::<u64>()) {
        let st = random_semitopology(n, m, seed).relabel("node-").unwrap();
        let doc = serialize_semitopology(&st);
        let back = parse_semitopology(&doc).unwrap();
        prop_assert_eq!(&back, &st);
        prop_assert_eq!(serialize_semitopology(&back), doc);
    }

    #[test]
    fn assignment_roundtrip(n in 1usize..12, seed in any::<u64>(), bits in any::<u64>()) {
        let st = random_semitopology(n, 3, seed);
        let f = ValueAssignment::from_fn(&st, |p| if bits >> p.0 & 1 == 1 { Value::T } else { Value::F });
        let raw = RawAssignment::from_assignment(&st, &f);
        let back = parse_assignment(&serialize_assignment(&raw)).unwrap();
        prop_assert_eq!(back.resolve(&st).unwrap(), f);
    }

    #[test]
    fn schedule_roundtrip(rows in proptest::collection::vec(
        (proptest::collection::btree_set("[a-z0-9]{1,4}", 1..5), arb_value()), 0..6)) {
        let events: Vec<RawEvent> = rows
            .into_iter()
            .map(|(c, value)| RawEvent { coalition: c.into_iter().collect(), value })
            .collect();
        let doc = serialize_schedule(&events);
        prop_assert_eq!(parse_schedule(&doc).unwrap(), events);
    }

    #[test]
    fn trace_roundtrip(n in 1usize..8, m in 1usize..6, seed in any::<u64>()) {
        let st = random_semitopology(n, m, seed);
        let trace = Trace::from_outcome(&st, &run_random(&st, seed, 50));
        let doc = serialize_trace(&trace);
        prop_assert_eq!(parse_trace(&doc).unwrap(), trace);
    }
}
