//! Acceptance suite. Every criterion is exact (no tolerances); each prints one
//! PASS/FAIL line and the test fails if any criterion fails.
//!
//! Run with `cargo test -p semitopo --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semitopo::io::{parse_semitopology, serialize_semitopology};
use semitopo_core::generators::{bridge, discrete, majority, random_semitopology, z_window};
use semitopo_core::relations::{components, intertwined, intertwined_oracle};
use semitopo_core::sim::{detect_fork, run_random, run_schedule, ScheduleEvent, Status};
use semitopo_core::valuation::{check_theorem1, Value, ValueAssignment};
use semitopo_core::{PointId, PointSet, SemiTopology, DEFAULT_ORACLE_LIMIT};

const SUITE_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bridged_majorities() -> SemiTopology {
    bridge(&majority(3).relabel("e").unwrap(), &majority(3).relabel("t").unwrap(), "r").unwrap()
}

/// Generator outputs with at most six points.
fn small_generated() -> Vec<(String, SemiTopology)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push((format!("majority({n})"), majority(n)));
        out.push((format!("discrete({n})"), discrete(n)));
    }
    for k in 1..=2 {
        out.push((format!("z_window({k})"), z_window(k)));
    }
    for (a, b) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
        let e = majority(a).relabel("e").unwrap();
        let t = majority(b).relabel("t").unwrap();
        out.push((format!("bridge(majority({a}), majority({b}))"), bridge(&e, &t, "r").unwrap()));
    }
    let e = discrete(2).relabel("e").unwrap();
    let t = discrete(2).relabel("t").unwrap();
    out.push(("bridge(discrete(2), discrete(2))".into(), bridge(&e, &t, "r").unwrap()));
    assert!(out.iter().all(|(_, st)| st.len() <= 6));
    out
}

/// 200 random instances with n <= 6 and m <= 8, covering every (n, m).
fn small_random() -> Vec<(String, SemiTopology)> {
    (0..200u64)
        .map(|seed| {
            let n = 1 + (seed % 6) as usize;
            let m = 1 + (seed / 6 % 8) as usize;
            (format!("random({n}, {m}, {seed})"), random_semitopology(n, m, seed))
        })
        .collect()
}

fn oracle_family() -> Vec<(String, SemiTopology)> {
    let mut all = small_generated();
    all.extend(small_random());
    all
}

fn c1_open_oracle() -> Outcome {
    let family = oracle_family();
    let mut checked = 0usize;
    for (name, st) in &family {
        let opens: BTreeSet<PointSet> = st.enumerate_opens().map_err(|e| format!("{name}: {e}"))?.into_iter().collect();
        for mask in 0u32..1 << st.len() {
            let s: PointSet = (0..st.len()).filter(|i| mask >> i & 1 == 1).map(PointId).collect();
            let fast = st.is_open(&s).unwrap();
            ensure(fast == opens.contains(&s), || format!("{name}: is_open({s:?}) = {fast}, oracle disagrees"))?;
            checked += 1;
        }
    }
    Ok(format!("{} instances, {checked} subsets", family.len()))
}

fn c2_intertwined_oracle() -> Outcome {
    let family = oracle_family();
    let mut checked = 0usize;
    for (name, st) in &family {
        for p in st.ids() {
            for q in st.ids() {
                let fast = intertwined(st, p, q).unwrap().is_intertwined();
                let slow = intertwined_oracle(st, p, q, DEFAULT_ORACLE_LIMIT).map_err(|e| format!("{name}: {e}"))?;
                ensure(fast == slow, || format!("{name}: ({}, {}) fast={fast} oracle={slow}", st.name(p), st.name(q)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} instances, {checked} pairs", family.len()))
}

fn c3_majority_intertwined() -> Outcome {
    for n in 1..=9 {
        let st = majority(n);
        for p in st.ids() {
            for q in st.ids() {
                ensure(intertwined(&st, p, q).unwrap().is_intertwined(), || {
                    format!("majority({n}): {} and {} not intertwined", st.name(p), st.name(q))
                })?;
            }
        }
    }
    Ok("majority(1..=9) pairwise intertwined".into())
}

fn c4_z_window_connected() -> Outcome {
    for k in 1..=8 {
        let st = z_window(k);
        let comps = components(&st);
        ensure(comps.len() == 1, || format!("z_window({k}): {} components", comps.len()))?;
        for i in 0..k {
            let id = |x: usize| st.id(&x.to_string()).unwrap();
            let odd = id(2 * i + 1);
            for even in [id(2 * i), id(2 * i + 2)] {
                ensure(intertwined(&st, odd, even).unwrap().is_intertwined(), || {
                    format!("z_window({k}): {} and {} not intertwined", st.name(odd), st.name(even))
                })?;
            }
        }
    }
    Ok("z_window(1..=8): one component, odd points intertwined with both even neighbours".into())
}

fn c5_continuity_agreement() -> Outcome {
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=8);
        let st = random_semitopology(n, m, rng.gen());
        let f = ValueAssignment::from_fn(&st, |_| if rng.gen_bool(0.5) { Value::T } else { Value::F });
        let verdict = check_theorem1(&st, &f).unwrap();
        ensure(verdict.is_pass(), || format!("seed {seed}: {verdict:?}"))?;
    }
    Ok("1000 random (semitopology, assignment) pairs".into())
}

fn c6_deadlock_golden() -> Outcome {
    let st = z_window(3);
    let events = [
        ScheduleEvent::new(st.set_of(["0", "1", "2"]).unwrap(), Value::T),
        ScheduleEvent::new(st.set_of(["4", "5", "6"]).unwrap(), Value::F),
    ];
    let out = run_schedule(&st, &events);
    let dead: Vec<&str> = st.names_of(&out.deadlocked);
    ensure(dead == ["3"], || format!("deadlocked = {dead:?}"))?;
    ensure(out.forks.is_empty(), || format!("forks = {:?}", out.forks))?;
    ensure(out.rejected.is_empty(), || format!("rejected = {:?}", out.rejected))?;
    Ok("deadlocked = {3}, forks = {}".into())
}

fn c7_simulation_safety() -> Outcome {
    let instances = [
        ("majority(5)", majority(5), true),
        ("z_window(4)", z_window(4), false),
        ("bridge(m3, m3)", bridged_majorities(), false),
    ];
    let mut decided_majority = 0;
    for (name, st, is_majority) in &instances {
        for seed in 0..1000u64 {
            let out = run_random(st, seed, 10_000);
            let forks = detect_fork(st, &out.final_state);
            ensure(forks.is_empty(), || format!("{name} seed {seed}: forks {forks:?}"))?;
            if *is_majority && out.final_state.all_decided() {
                decided_majority += 1;
                let values: BTreeSet<Value> = out
                    .final_state
                    .statuses()
                    .iter()
                    .filter_map(|s| match s {
                        Status::Committed(v) => Some(*v),
                        Status::Undecided => None,
                    })
                    .collect();
                ensure(values.len() == 1, || format!("{name} seed {seed}: decided outcome not constant"))?;
            }
        }
    }
    ensure(decided_majority > 0, || "no fully decided majority(5) run".into())?;
    Ok(format!("3000 runs fork-free; {decided_majority} decided majority(5) runs constant"))
}

fn c8_bridge() -> Outcome {
    let b = bridged_majorities();
    let comps = components(&b);
    ensure(comps.len() == 1, || format!("{} components", comps.len()))?;
    let r = b.set_of(["r"]).unwrap();
    ensure(!b.is_open(&r).unwrap(), || "{r} is open".into())?;
    Ok(format!("{} points, one component, {{r}} not open", b.len()))
}

fn c9_io_roundtrip() -> Outcome {
    let mut all: Vec<(String, SemiTopology)> = Vec::new();
    for n in 1..=9 {
        all.push((format!("majority({n})"), majority(n)));
        all.push((format!("discrete({n})"), discrete(n)));
    }
    for k in 1..=8 {
        all.push((format!("z_window({k})"), z_window(k)));
    }
    all.push(("bridge(m3, m3)".into(), bridged_majorities()));
    for seed in 0..100u64 {
        let n = 1 + (seed % 12) as usize;
        let m = 1 + (seed / 12 % 10) as usize;
        all.push((format!("random({n}, {m}, {seed})"), random_semitopology(n, m, seed)));
    }
    for (name, st) in &all {
        let doc = serialize_semitopology(st);
        let back = parse_semitopology(&doc).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == *st, || format!("{name}: parse(serialize(x)) != x"))?;
        ensure(serialize_semitopology(&back) == doc, || format!("{name}: serialization not byte-stable"))?;
        ensure(serialize_semitopology(st) == doc, || format!("{name}: serialization not deterministic"))?;
    }
    Ok(format!("{} documents", all.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 oracle equivalence (openness)", c1_open_oracle),
        ("2 oracle equivalence (intertwined)", c2_intertwined_oracle),
        ("3 majority pairwise intertwined", c3_majority_intertwined),
        ("4 z-window single component", c4_z_window_connected),
        ("5 continuity agreement property", c5_continuity_agreement),
        ("6 deadlock golden test", c6_deadlock_golden),
        ("7 simulation safety", c7_simulation_safety),
        ("8 bridge claim", c8_bridge),
        ("9 io round-trip", c9_io_roundtrip),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail} ({:.2?})", t.elapsed()),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    let total = start.elapsed();
    if total < SUITE_BUDGET {
        println!("PASS  10 end-to-end runtime: {total:.2?} < {SUITE_BUDGET:?}");
    } else {
        println!("FAIL  10 end-to-end runtime: {total:.2?} >= {SUITE_BUDGET:?}");
        failed.push("10 end-to-end runtime");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
