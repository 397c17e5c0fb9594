//! Deterministic legal-commit simulation.
//!
//! A coalition (a nonempty open) commits one value atomically. The commit is
//! legal when no member is already committed to the other value; commitments
//! are final. Forks are intertwined points holding different values; a point
//! is deadlocked when it is undecided and every basis element around it
//! already holds both values.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relations::intertwined_graph;
use crate::valuation::Value;
use crate::{Error, PointId, PointSet, Result, SemiTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Undecided,
    Committed(Value),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEvent {
    pub coalition: PointSet,
    pub value: Value,
}

impl ScheduleEvent {
    pub fn new(coalition: PointSet, value: Value) -> Self {
        ScheduleEvent { coalition, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    status: Vec<Status>,
    trace: Vec<ScheduleEvent>,
}

impl SimState {
    pub fn fresh(st: &SemiTopology) -> Self {
        SimState { status: alloc::vec![Status::Undecided; st.len()], trace: Vec::new() }
    }

    /// A state with arbitrary statuses and an empty trace. Used to exercise
    /// the detectors on states no legal trace reaches.
    pub fn forged(st: &SemiTopology, status: Vec<Status>) -> Result<Self> {
        if status.len() != st.len() {
            return Err(Error::InvalidParameter("status vector length differs from the universe"));
        }
        Ok(SimState { status, trace: Vec::new() })
    }

    pub fn status(&self, p: PointId) -> Status {
        self.status[p.0]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.status
    }

    pub fn trace(&self) -> &[ScheduleEvent] {
        &self.trace
    }

    pub fn undecided(&self) -> PointSet {
        self.members_with(|s| s == Status::Undecided)
    }

    pub fn committed_to(&self, v: Value) -> PointSet {
        self.members_with(|s| s == Status::Committed(v))
    }

    pub fn all_decided(&self) -> bool {
        self.status.iter().all(|&s| s != Status::Undecided)
    }

    fn members_with(&self, pred: impl Fn(Status) -> bool) -> PointSet {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, &s)| pred(s))
            .map(|(i, _)| PointId(i))
            .collect()
    }

    /// Applies `ev` in place if legal; on rejection the state is untouched.
    pub fn try_commit(&mut self, st: &SemiTopology, ev: &ScheduleEvent) -> Result<()> {
        if ev.coalition.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        if !st.is_open(&ev.coalition)? {
            return Err(Error::NotOpen);
        }
        let blocking = self.committed_to(other(ev.value)).intersection(&ev.coalition);
        if !blocking.is_empty() {
            return Err(Error::IllegalCommit {
                blocking: blocking.iter().map(|p| String::from(st.name(p))).collect(),
            });
        }
        for p in &ev.coalition {
            self.status[p.0] = Status::Committed(ev.value);
        }
        self.trace.push(ev.clone());
        Ok(())
    }
}

fn other(v: Value) -> Value {
    match v {
        Value::T => Value::F,
        Value::F => Value::T,
    }
}

/// Returns the successor state, or the reason `ev` is rejected.
pub fn legal_commit(st: &SemiTopology, s: &SimState, ev: &ScheduleEvent) -> Result<SimState> {
    let mut next = s.clone();
    next.try_commit(st, ev)?;
    Ok(next)
}

/// Undecided points none of whose basis neighborhoods can commit either value.
pub fn detect_deadlock(st: &SemiTopology, s: &SimState) -> PointSet {
    let t = s.committed_to(Value::T);
    let f = s.committed_to(Value::F);
    let blocked: Vec<bool> = st.basis().iter().map(|b| b.intersects(&t) && b.intersects(&f)).collect();
    s.undecided()
        .iter()
        .filter(|&p| st.neighborhood_indices(p).iter().all(|&b| blocked[b]))
        .collect()
}

/// Deadlock computed by attempting every (open, value) pair from the
/// enumerated open family.
pub fn detect_deadlock_oracle(st: &SemiTopology, s: &SimState, limit: usize) -> Result<PointSet> {
    let opens = st.enumerate_opens_with_limit(limit)?;
    Ok(s.undecided()
        .iter()
        .filter(|&p| {
            opens.iter().filter(|o| o.contains(p)).all(|o| {
                Value::ALL
                    .iter()
                    .all(|&v| legal_commit(st, s, &ScheduleEvent::new(o.clone(), v)).is_err())
            })
        })
        .collect())
}

/// Intertwined pairs `(p, q)`, `p < q`, committed to different values.
pub fn detect_fork(st: &SemiTopology, s: &SimState) -> Vec<(PointId, PointId)> {
    intertwined_graph(st)
        .into_iter()
        .filter(|&(p, q)| match (s.status(p), s.status(q)) {
            (Status::Committed(a), Status::Committed(b)) => a != b,
            _ => false,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// Position in the schedule, or the step number for random runs.
    pub index: usize,
    pub event: ScheduleEvent,
    pub reason: Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimOutcome {
    pub final_state: SimState,
    pub deadlocked: PointSet,
    pub forks: Vec<(PointId, PointId)>,
    pub rejected: Vec<Rejection>,
    pub steps: usize,
}

impl SimOutcome {
    fn finish(st: &SemiTopology, final_state: SimState, rejected: Vec<Rejection>, steps: usize) -> Self {
        SimOutcome {
            deadlocked: detect_deadlock(st, &final_state),
            forks: detect_fork(st, &final_state),
            final_state,
            rejected,
            steps,
        }
    }
}

/// Replays `events` in order. Rejected events are recorded and skipped.
pub fn run_schedule(st: &SemiTopology, events: &[ScheduleEvent]) -> SimOutcome {
    let mut state = SimState::fresh(st);
    let mut rejected = Vec::new();
    for (index, ev) in events.iter().enumerate() {
        if let Err(reason) = state.try_commit(st, ev) {
            rejected.push(Rejection { index, event: ev.clone(), reason });
        }
    }
    SimOutcome::finish(st, state, rejected, events.len())
}

/// Randomized scheduler. Each step draws a basis element and a value
/// uniformly and applies the commit if legal. Stops once every point is
/// decided, every undecided point is deadlocked, or `max_steps` steps ran.
///
/// Draws come from ChaCha8 (`rand_chacha` 0.3) seeded with
/// `seed_from_u64(seed)`: `gen_range(0..basis_len)` then `gen_bool(0.5)`
/// (true is T). Rejected draws are not recorded.
pub fn run_random(st: &SemiTopology, seed: u64, max_steps: usize) -> SimOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = SimState::fresh(st);
    let basis = st.basis();
    let mut steps = 0;
    while steps < max_steps && !state.all_decided() {
        steps += 1;
        let b = rng.gen_range(0..basis.len());
        let value = if rng.gen_bool(0.5) { Value::T } else { Value::F };
        let ev = ScheduleEvent::new(basis[b].clone(), value);
        if state.try_commit(st, &ev).is_ok() && detect_deadlock(st, &state) == state.undecided() {
            break;
        }
    }
    SimOutcome::finish(st, state, Vec::new(), steps)
}
