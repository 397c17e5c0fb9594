//! Value assignments, continuity, and the agreement check tying continuity to
//! the intertwined relation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::relations::{components, intertwined_graph};
use crate::{Error, PointId, PointSet, Result, SemiTopology};

/// One of the two values a participant can announce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    T,
    F,
}

impl Value {
    pub const ALL: [Value; 2] = [Value::T, Value::F];

    pub fn as_str(self) -> &'static str {
        match self {
            Value::T => "T",
            Value::F => "F",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value must be \"T\" or \"F\", got {0:?}")]
pub struct ParseValueError(pub String);

impl FromStr for Value {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(Value::T),
            "F" => Ok(Value::F),
            other => Err(ParseValueError(String::from(other))),
        }
    }
}

/// Total map from the points of one semitopology to values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueAssignment {
    values: Vec<Value>,
}

impl ValueAssignment {
    pub fn constant(st: &SemiTopology, v: Value) -> Self {
        ValueAssignment { values: alloc::vec![v; st.len()] }
    }

    pub fn from_fn(st: &SemiTopology, f: impl FnMut(PointId) -> Value) -> Self {
        ValueAssignment { values: st.ids().map(f).collect() }
    }

    /// Indexed by point id; the length must match the universe.
    pub fn from_values(st: &SemiTopology, values: Vec<Value>) -> Result<Self> {
        check_len(st, values.len())?;
        Ok(ValueAssignment { values })
    }

    /// Builds from `(identifier, value)` pairs; later pairs win. Every point
    /// of the universe must be mentioned.
    pub fn from_names<I, S>(st: &SemiTopology, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Value)>,
        S: AsRef<str>,
    {
        let mut slots: Vec<Option<Value>> = alloc::vec![None; st.len()];
        for (name, v) in pairs {
            slots[st.id(name.as_ref())?.0] = Some(v);
        }
        let missing: Vec<String> =
            st.ids().filter(|p| slots[p.0].is_none()).map(|p| String::from(st.name(p))).collect();
        if !missing.is_empty() {
            return Err(Error::TotalityError { missing });
        }
        Ok(ValueAssignment { values: slots.into_iter().flatten().collect() })
    }

    pub fn get(&self, p: PointId) -> Value {
        self.values[p.0]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn is_constant_on(&self, s: &PointSet) -> bool {
        let mut it = s.iter().map(|p| self.values[p.0]);
        match it.next() {
            Some(first) => it.all(|v| v == first),
            None => true,
        }
    }

    fn check(&self, st: &SemiTopology) -> Result<()> {
        check_len(st, self.values.len())
    }
}

fn check_len(st: &SemiTopology, len: usize) -> Result<()> {
    match len.cmp(&st.len()) {
        core::cmp::Ordering::Equal => Ok(()),
        core::cmp::Ordering::Less => Err(Error::TotalityError {
            missing: st.ids().skip(len).map(|p| String::from(st.name(p))).collect(),
        }),
        core::cmp::Ordering::Greater => Err(Error::InvalidParameter("assignment covers more points than the universe")),
    }
}

/// Returns a basis element containing `p` on which `f` is constant, if any.
pub fn is_continuous_at<'a>(
    st: &'a SemiTopology,
    f: &ValueAssignment,
    p: PointId,
) -> Result<Option<&'a PointSet>> {
    st.check_point(p)?;
    f.check(st)?;
    Ok(st.neighborhood_basis(p)?.into_iter().find(|b| f.is_constant_on(b)))
}

/// Continuity by direct quantification over the enumerated opens.
pub fn is_continuous_at_oracle(
    st: &SemiTopology,
    f: &ValueAssignment,
    p: PointId,
    limit: usize,
) -> Result<bool> {
    st.check_point(p)?;
    f.check(st)?;
    Ok(st
        .enumerate_opens_with_limit(limit)?
        .iter()
        .any(|o| o.contains(p) && f.is_constant_on(o)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    pub continuous: PointSet,
    pub discontinuous: PointSet,
    /// For each continuous point, in id order, a basis element containing it
    /// on which the assignment is constant.
    pub witnesses: Vec<(PointId, PointSet)>,
}

impl ContinuityReport {
    pub fn is_continuous_everywhere(&self) -> bool {
        self.discontinuous.is_empty()
    }
}

pub fn continuity_report(st: &SemiTopology, f: &ValueAssignment) -> Result<ContinuityReport> {
    f.check(st)?;
    let mut report = ContinuityReport {
        continuous: PointSet::new(),
        discontinuous: PointSet::new(),
        witnesses: Vec::new(),
    };
    for p in st.ids() {
        match is_continuous_at(st, f, p)? {
            Some(w) => {
                report.continuous.insert(p);
                report.witnesses.push((p, w.clone()));
            }
            None => {
                report.discontinuous.insert(p);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theorem1Verdict {
    Pass,
    /// Intertwined points, both continuous, with different values.
    IntertwinedDisagreement { p: PointId, q: PointId },
    /// The assignment is continuous everywhere but differs on two points of
    /// one component.
    ComponentDisagreement { p: PointId, q: PointId },
}

impl Theorem1Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Theorem1Verdict::Pass)
    }
}

/// Checks that continuous points agree with every intertwined continuous
/// point, and that an everywhere-continuous assignment is constant on each
/// transitively intertwined component.
///
/// Both statements are theorems, so a counterexample means the relation,
/// continuity or component code has drifted.
pub fn check_theorem1(st: &SemiTopology, f: &ValueAssignment) -> Result<Theorem1Verdict> {
    let report = continuity_report(st, f)?;
    for (p, q) in intertwined_graph(st) {
        if report.continuous.contains(p) && report.continuous.contains(q) && f.get(p) != f.get(q) {
            return Ok(Theorem1Verdict::IntertwinedDisagreement { p, q });
        }
    }
    if report.is_continuous_everywhere() {
        for class in components(st).classes {
            let first = class.first().expect("components are nonempty");
            if let Some(q) = class.iter().find(|&q| f.get(q) != f.get(first)) {
                return Ok(Theorem1Verdict::ComponentDisagreement { p: first, q });
            }
        }
    }
    Ok(Theorem1Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{majority, z_window};
    use crate::DEFAULT_ORACLE_LIMIT;

    fn split(st: &SemiTopology) -> ValueAssignment {
        ValueAssignment::from_fn(st, |p| if st.name(p).parse::<u32>().unwrap() <= 2 { Value::T } else { Value::F })
    }

    #[test]
    fn split_assignment_on_z_window() {
        let st = z_window(3);
        let f = split(&st);
        let w = is_continuous_at(&st, &f, st.id("0").unwrap()).unwrap().unwrap();
        assert_eq!(st.names_of(w), ["0", "1", "2"]);
        assert!(is_continuous_at(&st, &f, st.id("3").unwrap()).unwrap().is_none());

        let report = continuity_report(&st, &f).unwrap();
        assert_eq!(report.discontinuous, st.set_of(["3"]).unwrap());
        assert_eq!(report.witnesses.len(), 6);
        assert_eq!(check_theorem1(&st, &f).unwrap(), Theorem1Verdict::Pass);
    }

    #[test]
    fn constant_assignment_is_continuous_everywhere() {
        let st = z_window(3);
        for v in Value::ALL {
            let f = ValueAssignment::constant(&st, v);
            assert!(continuity_report(&st, &f).unwrap().is_continuous_everywhere());
            assert!(check_theorem1(&st, &f).unwrap().is_pass());
        }
    }

    #[test]
    fn majority_minority_point_is_discontinuous() {
        let st = majority(3);
        let f = ValueAssignment::from_names(&st, [("p0", Value::T), ("p1", Value::F), ("p2", Value::F)]).unwrap();
        let report = continuity_report(&st, &f).unwrap();
        assert_eq!(report.discontinuous, st.set_of(["p0"]).unwrap());
        for p in st.ids() {
            assert_eq!(
                is_continuous_at(&st, &f, p).unwrap().is_some(),
                is_continuous_at_oracle(&st, &f, p, DEFAULT_ORACLE_LIMIT).unwrap()
            );
        }
    }

    #[test]
    fn disagreement_at_discontinuous_points_is_allowed() {
        // a and b disagree, but neither is continuous.
        let st = SemiTopology::new(["a", "b"], [["a", "b"]]).unwrap();
        let f = ValueAssignment::from_names(&st, [("a", Value::T), ("b", Value::F)]).unwrap();
        assert!(check_theorem1(&st, &f).unwrap().is_pass());
    }

    #[test]
    fn totality_is_enforced() {
        let st = majority(3);
        let err = ValueAssignment::from_names(&st, [("p0", Value::T)]).unwrap_err();
        assert_eq!(err, Error::TotalityError { missing: alloc::vec![String::from("p1"), String::from("p2")] });
        assert!(ValueAssignment::from_names(&st, [("zz", Value::T)]).is_err());
        let short = ValueAssignment::constant(&crate::generators::discrete(2), Value::T);
        assert!(matches!(continuity_report(&st, &short), Err(Error::TotalityError { .. })));
        let long = ValueAssignment::constant(&z_window(2), Value::T);
        assert!(continuity_report(&st, &long).is_err());
    }

    #[test]
    fn value_tokens() {
        assert_eq!("T".parse::<Value>().unwrap(), Value::T);
        assert_eq!("F".parse::<Value>().unwrap(), Value::F);
        assert!("X".parse::<Value>().is_err());
    }
}
