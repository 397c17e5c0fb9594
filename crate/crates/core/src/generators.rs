//! Named semitopologies and the bridge composition.
//!
//! Generated identifiers are decimal integers (`z_window`, `discrete`,
//! `random_semitopology`) or `p0, p1, ..` (`majority`).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semitopology::Coverage;
use crate::{Error, Point, PointId, PointSet, Result, SemiTopology};

fn numbered(n: usize, prefix: &str) -> Vec<Point> {
    (0..n)
        .map(|i| Point::new(format!("{prefix}{i}")).expect("generated identifiers are valid"))
        .collect()
}

fn build(points: Vec<Point>, basis: Vec<PointSet>) -> SemiTopology {
    SemiTopology::from_parts(points, basis).expect("generator output covers its universe")
}

/// Simple majority over `n` participants `p0..p(n-1)`.
///
/// The basis is the family of minimal majorities (subsets of size
/// `n/2 + 1`); its unions are exactly the majority subsets.
///
/// # Panics
/// If `n == 0`.
pub fn majority(n: usize) -> SemiTopology {
    assert!(n >= 1, "majority needs at least one participant");
    build(numbered(n, "p"), combinations(n, n / 2 + 1))
}

/// All `k`-subsets of `{0..n}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<PointSet> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.iter().map(|&i| PointId(i)).collect());
        // Advance the rightmost index that still has room.
        let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Finite window `0..=2k` of the integers, generated by the triples
/// `{2i, 2i+1, 2i+2}` for `0 <= i < k`.
///
/// # Panics
/// If `k == 0`.
pub fn z_window(k: usize) -> SemiTopology {
    assert!(k >= 1, "z_window needs at least one triple");
    let basis = (0..k).map(|i| (2 * i..=2 * i + 2).map(PointId).collect()).collect();
    build(numbered(2 * k + 1, ""), basis)
}

/// `n` points whose basis is all singletons, so every subset is open.
///
/// # Panics
/// If `n == 0`.
pub fn discrete(n: usize) -> SemiTopology {
    assert!(n >= 1, "discrete needs at least one point");
    build(numbered(n, ""), (0..n).map(|i| PointSet::singleton(PointId(i))).collect())
}

/// Which combined coalitions the bridge point may join.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BridgeSides {
    /// `r` acts only together with a nonempty open from each side.
    #[default]
    NonEmpty,
    /// Also admit an empty side, so `r` may act with one side only, or alone.
    AllowEmpty,
}

/// Joins `e` and `t` through a fresh bridging point `r`.
pub fn bridge(e: &SemiTopology, t: &SemiTopology, r: &str) -> Result<SemiTopology> {
    bridge_with(e, t, r, BridgeSides::NonEmpty)
}

/// Bridge composition. Points are those of `e`, then `r`, then those of `t`.
/// The basis is `basis(e) ∪ basis(t) ∪ { a ∪ {r} ∪ b }` for basis elements
/// `a` of `e` and `b` of `t`, extended with `∅` on either side under
/// [`BridgeSides::AllowEmpty`].
pub fn bridge_with(e: &SemiTopology, t: &SemiTopology, r: &str, sides: BridgeSides) -> Result<SemiTopology> {
    let r = Point::new(r)?;
    let shared: Vec<String> = e
        .points()
        .iter()
        .filter(|p| t.id(p.as_str()).is_ok())
        .map(|p| p.to_string())
        .collect();
    if !shared.is_empty() {
        return Err(Error::UniverseOverlap { shared });
    }
    if e.id(r.as_str()).is_ok() || t.id(r.as_str()).is_ok() {
        return Err(Error::BridgePointCollision(r.into_string()));
    }

    let r_id = PointId(e.len());
    let offset = e.len() + 1;
    let shift = |s: &PointSet| -> PointSet { s.iter().map(|p| PointId(p.0 + offset)).collect() };

    let mut points: Vec<Point> = e.points().to_vec();
    points.push(r);
    points.extend_from_slice(t.points());

    let mut left: Vec<PointSet> = e.basis().to_vec();
    let mut right: Vec<PointSet> = t.basis().iter().map(shift).collect();
    let mut basis: Vec<PointSet> = left.iter().chain(&right).cloned().collect();
    if sides == BridgeSides::AllowEmpty {
        left.push(PointSet::new());
        right.push(PointSet::new());
    }
    for a in &left {
        for b in &right {
            let mut joined = a.union(b);
            joined.insert(r_id);
            basis.push(joined);
        }
    }
    SemiTopology::from_parts(points, basis)
}

/// Random instance for property tests: `n` points named `0..n`, `m` random
/// nonempty basis sets (each point included with probability 1/2, redrawn if
/// empty), then a singleton for every uncovered point.
///
/// Deterministic per seed: the stream is ChaCha8 (`rand_chacha` 0.3) seeded
/// with `seed_from_u64(seed)`, sampled with `rand` 0.8's `gen_bool(0.5)`.
///
/// # Panics
/// If `n == 0` or `m == 0`.
pub fn random_semitopology(n: usize, m: usize, seed: u64) -> SemiTopology {
    assert!(n >= 1 && m >= 1, "random_semitopology needs n >= 1 and m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = Vec::with_capacity(m + n);
    for _ in 0..m {
        loop {
            let s: PointSet = (0..n).filter(|_| rng.gen_bool(0.5)).map(PointId).collect();
            if !s.is_empty() {
                basis.push(s);
                break;
            }
        }
    }
    let mut covered = PointSet::new();
    for s in &basis {
        covered.union_with(s);
    }
    basis.extend(PointSet::full(n).difference(&covered).iter().map(PointSet::singleton));
    SemiTopology::from_parts_with(numbered(n, ""), basis, Coverage::Strict)
        .expect("singleton repair covers every point")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{components, intertwined, intertwined_graph};
    use alloc::vec;

    fn rows(st: &SemiTopology) -> Vec<Vec<&str>> {
        st.basis().iter().map(|b| st.names_of(b)).collect()
    }

    #[test]
    fn majority_bases() {
        assert_eq!(rows(&majority(3)), vec![vec!["p0", "p1"], vec!["p0", "p2"], vec!["p1", "p2"]]);
        assert_eq!(rows(&majority(1)), vec![vec!["p0"]]);
        let m4 = majority(4);
        assert_eq!(m4.basis().len(), 4);
        assert!(m4.basis().iter().all(|b| b.len() == 3));
    }

    #[test]
    fn majority_opens_are_the_majorities() {
        for n in 1..=6 {
            let st = majority(n);
            let opens = st.enumerate_opens().unwrap();
            let majorities = (0u32..1 << n).filter(|m| 2 * m.count_ones() as usize > n).count();
            assert_eq!(opens.len(), majorities + 1, "n={n}");
            assert!(opens.iter().all(|o| o.is_empty() || 2 * o.len() > n));
        }
    }

    #[test]
    fn z_window_shapes() {
        assert_eq!(rows(&z_window(3)), vec![vec!["0", "1", "2"], vec!["2", "3", "4"], vec!["4", "5", "6"]]);
        assert_eq!(rows(&z_window(1)), vec![vec!["0", "1", "2"]]);
        let st = z_window(2);
        let opens = st.enumerate_opens().unwrap();
        assert_eq!(opens.len(), 4);
        assert!(opens.contains(&st.set_of(["0", "1", "2", "3", "4"]).unwrap()));
    }

    #[test]
    fn discrete_shapes() {
        assert_eq!(discrete(2).enumerate_opens().unwrap().len(), 4);
        assert_eq!(components(&discrete(3)).len(), 3);
        assert_eq!(discrete(1).canonical_form().basis, vec![vec!["0"]]);
        assert!(intertwined_graph(&discrete(4)).is_empty());
    }

    #[test]
    fn bridge_of_two_majorities() {
        let e = majority(3).relabel("e").unwrap();
        let t = majority(3).relabel("t").unwrap();
        let b = bridge(&e, &t, "r").unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!(b.basis().len(), 15);
        assert!(!b.is_open(&b.set_of(["r"]).unwrap()).unwrap());
        assert_eq!(components(&b).len(), 1);
        // Sides are not intertwined with each other directly.
        assert!(!intertwined(&b, b.id("ep0").unwrap(), b.id("tp0").unwrap()).unwrap().is_intertwined());
    }

    #[test]
    fn bridge_allow_empty_lets_r_act_alone() {
        let e = majority(3).relabel("e").unwrap();
        let t = majority(3).relabel("t").unwrap();
        let b = bridge_with(&e, &t, "r", BridgeSides::AllowEmpty).unwrap();
        assert!(b.is_open(&b.set_of(["r"]).unwrap()).unwrap());
        assert_eq!(b.basis().len(), 3 + 3 + 16);
    }

    #[test]
    fn bridge_errors() {
        let m = majority(3);
        assert!(matches!(bridge(&m, &m, "r"), Err(Error::UniverseOverlap { .. })));
        let t = majority(3).relabel("t").unwrap();
        assert_eq!(bridge(&m, &t, "p1").unwrap_err(), Error::BridgePointCollision(String::from("p1")));
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = random_semitopology(5, 4, 7);
        let b = random_semitopology(5, 4, 7);
        assert_eq!(a, b);
        assert_eq!(a.basis(), b.basis());
        let rebuilt = SemiTopology::new(a.canonical_form().points, a.canonical_form().basis).unwrap();
        assert_eq!(rebuilt, a);
        assert_ne!(random_semitopology(5, 4, 8).basis(), a.basis());
    }
}
