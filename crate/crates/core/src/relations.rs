//! The intertwined relation and agreement components.
//!
//! Two points are intertwined when no open around one is disjoint from an
//! open around the other. Every open around `p` contains a basis element
//! around `p`, and a pair of disjoint opens stays disjoint when shrunk, so it
//! suffices to compare the basis neighborhoods of the two points.

use alloc::vec::Vec;

use crate::dsu::DisjointSets;
use crate::{PointId, PointSet, Result, SemiTopology};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinedWitness {
    pub p: PointId,
    pub q: PointId,
    /// Two disjoint basis elements containing `p` and `q` respectively;
    /// present exactly when the points are not intertwined.
    pub separating_pair: Option<(PointSet, PointSet)>,
}

impl IntertwinedWitness {
    pub fn is_intertwined(&self) -> bool {
        self.separating_pair.is_none()
    }
}

pub fn intertwined(st: &SemiTopology, p: PointId, q: PointId) -> Result<IntertwinedWitness> {
    st.check_point(p)?;
    st.check_point(q)?;
    Ok(IntertwinedWitness { p, q, separating_pair: separation(st, p, q) })
}

fn separation(st: &SemiTopology, p: PointId, q: PointId) -> Option<(PointSet, PointSet)> {
    let basis = st.basis();
    for &a in st.neighborhood_indices(p) {
        for &b in st.neighborhood_indices(q) {
            if basis[a].is_disjoint(&basis[b]) {
                return Some((basis[a].clone(), basis[b].clone()));
            }
        }
    }
    None
}

/// Literal reading of the definition over the full enumerated open family.
pub fn intertwined_oracle(st: &SemiTopology, p: PointId, q: PointId, limit: usize) -> Result<bool> {
    st.check_point(p)?;
    st.check_point(q)?;
    let opens = st.enumerate_opens_with_limit(limit)?;
    let around = |x: PointId| opens.iter().filter(move |o| o.contains(x));
    Ok(around(p).all(|o| around(q).all(|o2| o.intersects(o2))))
}

/// All unordered pairs `(p, q)` with `p < q` that are intertwined, in
/// lexicographic order.
pub fn intertwined_graph(st: &SemiTopology) -> Vec<(PointId, PointId)> {
    let mut edges = Vec::new();
    for p in st.ids() {
        for q in st.ids().skip(p.0 + 1) {
            if separation(st, p, q).is_none() {
                edges.push((p, q));
            }
        }
    }
    edges
}

/// Partition of the universe into classes of the transitive closure of the
/// intertwined relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Ordered by least member.
    pub classes: Vec<PointSet>,
}

impl ComponentPartition {
    pub fn class_of(&self, p: PointId) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(p))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn components(st: &SemiTopology) -> ComponentPartition {
    components_from_edges(st.len(), &intertwined_graph(st))
}

pub(crate) fn components_from_edges(n: usize, edges: &[(PointId, PointId)]) -> ComponentPartition {
    let mut dsu = DisjointSets::new(n);
    for &(p, q) in edges {
        dsu.union(p.0, q.0);
    }
    let mut by_root: Vec<Option<usize>> = alloc::vec![None; n];
    let mut classes: Vec<PointSet> = Vec::new();
    // Ascending scan: a class is opened at its least member.
    for p in 0..n {
        let root = dsu.find(p);
        let slot = *by_root[root].get_or_insert_with(|| {
            classes.push(PointSet::new());
            classes.len() - 1
        });
        classes[slot].insert(PointId(p));
    }
    ComponentPartition { classes }
}

/// Component partition computed from [`intertwined_oracle`] on every pair.
pub fn components_oracle(st: &SemiTopology, limit: usize) -> Result<ComponentPartition> {
    let mut edges = Vec::new();
    for p in st.ids() {
        for q in st.ids().skip(p.0 + 1) {
            if intertwined_oracle(st, p, q, limit)? {
                edges.push((p, q));
            }
        }
    }
    Ok(components_from_edges(st.len(), &edges))
}
