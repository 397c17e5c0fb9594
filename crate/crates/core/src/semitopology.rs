use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Point, PointId, PointSet, Result};

/// Default cap on the basis size accepted by the brute-force open enumeration.
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

/// What to do when some point lies in no basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coverage {
    /// Report [`Error::CoverageViolation`].
    #[default]
    Strict,
    /// Add the whole universe as an extra basis element.
    AddUniverse,
}

/// A finite semitopology given by a point universe and a generating basis.
///
/// The opens are exactly the unions of subfamilies of the basis. The basis is
/// stored canonically: empty elements dropped, duplicates merged, sorted by
/// [`PointSet`] order. Points keep the order in which they were first given;
/// that order defines their [`PointId`].
///
/// Immutable after construction. Equality is structural on external names:
/// two semitopologies are equal when they have the same point identifiers and
/// the same basis, whatever the internal numbering.
#[derive(Debug, Clone)]
pub struct SemiTopology {
    points: Vec<Point>,
    index: BTreeMap<Point, PointId>,
    basis: Vec<PointSet>,
    /// Per point, indices into `basis` of the elements containing it.
    neighborhoods: Vec<Vec<usize>>,
}

/// Name-level canonical view: points and basis rows sorted lexicographically
/// by identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm<'a> {
    pub points: Vec<&'a str>,
    pub basis: Vec<Vec<&'a str>>,
}

impl SemiTopology {
    pub fn new<I, S, B, R, T>(points: I, basis: B) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
        B: IntoIterator<Item = R>,
        R: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        Self::with_coverage(points, basis, Coverage::Strict)
    }

    pub fn with_coverage<I, S, B, R, T>(points: I, basis: B, coverage: Coverage) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
        B: IntoIterator<Item = R>,
        R: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut index = BTreeMap::new();
        for p in points {
            let p = Point::new(p.as_ref())?;
            if !index.contains_key(&p) {
                index.insert(p.clone(), PointId(names.len()));
                names.push(p);
            }
        }
        let mut sets = Vec::new();
        for row in basis {
            let mut s = PointSet::new();
            for name in row {
                let name = name.as_ref();
                let id = index
                    .get(name)
                    .ok_or_else(|| Error::BasisOutOfUniverse { point: String::from(name) })?;
                s.insert(*id);
            }
            sets.push(s);
        }
        Self::assemble(names, index, sets, coverage)
    }

    /// Builds from already-indexed parts; `points[i]` is the name of `PointId(i)`.
    pub fn from_parts(points: Vec<Point>, basis: Vec<PointSet>) -> Result<Self> {
        Self::from_parts_with(points, basis, Coverage::Strict)
    }

    pub fn from_parts_with(points: Vec<Point>, basis: Vec<PointSet>, coverage: Coverage) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), PointId(i)).is_some() {
                return Err(Error::InvalidParameter("duplicate point identifier"));
            }
        }
        let n = points.len();
        for s in &basis {
            if let Some(max) = s.last() {
                if max.0 >= n {
                    return Err(Error::PointOutOfUniverse { index: max.0, len: n });
                }
            }
        }
        Self::assemble(points, index, basis, coverage)
    }

    fn assemble(
        points: Vec<Point>,
        index: BTreeMap<Point, PointId>,
        basis: Vec<PointSet>,
        coverage: Coverage,
    ) -> Result<Self> {
        let mut basis: Vec<PointSet> = basis
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = points.len();
        let mut covered = PointSet::new();
        for s in &basis {
            covered.union_with(s);
        }
        let uncovered = PointSet::full(n).difference(&covered);
        if !uncovered.is_empty() {
            match coverage {
                Coverage::Strict => {
                    return Err(Error::CoverageViolation {
                        uncovered: uncovered.iter().map(|p| String::from(points[p.0].as_str())).collect(),
                    })
                }
                Coverage::AddUniverse => {
                    let full = PointSet::full(n);
                    if let Err(at) = basis.binary_search(&full) {
                        basis.insert(at, full);
                    }
                }
            }
        }
        let mut neighborhoods = alloc::vec![Vec::new(); n];
        for (b, s) in basis.iter().enumerate() {
            for p in s {
                neighborhoods[p.0].push(b);
            }
        }
        Ok(SemiTopology { points, index, basis, neighborhoods })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.points.len()).map(PointId)
    }

    pub fn name(&self, p: PointId) -> &str {
        self.points[p.0].as_str()
    }

    pub fn id(&self, name: &str) -> Result<PointId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(String::from(name)))
    }

    pub fn set_of<I, S>(&self, names: I) -> Result<PointSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.id(n.as_ref())).collect()
    }

    /// Member names of `s` in point-id order.
    pub fn names_of<'a>(&'a self, s: &PointSet) -> Vec<&'a str> {
        s.iter().map(|p| self.name(p)).collect()
    }

    pub fn universe(&self) -> PointSet {
        PointSet::full(self.points.len())
    }

    pub fn basis(&self) -> &[PointSet] {
        &self.basis
    }

    pub fn check_point(&self, p: PointId) -> Result<()> {
        if p.0 < self.points.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfUniverse { index: p.0, len: self.points.len() })
        }
    }

    pub fn check_set(&self, s: &PointSet) -> Result<()> {
        match s.last() {
            Some(p) => self.check_point(p),
            None => Ok(()),
        }
    }

    pub(crate) fn neighborhood_indices(&self, p: PointId) -> &[usize] {
        &self.neighborhoods[p.0]
    }

    /// Basis elements containing `p`, in canonical order. Never empty.
    pub fn neighborhood_basis(&self, p: PointId) -> Result<Vec<&PointSet>> {
        self.check_point(p)?;
        Ok(self.neighborhoods[p.0].iter().map(|&b| &self.basis[b]).collect())
    }

    /// The largest open contained in `s`: the union of all basis elements
    /// inside it.
    pub fn interior(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        let mut out = PointSet::new();
        for b in self.basis.iter().filter(|b| b.is_subset(s)) {
            out.union_with(b);
        }
        Ok(out)
    }

    /// `s` is open iff it is the union of the basis elements it contains.
    pub fn is_open(&self, s: &PointSet) -> Result<bool> {
        Ok(self.interior(s)? == *s)
    }

    pub fn enumerate_opens(&self) -> Result<Vec<PointSet>> {
        self.enumerate_opens_with_limit(DEFAULT_ORACLE_LIMIT)
    }

    /// Brute-force oracle: every union of a subfamily of the basis,
    /// deduplicated and sorted. Refuses bases larger than `limit`.
    pub fn enumerate_opens_with_limit(&self, limit: usize) -> Result<Vec<PointSet>> {
        if self.basis.len() > limit {
            return Err(Error::OracleLimitExceeded { basis: self.basis.len(), limit });
        }
        let mut opens = BTreeSet::new();
        opens.insert(PointSet::new());
        for b in &self.basis {
            let grown: Vec<PointSet> = opens.iter().map(|o| o.union(b)).collect();
            opens.extend(grown);
        }
        Ok(opens.into_iter().collect())
    }

    pub fn canonical_form(&self) -> CanonicalForm<'_> {
        let mut points: Vec<&str> = self.points.iter().map(Point::as_str).collect();
        points.sort_unstable();
        let mut basis: Vec<Vec<&str>> = self
            .basis
            .iter()
            .map(|s| {
                let mut row = self.names_of(s);
                row.sort_unstable();
                row
            })
            .collect();
        basis.sort();
        CanonicalForm { points, basis }
    }

    /// Copy with every identifier prefixed by `prefix`.
    pub fn relabel(&self, prefix: &str) -> Result<SemiTopology> {
        let points = self
            .points
            .iter()
            .map(|p| Point::new(format!("{prefix}{p}")))
            .collect::<Result<Vec<_>>>()?;
        SemiTopology::from_parts(points, self.basis.clone())
    }
}

impl PartialEq for SemiTopology {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

impl Eq for SemiTopology {}
