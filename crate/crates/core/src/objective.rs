//! Submodular objective oracles.
//!
//! Four families are provided: weighted coverage, facility location and
//! modular functions (all monotone), and the undirected cut function
//! (non-monotone). Every oracle is normalized (`f(∅) = 0`) and non-negative.
//!
//! Sets are passed as slices of element ids. Duplicate ids are tolerated and
//! treated as a single occurrence.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Result};

/// Dense element index into the ground set `0..n`.
pub type ElementId = usize;

/// A ground-set element. Ids are always the contiguous range `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub display_tag: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKindName {
    WeightedCoverage,
    FacilityLocation,
    GraphCut,
    Modular,
}

impl ObjectiveKindName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveKindName::WeightedCoverage => "weighted-coverage",
            ObjectiveKindName::FacilityLocation => "facility-location",
            ObjectiveKindName::GraphCut => "graph-cut",
            ObjectiveKindName::Modular => "modular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "weighted-coverage" => ObjectiveKindName::WeightedCoverage,
            "facility-location" => ObjectiveKindName::FacilityLocation,
            "graph-cut" => ObjectiveKindName::GraphCut,
            "modular" => ObjectiveKindName::Modular,
            _ => return None,
        })
    }
}

impl fmt::Display for ObjectiveKindName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind {
    WeightedCoverage {
        universe_weights: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    /// `similarity[c][e]` is the similarity between client `c` and element `e`.
    FacilityLocation { similarity: Vec<Vec<f64>> },
    GraphCut {
        edges: Vec<(usize, usize, f64)>,
        adjacency: Vec<Vec<(usize, f64)>>,
    },
    Modular { weights: Vec<f64> },
}

/// A normalized, non-negative submodular set function over `0..n`.
///
/// Every call to [`Objective::value`] or [`Objective::marginal`] bumps an
/// internal query counter, readable with [`Objective::queries`].
#[derive(Debug)]
pub struct Objective {
    kind: ObjectiveKind,
    n: usize,
    queries: AtomicU64,
}

impl Clone for Objective {
    fn clone(&self) -> Self {
        Objective {
            kind: self.kind.clone(),
            n: self.n,
            queries: AtomicU64::new(self.queries()),
        }
    }
}

impl PartialEq for Objective {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.kind == other.kind
    }
}

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return invalid(format!("{what} {i} must be finite and non-negative, got {w}"));
        }
    }
    Ok(())
}

impl Objective {
    /// `f(S) = Σ weight(u)` over universe items `u` covered by some element of `S`.
    pub fn weighted_coverage(universe_weights: Vec<f64>, covers: Vec<Vec<usize>>) -> Result<Self> {
        check_weights(&universe_weights, "universe weight")?;
        for (e, cover) in covers.iter().enumerate() {
            if let Some(&u) = cover.iter().find(|&&u| u >= universe_weights.len()) {
                return invalid(format!(
                    "element {e} covers universe item {u}, but the universe has {} items",
                    universe_weights.len()
                ));
            }
        }
        let covers = covers
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect::<Vec<_>>();
        let n = covers.len();
        Ok(Self::from_kind(
            ObjectiveKind::WeightedCoverage {
                universe_weights,
                covers,
            },
            n,
        ))
    }

    /// `f(S) = Σ_c max_{e ∈ S} sim(c, e)`, with `f(∅) = 0`.
    pub fn facility_location(similarity: Vec<Vec<f64>>) -> Result<Self> {
        let n = similarity.first().map_or(0, Vec::len);
        for (c, row) in similarity.iter().enumerate() {
            if row.len() != n {
                return invalid(format!(
                    "similarity row {c} has {} entries, expected {n}",
                    row.len()
                ));
            }
            check_weights(row, &format!("similarity of client {c} to element"))?;
        }
        Ok(Self::from_kind(ObjectiveKind::FacilityLocation { similarity }, n))
    }

    /// Total weight of edges with exactly one endpoint in `S`.
    pub fn cut_function(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u == v {
                return invalid(format!("self-loop on vertex {u}"));
            }
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) references a vertex outside 0..{n}"));
            }
            if !w.is_finite() || w < 0.0 {
                return invalid(format!("edge ({u}, {v}) has invalid weight {w}"));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(Self::from_kind(ObjectiveKind::GraphCut { edges, adjacency }, n))
    }

    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "weight")?;
        let n = weights.len();
        Ok(Self::from_kind(ObjectiveKind::Modular { weights }, n))
    }

    fn from_kind(kind: ObjectiveKind, n: usize) -> Self {
        Objective {
            kind,
            n,
            queries: AtomicU64::new(0),
        }
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn kind_name(&self) -> ObjectiveKindName {
        match self.kind {
            ObjectiveKind::WeightedCoverage { .. } => ObjectiveKindName::WeightedCoverage,
            ObjectiveKind::FacilityLocation { .. } => ObjectiveKindName::FacilityLocation,
            ObjectiveKind::GraphCut { .. } => ObjectiveKindName::GraphCut,
            ObjectiveKind::Modular { .. } => ObjectiveKindName::Modular,
        }
    }

    /// Number of ground-set elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_monotone(&self) -> bool {
        !matches!(self.kind, ObjectiveKind::GraphCut { .. })
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// A copy of this oracle with its query counter at zero.
    pub fn fresh(&self) -> Self {
        Self::from_kind(self.kind.clone(), self.n)
    }

    fn check_ids(&self, set: &[ElementId]) -> Result<()> {
        match set.iter().find(|&&e| e >= self.n) {
            Some(&e) => invalid(format!("element id {e} out of range 0..{}", self.n)),
            None => Ok(()),
        }
    }

    fn mask(&self, set: &[ElementId]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &e in set {
            mask[e] = true;
        }
        mask
    }

    /// `f(S)`.
    pub fn value(&self, set: &[ElementId]) -> Result<f64> {
        self.check_ids(set)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        // adding 0.0 turns the -0.0 of an empty float sum into 0.0
        Ok(self.value_masked(&self.mask(set)) + 0.0)
    }

    fn value_masked(&self, mask: &[bool]) -> f64 {
        match &self.kind {
            ObjectiveKind::WeightedCoverage {
                universe_weights,
                covers,
            } => {
                let mut covered = vec![false; universe_weights.len()];
                for (e, cover) in covers.iter().enumerate() {
                    if mask[e] {
                        for &u in cover {
                            covered[u] = true;
                        }
                    }
                }
                universe_weights
                    .iter()
                    .zip(&covered)
                    .filter(|(_, &c)| c)
                    .map(|(w, _)| w)
                    .sum()
            }
            ObjectiveKind::FacilityLocation { similarity } => similarity
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(mask)
                        .filter(|(_, &m)| m)
                        .map(|(&s, _)| s)
                        .fold(0.0, f64::max)
                })
                .sum(),
            ObjectiveKind::GraphCut { edges, .. } => edges
                .iter()
                .filter(|(u, v, _)| mask[*u] != mask[*v])
                .map(|(_, _, w)| w)
                .sum(),
            ObjectiveKind::Modular { weights } => weights
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(w, _)| w)
                .sum(),
        }
    }

    /// `f(e | S) = f(S ∪ {e}) − f(S)`; zero when `e ∈ S`.
    ///
    /// Each kind uses a closed-form incremental evaluation that agrees with
    /// the two-call definition up to floating-point rounding.
    pub fn marginal(&self, e: ElementId, set: &[ElementId]) -> Result<f64> {
        self.check_ids(set)?;
        self.check_ids(&[e])?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        let mask = self.mask(set);
        if mask[e] {
            return Ok(0.0);
        }
        Ok(self.marginal_masked(e, &mask))
    }

    fn marginal_masked(&self, e: ElementId, mask: &[bool]) -> f64 {
        match &self.kind {
            ObjectiveKind::WeightedCoverage {
                universe_weights,
                covers,
            } => {
                let mut covered = vec![false; universe_weights.len()];
                for (x, cover) in covers.iter().enumerate() {
                    if mask[x] {
                        for &u in cover {
                            covered[u] = true;
                        }
                    }
                }
                covers[e]
                    .iter()
                    .filter(|&&u| !covered[u])
                    .map(|&u| universe_weights[u])
                    .sum()
            }
            ObjectiveKind::FacilityLocation { similarity } => similarity
                .iter()
                .map(|row| {
                    let best = row
                        .iter()
                        .zip(mask)
                        .filter(|(_, &m)| m)
                        .map(|(&s, _)| s)
                        .fold(0.0, f64::max);
                    (row[e] - best).max(0.0)
                })
                .sum(),
            ObjectiveKind::GraphCut { adjacency, .. } => adjacency[e]
                .iter()
                .map(|&(v, w)| if mask[v] { -w } else { w })
                .sum(),
            ObjectiveKind::Modular { weights } => weights[e],
        }
    }

    /// The two-call definition `f(S + e) − f(S)`, used to cross-check the
    /// incremental path.
    pub fn marginal_by_difference(&self, e: ElementId, set: &[ElementId]) -> Result<f64> {
        let mut with = set.to_vec();
        with.push(e);
        Ok(self.value(&with)? - self.value(set)?)
    }

    /// Singleton values `f({e})` for every element.
    pub fn singleton_values(&self) -> Vec<f64> {
        (0..self.n)
            .map(|e| self.value(&[e]).expect("ids in range"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn modular_values_and_marginals() {
        let f = Objective::modular(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.value(&[0, 2]).unwrap(), 4.0);
        assert_eq!(f.value(&[]).unwrap(), 0.0);
        assert_eq!(f.marginal(1, &[0]).unwrap(), 2.0);
        assert_eq!(f.marginal(0, &[0]).unwrap(), 0.0);
        let g = Objective::modular(vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(g.value(&[0, 1]).unwrap(), 2.0);
        let h = Objective::modular(vec![0.5]).unwrap();
        assert_eq!(h.value(&[0]).unwrap(), 0.5);
    }

    #[test]
    fn coverage_union() {
        let f = Objective::weighted_coverage(vec![1.0; 3], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(f.value(&[0, 1]).unwrap(), 3.0);
        assert_eq!(f.marginal(1, &[0]).unwrap(), 1.0);
        assert!(f.is_monotone());

        let empty = Objective::weighted_coverage(vec![1.0], vec![vec![], vec![]]).unwrap();
        assert_eq!(empty.value(&[0, 1]).unwrap(), 0.0);

        let single = Objective::weighted_coverage(vec![1.0], vec![vec![0]; 4]).unwrap();
        assert_eq!(single.value(&[2]).unwrap(), 1.0);
        assert_eq!(single.value(&[0, 1, 3]).unwrap(), 1.0);
    }

    #[test]
    fn facility_location_per_row_max() {
        let f = Objective::facility_location(vec![vec![0.2, 0.9]]).unwrap();
        assert_eq!(f.value(&[0]).unwrap(), 0.2);
        assert_eq!(f.value(&[0, 1]).unwrap(), 0.9);
        let g = Objective::facility_location(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(g.value(&[0, 1]).unwrap(), 2.0);
    }

    #[test]
    fn cut_function_path_and_edge() {
        let f = Objective::cut_function(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(f.value(&[1]).unwrap(), 2.0);
        assert_eq!(f.value(&[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(f.value(&[0, 2]).unwrap(), 2.0);
        assert!(!f.is_monotone());

        let g = Objective::cut_function(2, vec![(0, 1, 5.0)]).unwrap();
        assert_eq!(g.marginal(1, &[0]).unwrap(), -5.0);
    }

    #[test]
    fn constructor_errors() {
        assert!(Objective::modular(vec![1.0, -1.0]).is_err());
        assert!(Objective::weighted_coverage(vec![-0.5], vec![vec![0]]).is_err());
        assert!(Objective::weighted_coverage(vec![1.0], vec![vec![3]]).is_err());
        assert!(Objective::facility_location(vec![vec![0.1, -0.2]]).is_err());
        assert!(Objective::facility_location(vec![vec![0.1, 0.2], vec![0.3]]).is_err());
        assert!(Objective::cut_function(3, vec![(1, 1, 1.0)]).is_err());
        assert!(Objective::cut_function(3, vec![(0, 1, -1.0)]).is_err());
    }

    #[test]
    fn out_of_range_ids_rejected() {
        let f = Objective::modular(vec![1.0, 2.0]).unwrap();
        assert!(f.value(&[2]).is_err());
        assert!(f.marginal(5, &[]).is_err());
        assert!(f.marginal(0, &[7]).is_err());
    }

    #[test]
    fn query_counter_tracks_calls() {
        let f = Objective::modular(vec![1.0, 2.0]).unwrap();
        f.value(&[0]).unwrap();
        f.marginal(1, &[0]).unwrap();
        assert_eq!(f.queries(), 2);
        assert_eq!(f.fresh().queries(), 0);
        f.reset_queries();
        assert_eq!(f.queries(), 0);
    }

    #[test]
    fn incremental_marginal_matches_difference() {
        let objectives = [
            Objective::weighted_coverage(
                vec![0.3, 1.7, 2.0, 0.1],
                vec![vec![0, 1], vec![1, 2, 3], vec![0], vec![2, 3]],
            )
            .unwrap(),
            Objective::facility_location(vec![
                vec![0.1, 0.5, 0.9, 0.3],
                vec![0.8, 0.2, 0.4, 0.0],
            ])
            .unwrap(),
            Objective::cut_function(4, vec![(0, 1, 1.5), (1, 2, 0.5), (2, 3, 2.0), (0, 3, 1.0)])
                .unwrap(),
            Objective::modular(vec![0.4, 0.0, 1.1, 2.5]).unwrap(),
        ];
        for f in &objectives {
            for bits in 0u32..16 {
                let set: Vec<_> = (0..4).filter(|i| bits & (1 << i) != 0).collect();
                for e in 0..4 {
                    let fast = f.marginal(e, &set).unwrap();
                    let slow = f.marginal_by_difference(e, &set).unwrap();
                    assert!(close(fast, slow), "{:?} e={e} S={set:?}", f.kind_name());
                }
            }
        }
    }
}
