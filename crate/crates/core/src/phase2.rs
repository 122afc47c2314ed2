//! Phase II: once the deleted set is known, solve on the surviving summary and
//! keep the better of the solver output and the surviving candidate `A \ D`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::ElementId;
use crate::summary::Summary;

/// Largest ground set exhaustive search accepts by default.
pub const EXHAUSTIVE_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearchParams {
    /// Maximum number of accepted moves per start point.
    pub max_moves: usize,
    /// A move is accepted when it improves the value by a factor `1 + delta`.
    pub delta: f64,
}

impl Default for LocalSearchParams {
    fn default() -> Self {
        LocalSearchParams {
            max_moves: 10_000,
            delta: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    Greedy,
    Exhaustive { cap: usize },
    LocalSearch(LocalSearchParams),
}

impl SolverKind {
    pub fn exhaustive() -> Self {
        SolverKind::Exhaustive {
            cap: EXHAUSTIVE_CAP,
        }
    }

    pub fn local_search() -> Self {
        SolverKind::LocalSearch(LocalSearchParams::default())
    }

    /// Approximation factor the solver is credited with when evaluating
    /// bounds: 2 for greedy (monotone objectives), 1 for exhaustive search.
    /// Local search is credited with a nominal 4.
    pub fn beta(&self) -> f64 {
        match self {
            SolverKind::Greedy => 2.0,
            SolverKind::Exhaustive { .. } => 1.0,
            SolverKind::LocalSearch(_) => 4.0,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "greedy" => Some(SolverKind::Greedy),
            "exhaustive" => Some(SolverKind::exhaustive()),
            "localsearch" | "local-search" => Some(SolverKind::local_search()),
            _ => None,
        }
    }

    pub fn solve(&self, ground: &[ElementId], instance: &Instance) -> Result<Vec<ElementId>> {
        match *self {
            SolverKind::Greedy => greedy_matroid(ground, instance),
            SolverKind::Exhaustive { cap } => exhaustive_opt(ground, instance, cap),
            SolverKind::LocalSearch(params) => local_search_nonmonotone(ground, instance, params),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Greedy => "greedy",
            SolverKind::Exhaustive { .. } => "exhaustive",
            SolverKind::LocalSearch(_) => "localsearch",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionSource {
    /// The surviving candidate solution `A \ D`.
    SurvivingCandidate,
    SolverOutput,
}

impl fmt::Display for SolutionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionSource::SurvivingCandidate => "a-prime",
            SolutionSource::SolverOutput => "alg-output",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    pub set: Vec<ElementId>,
    pub value: f64,
    pub source: SolutionSource,
    pub beta_claimed: f64,
    /// `f(A \ D)`.
    pub surviving_value: f64,
    /// More elements were deleted than the summary was built for.
    pub guarantee_void: bool,
}

fn sorted_unique(ids: impl IntoIterator<Item = ElementId>) -> Vec<ElementId> {
    ids.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Runs Phase II of `summary` against the deleted set.
pub fn phase2(
    summary: &Summary,
    deleted: &[ElementId],
    instance: &Instance,
    solver: SolverKind,
) -> Result<RobustSolution> {
    let deleted: BTreeSet<_> = deleted.iter().copied().collect();
    let survivors: Vec<_> = summary
        .solution_ids()
        .into_iter()
        .filter(|e| !deleted.contains(e))
        .collect();
    let ground = sorted_unique(
        summary
            .all_ids()
            .into_iter()
            .filter(|e| !deleted.contains(e)),
    );
    let solver_set = solver.solve(&ground, instance)?;
    let surviving_value = instance.objective.value(&survivors)?;
    let solver_value = instance.objective.value(&solver_set)?;
    let (set, value, source) = if solver_value > surviving_value {
        (sorted_unique(solver_set), solver_value, SolutionSource::SolverOutput)
    } else {
        (
            sorted_unique(survivors),
            surviving_value,
            SolutionSource::SurvivingCandidate,
        )
    };
    Ok(RobustSolution {
        set,
        value,
        source,
        beta_claimed: solver.beta(),
        surviving_value,
        guarantee_void: deleted.len() > summary.d,
    })
}

/// Greedy over a matroid: repeatedly add the feasible element with the
/// largest positive marginal gain (ties to the smaller id).
pub fn greedy_matroid(ground: &[ElementId], instance: &Instance) -> Result<Vec<ElementId>> {
    let mut remaining = sorted_unique(ground.iter().copied());
    let mut chosen = Vec::new();
    loop {
        let mut best: Option<(ElementId, f64)> = None;
        let mut infeasible = Vec::new();
        for &e in &remaining {
            if !instance.matroid.can_add(&chosen, e)? {
                infeasible.push(e);
                continue;
            }
            let m = instance.objective.marginal(e, &chosen)?;
            if m > 0.0 && best.is_none_or(|(_, b)| m > b) {
                best = Some((e, m));
            }
        }
        let Some((e, _)) = best else { break };
        chosen.push(e);
        remaining.retain(|&x| x != e && !infeasible.contains(&x));
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Exact maximizer by enumerating independent subsets, pruned by
/// downward closure. Ties go to the lexicographically smallest id set.
pub fn exhaustive_opt(
    ground: &[ElementId],
    instance: &Instance,
    cap: usize,
) -> Result<Vec<ElementId>> {
    let ground = sorted_unique(ground.iter().copied());
    if ground.len() > cap {
        return Err(Error::Refused(format!(
            "exhaustive search over {} elements exceeds the cap of {cap}",
            ground.len()
        )));
    }
    let mut best = (instance.objective.value(&[])?, Vec::new());
    let mut current = Vec::new();
    search(&ground, 0, &mut current, instance, &mut best)?;
    Ok(best.1)
}

fn search(
    ground: &[ElementId],
    from: usize,
    current: &mut Vec<ElementId>,
    instance: &Instance,
    best: &mut (f64, Vec<ElementId>),
) -> Result<()> {
    for i in from..ground.len() {
        let e = ground[i];
        if !instance.matroid.can_add(current, e)? {
            continue;
        }
        current.push(e);
        let v = instance.objective.value(current)?;
        if v > best.0 || (v == best.0 && *current < best.1) {
            *best = (v, current.clone());
        }
        search(ground, i + 1, current, instance, best)?;
        current.pop();
    }
    Ok(())
}

/// Add/drop/swap local search accepting moves that improve the value by a
/// factor of at least `1 + delta`, run from the greedy solution and from the
/// empty set; the better result is returned.
pub fn local_search_nonmonotone(
    ground: &[ElementId],
    instance: &Instance,
    params: LocalSearchParams,
) -> Result<Vec<ElementId>> {
    if !(params.delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "local search improvement factor must be positive, got {}",
            params.delta
        )));
    }
    let ground = sorted_unique(ground.iter().copied());
    let from_greedy = improve(greedy_matroid(&ground, instance)?, &ground, instance, params)?;
    let from_empty = improve(Vec::new(), &ground, instance, params)?;
    let a = instance.objective.value(&from_greedy)?;
    let b = instance.objective.value(&from_empty)?;
    Ok(if b > a { from_empty } else { from_greedy })
}

fn improve(
    mut current: Vec<ElementId>,
    ground: &[ElementId],
    instance: &Instance,
    params: LocalSearchParams,
) -> Result<Vec<ElementId>> {
    let f = &instance.objective;
    let mut value = f.value(&current)?;
    for _ in 0..params.max_moves {
        let target = value * (1.0 + params.delta);
        let accept = |v: f64| v > target && v > value;
        let mut moved = None;
        // add
        for &e in ground.iter().filter(|e| !current.contains(e)) {
            if instance.matroid.can_add(&current, e)? {
                let mut next = current.clone();
                next.push(e);
                let v = f.value(&next)?;
                if accept(v) {
                    moved = Some((next, v));
                    break;
                }
            }
        }
        // drop
        if moved.is_none() {
            for i in 0..current.len() {
                let mut next = current.clone();
                next.remove(i);
                let v = f.value(&next)?;
                if accept(v) {
                    moved = Some((next, v));
                    break;
                }
            }
        }
        // swap
        if moved.is_none() {
            'outer: for i in 0..current.len() {
                for &e in ground.iter().filter(|e| !current.contains(e)) {
                    let mut next = current.clone();
                    next[i] = e;
                    if !instance.matroid.is_independent(&next)? {
                        continue;
                    }
                    let v = f.value(&next)?;
                    if accept(v) {
                        moved = Some((next, v));
                        break 'outer;
                    }
                }
            }
        }
        match moved {
            Some((next, v)) => {
                current = next;
                value = v;
            }
            None => break,
        }
    }
    current.sort_unstable();
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;
    use crate::objective::Objective;
    use crate::summary::{Counters, Mode, SolutionEntry};

    fn modular(weights: Vec<f64>, matroid: Matroid) -> Instance {
        Instance::new(Objective::modular(weights).unwrap(), matroid).unwrap()
    }

    fn summary_of(solution: &[ElementId], reservoir: &[ElementId], d: usize) -> Summary {
        Summary {
            mode: Mode::Centralized,
            instance_path: None,
            n: 0,
            k: 0,
            d,
            epsilon: 0.1,
            monotone_mode: false,
            gamma: None,
            p: None,
            seed: 0,
            bucket_cap: 1,
            delta: 0.0,
            solution: solution
                .iter()
                .map(|&id| SolutionEntry {
                    id,
                    exponent: 0,
                    marginal: 1.0,
                })
                .collect(),
            reservoir: reservoir.to_vec(),
            protected: Vec::new(),
            buckets: Vec::new(),
            thresholds_used: Vec::new(),
            counters: Counters::default(),
            audit: None,
        }
    }

    #[test]
    fn greedy_examples() {
        let inst = modular(vec![3.0, 2.0, 1.0], Matroid::uniform(3, 2));
        assert_eq!(greedy_matroid(&[0, 1, 2], &inst).unwrap(), vec![0, 1]);
        assert_eq!(greedy_matroid(&[], &inst).unwrap(), Vec::<usize>::new());
        let p = modular(
            vec![5.0, 4.0, 1.0],
            Matroid::partition(3, vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap(),
        );
        assert_eq!(greedy_matroid(&[0, 1, 2], &p).unwrap(), vec![0, 2]);
    }

    #[test]
    fn exhaustive_examples() {
        let inst = modular(vec![1.0, 2.0], Matroid::uniform(2, 1));
        assert_eq!(exhaustive_opt(&[0, 1], &inst, 22).unwrap(), vec![1]);
        let cut = Instance::new(
            Objective::cut_function(2, vec![(0, 1, 5.0)]).unwrap(),
            Matroid::uniform(2, 2),
        )
        .unwrap();
        assert_eq!(exhaustive_opt(&[0, 1], &cut, 22).unwrap(), vec![0]);
        let big = modular(vec![1.0; 30], Matroid::uniform(30, 2));
        let all: Vec<_> = (0..30).collect();
        assert!(matches!(exhaustive_opt(&all, &big, 22), Err(Error::Refused(_))));
    }

    #[test]
    fn local_search_on_triangle_cut() {
        let cut = Instance::new(
            Objective::cut_function(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap(),
            Matroid::uniform(3, 2),
        )
        .unwrap();
        let s = local_search_nonmonotone(&[0, 1, 2], &cut, LocalSearchParams::default()).unwrap();
        assert_eq!(cut.objective.value(&s).unwrap(), 2.0);
        let bad = LocalSearchParams {
            delta: 0.0,
            ..Default::default()
        };
        assert!(local_search_nonmonotone(&[0], &cut, bad).is_err());
    }

    #[test]
    fn full_wipeout() {
        let inst = modular(vec![1.0, 2.0, 3.0], Matroid::uniform(3, 2));
        let s = summary_of(&[0, 1], &[], 2);
        let sol = phase2(&s, &[0, 1], &inst, SolverKind::exhaustive()).unwrap();
        assert!(sol.set.is_empty());
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.source, SolutionSource::SurvivingCandidate);
    }

    #[test]
    fn ties_go_to_surviving_candidate() {
        let inst = modular(vec![1.0, 2.0, 3.0], Matroid::uniform(3, 1));
        let s = summary_of(&[2], &[0, 1], 1);
        let sol = phase2(&s, &[0], &inst, SolverKind::Greedy).unwrap();
        assert_eq!(sol.source, SolutionSource::SurvivingCandidate);
        assert_eq!(sol.value, 3.0);
        let sol = phase2(&s, &[2], &inst, SolverKind::Greedy).unwrap();
        assert_eq!(sol.source, SolutionSource::SolverOutput);
        assert_eq!(sol.set, vec![1]);
        let sol = phase2(&s, &[0, 1], &inst, SolverKind::Greedy).unwrap();
        assert!(sol.guarantee_void);
    }

    #[test]
    fn lower_bound_instance_survives() {
        // k + d unit weights, k = 3, d = 2
        let mut w = vec![1.0; 5];
        w.extend([0.0; 4]);
        let inst = modular(w, Matroid::uniform(9, 3));
        let s = summary_of(&[], &[0, 1, 2, 3, 4], 2);
        for a in 0..5 {
            for b in a + 1..5 {
                let sol = phase2(&s, &[a, b], &inst, SolverKind::exhaustive()).unwrap();
                assert_eq!(sol.value, 3.0);
            }
        }
    }
}
