//! Structural and numerical checks on a summary against its instance.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::instance::Instance;
use crate::lattice::{lattice_size_bound, Grid};
use crate::objective::ElementId;
use crate::streaming::check_weight_properties;
use crate::summary::{Mode, Summary};

/// Relative slack on the marginal brackets.
const BRACKET_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{status} {}", c.name)?;
            } else {
                writeln!(f, "{status} {}: {}", c.name, c.detail)?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random deletion sets tried against the weight inequalities.
    pub random_deletions: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            random_deletions: 50,
            seed: 0,
        }
    }
}

fn duplicates(ids: &[ElementId]) -> Vec<ElementId> {
    let mut seen = BTreeSet::new();
    ids.iter().copied().filter(|&e| !seen.insert(e)).collect()
}

/// Checks `summary` against `instance`. Parse problems surface as errors;
/// everything else is reported as a failed check.
pub fn verify_summary(summary: &Summary, instance: &Instance, options: VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let n = instance.n();
    if summary.n != n {
        return invalid(format!("summary has n = {} but instance has n = {n}", summary.n));
    }

    let a = summary.solution_ids();
    let bucket_ids: Vec<ElementId> = summary.buckets.iter().flat_map(|b| b.ids.iter().copied()).collect();
    let everything: Vec<_> = a
        .iter()
        .chain(&summary.reservoir)
        .chain(&summary.protected)
        .chain(&bucket_ids)
        .copied()
        .collect();
    let out_of_range: Vec<_> = everything.iter().filter(|&&e| e >= n).collect();
    report.push(
        "ids-in-range",
        out_of_range.is_empty(),
        if out_of_range.is_empty() {
            String::new()
        } else {
            format!("ids {out_of_range:?} not in 0..{n}")
        },
    );
    if !out_of_range.is_empty() {
        return Ok(report);
    }

    let a_set: BTreeSet<_> = a.iter().copied().collect();
    let shared: Vec<_> = summary.reservoir.iter().filter(|e| a_set.contains(e)).collect();
    let dup_a = duplicates(&a);
    let dup_b = duplicates(&summary.reservoir);
    let dup_buckets = duplicates(&bucket_ids);
    let disjoint = shared.is_empty() && dup_a.is_empty() && dup_b.is_empty() && dup_buckets.is_empty();
    report.push(
        "disjointness",
        disjoint,
        if disjoint {
            String::new()
        } else {
            format!(
                "in both A and B: {shared:?}; repeated in A: {dup_a:?}; in B: {dup_b:?}; across buckets: {dup_buckets:?}"
            )
        },
    );

    let independent = instance.matroid.is_independent(&a)?;
    report.push("independence", independent, if independent { "" } else { "A is dependent" });

    report.push(
        "solution-size",
        a.len() <= summary.k,
        format!("|A| = {}, k = {}", a.len(), summary.k),
    );

    let vd: BTreeSet<_> = summary.protected.iter().copied().collect();
    let b: BTreeSet<_> = summary.reservoir.iter().copied().collect();
    report.push(
        "protected-size",
        vd.len() <= summary.d && vd.is_subset(&b),
        format!("|V_d| = {}, d = {}", vd.len(), summary.d),
    );
    let assembled: BTreeSet<_> = vd.iter().chain(&bucket_ids).copied().collect();
    report.push(
        "reservoir-partition",
        assembled == b && vd.iter().all(|e| !bucket_ids.contains(e)),
        "B = V_d ∪ buckets",
    );

    let overfull: Vec<_> = summary
        .buckets
        .iter()
        .filter(|bk| bk.ids.len() >= summary.bucket_cap)
        .map(|bk| (bk.exponent, bk.ids.len()))
        .collect();
    report.push(
        "bucket-caps",
        overfull.is_empty(),
        format!("cap {}, over-full (exponent, size): {overfull:?}", summary.bucket_cap),
    );

    let bound = summary.size_bound();
    report.push(
        "size-bound",
        summary.size() <= bound,
        format!("|A| + |B| = {} <= {bound}", summary.size()),
    );
    let lattice_bound = lattice_size_bound(summary.k, summary.epsilon);
    report.push(
        "lattice-bound",
        summary.counters.lattice_size <= lattice_bound,
        format!("{} thresholds <= {lattice_bound}", summary.counters.lattice_size),
    );
    if summary.mode == Mode::Streaming {
        report.push(
            "peak-memory",
            summary.counters.peak_memory <= bound,
            format!("peak {} <= {bound}", summary.counters.peak_memory),
        );
    }

    let grid = Grid::new(summary.epsilon);
    let outside: Vec<_> = summary
        .solution
        .iter()
        .filter(|entry| {
            let tau = grid.power(entry.exponent);
            let slack = BRACKET_TOLERANCE * tau.max(1.0);
            !(entry.marginal >= tau - slack && entry.marginal < grid.base() * tau + slack)
        })
        .map(|entry| entry.id)
        .collect();
    report.push(
        "marginal-brackets",
        outside.is_empty(),
        if outside.is_empty() {
            String::new()
        } else {
            format!("marginals outside [τ, (1+ε)τ) for {outside:?}")
        },
    );

    if let Some(audit) = &summary.audit {
        let swapped: BTreeSet<_> = audit.swapped_out.iter().copied().collect();
        let clash: Vec<_> = swapped.intersection(&a_set).collect();
        report.push(
            "swapped-disjoint",
            clash.is_empty(),
            if clash.is_empty() {
                String::new()
            } else {
                format!("swapped-out elements still in A: {clash:?}")
            },
        );
        let nonpositive: Vec<_> = audit.weight_log.iter().filter(|(_, w)| *w <= 0.0).collect();
        report.push(
            "positive-weights",
            nonpositive.is_empty(),
            if nonpositive.is_empty() {
                String::new()
            } else {
                format!("{nonpositive:?}")
            },
        );

        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut deletion_sets = vec![Vec::new()];
        for _ in 0..options.random_deletions {
            let size = rng.gen_range(0..=summary.d.min(n));
            let mut d: Vec<_> = sample(&mut rng, n, size).into_vec();
            d.sort_unstable();
            deletion_sets.push(d);
        }
        let mut violations: Vec<(&'static str, Vec<ElementId>, f64, f64)> = Vec::new();
        let mut names = Vec::new();
        for d in &deletion_sets {
            let weights = check_weight_properties(summary, &instance.objective, d)?;
            for c in weights.checks() {
                if !names.contains(&c.name) {
                    names.push(c.name);
                }
                if !c.holds {
                    violations.push((c.name, d.clone(), c.lhs, c.rhs));
                }
            }
        }
        for name in names {
            let hits: Vec<_> = violations.iter().filter(|v| v.0 == name).collect();
            let detail = match hits.first() {
                None => format!("{} deletion sets", deletion_sets.len()),
                Some((_, d, lhs, rhs)) => format!(
                    "{} violations, first at D = {d:?}: {lhs} > {rhs}",
                    hits.len()
                ),
            };
            report.push(name, hits.is_empty(), detail);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized::{centralized_phase1, CentralizedConfig};
    use crate::matroid::Matroid;
    use crate::objective::Objective;
    use crate::streaming::{streaming_phase1, StreamingConfig};

    fn modular(n: usize, k: usize) -> Instance {
        let w = (0..n).map(|i| 1.0 + (i % 7) as f64).collect();
        Instance::new(Objective::modular(w).unwrap(), Matroid::uniform(n, k)).unwrap()
    }

    #[test]
    fn fresh_summaries_pass() {
        let inst = modular(60, 4);
        let c = centralized_phase1(&inst, &CentralizedConfig::new(0.5, 1, 3)).unwrap();
        let r = verify_summary(&c, &inst, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        let order: Vec<_> = (0..60).collect();
        let s = streaming_phase1(&inst, &order, &StreamingConfig::new(0.5, 1, true, 3)).unwrap();
        let r = verify_summary(&s, &inst, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.get("swapped-mass").is_some());
    }

    #[test]
    fn duplicate_across_a_and_b_fails_disjointness() {
        let inst = modular(60, 4);
        let mut c = centralized_phase1(&inst, &CentralizedConfig::new(0.5, 1, 3)).unwrap();
        assert!(!c.solution.is_empty());
        c.reservoir.push(c.solution[0].id);
        c.reservoir.sort_unstable();
        let r = verify_summary(&c, &inst, VerifyOptions::default()).unwrap();
        assert!(!r.get("disjointness").unwrap().passed);
    }

    #[test]
    fn corrupted_weight_log_fails_swapped_mass() {
        let inst = Instance::new(Objective::modular(vec![1.0, 3.0]).unwrap(), Matroid::uniform(2, 1)).unwrap();
        let mut s = streaming_phase1(&inst, &[0, 1], &StreamingConfig::new(0.5, 0, true, 0)).unwrap();
        assert_eq!(s.solution_ids(), vec![1]);
        assert!(verify_summary(&s, &inst, VerifyOptions::default()).unwrap().passed());
        let audit = s.audit.as_mut().unwrap();
        assert_eq!(audit.swapped_out, vec![0]);
        for entry in audit.weight_log.iter_mut().filter(|(id, _)| *id == 0) {
            entry.1 = 10.0;
        }
        let r = verify_summary(&s, &inst, VerifyOptions::default()).unwrap();
        assert!(!r.get("swapped-mass").unwrap().passed);
        assert!(!r.passed());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let c = centralized_phase1(&modular(10, 2), &CentralizedConfig::new(0.5, 0, 0)).unwrap();
        assert!(verify_summary(&c, &modular(11, 2), VerifyOptions::default()).is_err());
    }
}
