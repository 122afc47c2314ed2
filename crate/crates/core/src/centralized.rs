//! Offline Phase I: sweep thresholds from high to low and grow the candidate
//! solution `A` by uniform sampling from every bucket that is still large.
//!
//! For each threshold `τ` the bucket `B_τ` holds the remaining elements that
//! are feasible for `A` and have `f(e | A) ≥ τ`. While the bucket has at least
//! `bucket_threshold` elements one of them is drawn uniformly and moved into
//! `A`; the leftover bucket is then set aside for Phase II. Sampling from
//! large buckets is what makes `A` hard to hit for an adversary that does not
//! see the random bits.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::instance::Instance;
use crate::lattice::ThresholdLattice;
use crate::objective::ElementId;
use crate::summary::{Bucket, Counters, Mode, SolutionEntry, Summary};

/// How `B_τ` is recomputed after each insertion into `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recompute {
    /// Rescan the whole remaining pool with fresh oracle calls.
    #[default]
    Literal,
    /// Skip elements whose cached marginal is already below `τ` or that
    /// were found infeasible before. Produces the same output as `Literal`.
    Lazy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizedConfig {
    pub epsilon: f64,
    pub d: usize,
    /// Use the smaller `⌈d/ε⌉` bucket threshold; monotone objectives only.
    pub monotone_mode: bool,
    pub seed: u64,
    pub recompute: Recompute,
}

impl CentralizedConfig {
    pub fn new(epsilon: f64, d: usize, seed: u64) -> Self {
        CentralizedConfig {
            epsilon,
            d,
            monotone_mode: false,
            seed,
            recompute: Recompute::Literal,
        }
    }

    pub fn monotone(mut self, on: bool) -> Self {
        self.monotone_mode = on;
        self
    }

    pub fn recompute(mut self, mode: Recompute) -> Self {
        self.recompute = mode;
        self
    }

    /// Whether `ε` lies in the range `(0, 1/5)` covered by the approximation
    /// guarantee. The algorithm itself runs for any `ε ∈ (0, 1)`.
    pub fn in_guarantee_range(&self) -> bool {
        self.epsilon > 0.0 && self.epsilon < 0.2
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        Ok(())
    }

    /// `⌈(k+d)/ε⌉`, or `⌈d/ε⌉` in monotone mode, floored at 1.
    pub fn bucket_threshold(&self, k: usize) -> usize {
        let mass = if self.monotone_mode { self.d } else { k + self.d };
        ceil_ratio(mass, self.epsilon)
    }
}

/// `max(1, ⌈mass/ε⌉)`, with a 1e-9 guard so that e.g. `3/0.1` is 30, not 31.
pub(crate) fn ceil_ratio(mass: usize, epsilon: f64) -> usize {
    ((mass as f64 / epsilon - 1e-9).ceil() as usize).max(1)
}

/// `Δ` is the `(d+1)`-th largest value (0 when there are at most `d`
/// values) and `V_d` holds the ids of the `d` largest, ties to the smaller
/// id. `V_d` is returned sorted.
pub fn compute_delta(values: &[f64], d: usize) -> (f64, Vec<ElementId>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let delta = order.get(d).map_or(0.0, |&e| values[e]);
    let mut protected: Vec<_> = order.into_iter().take(d).collect();
    protected.sort_unstable();
    (delta, protected)
}

pub fn build_thresholds(delta: f64, k: usize, epsilon: f64) -> ThresholdLattice {
    ThresholdLattice::build(delta, k, epsilon)
}

struct BucketScan {
    cached: Vec<f64>,
    infeasible: Vec<bool>,
}

impl BucketScan {
    fn new(n: usize) -> Self {
        BucketScan {
            cached: vec![f64::INFINITY; n],
            infeasible: vec![false; n],
        }
    }

    /// `B_τ` over `pool` in pool order, with each member's marginal.
    fn collect(
        &mut self,
        instance: &Instance,
        pool: &[ElementId],
        solution: &[ElementId],
        tau: f64,
        mode: Recompute,
    ) -> Result<Vec<(ElementId, f64)>> {
        let mut bucket = Vec::new();
        for &e in pool {
            if mode == Recompute::Lazy && (self.infeasible[e] || self.cached[e] < tau) {
                continue;
            }
            if !instance.matroid.can_add(solution, e)? {
                self.infeasible[e] = true;
                continue;
            }
            let m = instance.objective.marginal(e, solution)?;
            self.cached[e] = m;
            if m >= tau {
                bucket.push((e, m));
            }
        }
        Ok(bucket)
    }
}

/// Runs the offline Phase I on `instance`. Deterministic given `config.seed`.
pub fn centralized_phase1(instance: &Instance, config: &CentralizedConfig) -> Result<Summary> {
    config.validate()?;
    if instance.n() == 0 {
        return invalid("instance has no elements");
    }
    if config.monotone_mode && !instance.objective.is_monotone() {
        return invalid("monotone mode requires a monotone objective");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let calls_before = instance.objective.queries();
    let n = instance.n();
    let k = instance.k();
    let cap = config.bucket_threshold(k);

    let values = instance.objective.singleton_values();
    let (delta, protected) = compute_delta(&values, config.d);
    let mut in_protected = vec![false; n];
    for &e in &protected {
        in_protected[e] = true;
    }
    let mut pool: Vec<ElementId> = (0..n).filter(|&e| !in_protected[e]).collect();
    let lattice = build_thresholds(delta, k, config.epsilon);

    let mut solution: Vec<ElementId> = Vec::new();
    let mut entries = Vec::new();
    let mut buckets = Vec::new();
    let mut scan = BucketScan::new(n);

    for exponent in lattice.exponents() {
        let tau = lattice.threshold(exponent);
        loop {
            let bucket = scan.collect(instance, &pool, &solution, tau, config.recompute)?;
            if bucket.len() >= cap {
                let (e, m) = bucket[rng.gen_range(0..bucket.len())];
                pool.retain(|&x| x != e);
                solution.push(e);
                entries.push(SolutionEntry {
                    id: e,
                    exponent,
                    marginal: m,
                });
                if !instance.matroid.is_independent(&solution)? {
                    return Err(Error::Contract(format!(
                        "candidate solution became dependent after inserting {e}"
                    )));
                }
            } else {
                if !bucket.is_empty() {
                    let ids: Vec<_> = bucket.iter().map(|&(e, _)| e).collect();
                    pool.retain(|x| !ids.contains(x));
                    buckets.push(Bucket { exponent, ids });
                }
                break;
            }
        }
    }

    let mut reservoir: Vec<ElementId> = protected
        .iter()
        .copied()
        .chain(buckets.iter().flat_map(|b| b.ids.iter().copied()))
        .collect();
    reservoir.sort_unstable();

    Ok(Summary {
        mode: Mode::Centralized,
        instance_path: None,
        n,
        k,
        d: config.d,
        epsilon: config.epsilon,
        monotone_mode: config.monotone_mode,
        gamma: None,
        p: None,
        seed: config.seed,
        bucket_cap: cap,
        delta,
        solution: entries,
        reservoir,
        protected,
        buckets,
        thresholds_used: lattice.exponents(),
        counters: Counters {
            oracle_calls: instance.objective.queries() - calls_before,
            discarded: pool.len(),
            lattice_size: lattice.len(),
            peak_memory: 0,
            upward_moves: 0,
        },
        audit: None,
    })
}

/// `|A| + |B|`, with `B` deduplicated against `A`.
pub fn summary_size(summary: &Summary) -> usize {
    summary.size()
}
