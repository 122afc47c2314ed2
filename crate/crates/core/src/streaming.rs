//! Single-pass Phase I with threshold buckets, Bernoulli subsampling and
//! circuit-based swaps.
//!
//! Every arrival first passes through `V_d`, a buffer of the `d` most
//! valuable elements seen so far; whatever falls out of it is filed into the
//! bucket of the largest threshold below its marginal `f(e | A)`. Whenever a
//! bucket reaches `⌈d/ε⌉` elements, one uniformly random member `g` is
//! drained: it receives the weight `w(g) = f(g | A)` and, if a coin with bias
//! `p` comes up heads, it enters `A` directly or replaces the lightest
//! element on the circuit it closes, provided it is heavier by a `(1+γ)`
//! factor.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centralized::ceil_ratio;
use crate::error::{invalid, Error, Result};
use crate::instance::Instance;
use crate::lattice::Grid;
use crate::objective::{ElementId, Objective};
use crate::summary::{Bucket, Counters, Mode, SolutionEntry, StreamAudit, Summary};

/// Swap margin used for non-monotone objectives.
pub const DEFAULT_GAMMA: f64 = 1.746;

/// Which over-full bucket is drained first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DrainOrder {
    #[default]
    Highest,
    Lowest,
    /// The bucket holding the earliest-arrived element.
    Arrival,
}

/// Overrides the Bernoulli draw. The draw is still consumed from the RNG so
/// the random sequence does not shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleGate {
    #[default]
    Bernoulli,
    AlwaysAccept,
    AlwaysReject,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamingConfig {
    pub epsilon: f64,
    pub d: usize,
    pub gamma: f64,
    pub p: f64,
    pub monotone_mode: bool,
    pub seed: u64,
    pub drain_order: DrainOrder,
    pub gate: SampleGate,
}

impl StreamingConfig {
    /// Defaults: `γ = 1.746, p = 1/(γ+2)` for general objectives and
    /// `γ = 1, p = 1` in monotone mode.
    pub fn new(epsilon: f64, d: usize, monotone_mode: bool, seed: u64) -> Self {
        let (gamma, p) = if monotone_mode {
            (1.0, 1.0)
        } else {
            (DEFAULT_GAMMA, 1.0 / (DEFAULT_GAMMA + 2.0))
        };
        StreamingConfig {
            epsilon,
            d,
            gamma,
            p,
            monotone_mode,
            seed,
            drain_order: DrainOrder::Highest,
            gate: SampleGate::Bernoulli,
        }
    }

    /// Sets `γ` and, outside monotone mode, the matching `p = 1/(γ+2)`.
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        if !self.monotone_mode {
            self.p = 1.0 / (gamma + 2.0);
        }
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return invalid(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return invalid(format!("p must lie in (0, 1], got {}", self.p));
        }
        Ok(())
    }

    /// `max(1, ⌈d/ε⌉)`.
    pub fn bucket_cap(&self) -> usize {
        ceil_ratio(self.d, self.epsilon)
    }
}

#[derive(Debug, Clone, Copy)]
struct Protected {
    value: f64,
    id: ElementId,
}

impl PartialEq for Protected {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Protected {}

impl PartialOrd for Protected {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// The heap top is the element to evict: smallest value, larger id on ties.
impl Ord for Protected {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then(self.id.cmp(&other.id))
    }
}

/// Mutable state of one streaming run.
#[derive(Debug, Clone)]
pub struct StreamingState {
    config: StreamingConfig,
    grid: Grid,
    k: usize,
    n: usize,
    cap: usize,
    rng: ChaCha8Rng,
    solution: Vec<ElementId>,
    entry_exponent: Vec<i32>,
    weights: Vec<Option<f64>>,
    buckets: BTreeMap<i32, Vec<ElementId>>,
    protected: BinaryHeap<Protected>,
    delta: f64,
    tau_min: f64,
    /// Smallest live exponent; `None` until `Δ > 0`.
    min_exponent: Option<i32>,
    max_singleton: f64,
    arrival_index: Vec<Option<u64>>,
    arrivals: u64,
    audit: StreamAudit,
    peak_memory: usize,
    max_live_buckets: usize,
    upward_moves: usize,
    calls_at_start: u64,
}

impl StreamingState {
    pub fn new(instance: &Instance, config: StreamingConfig) -> Result<Self> {
        config.validate()?;
        if instance.k() == 0 {
            return invalid("matroid rank must be positive");
        }
        if config.monotone_mode && !instance.objective.is_monotone() {
            return invalid("monotone mode requires a monotone objective");
        }
        let n = instance.n();
        Ok(StreamingState {
            grid: Grid::new(config.epsilon),
            k: instance.k(),
            n,
            cap: config.bucket_cap(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            solution: Vec::new(),
            entry_exponent: vec![0; n],
            weights: vec![None; n],
            buckets: BTreeMap::new(),
            protected: BinaryHeap::new(),
            delta: 0.0,
            tau_min: 0.0,
            min_exponent: None,
            max_singleton: 0.0,
            arrival_index: vec![None; n],
            arrivals: 0,
            audit: StreamAudit::default(),
            peak_memory: 0,
            max_live_buckets: 0,
            upward_moves: 0,
            calls_at_start: instance.objective.queries(),
            config,
        })
    }

    pub fn config(&self) -> &StreamingConfig {
        &self.config
    }

    pub fn solution(&self) -> &[ElementId] {
        &self.solution
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn bucket_cap(&self) -> usize {
        self.cap
    }

    pub fn buckets(&self) -> &BTreeMap<i32, Vec<ElementId>> {
        &self.buckets
    }

    pub fn protected_ids(&self) -> Vec<ElementId> {
        let mut ids: Vec<_> = self.protected.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        ids
    }

    pub fn audit(&self) -> &StreamAudit {
        &self.audit
    }

    pub fn peak_memory(&self) -> usize {
        self.peak_memory
    }

    /// Largest singleton value among processed (non-warm-up) elements.
    pub fn max_singleton(&self) -> f64 {
        self.max_singleton
    }

    pub fn weight(&self, id: ElementId) -> Option<f64> {
        self.weights.get(id).copied().flatten()
    }

    /// Current `|A| + |V_d| + Σ|B_τ|`.
    pub fn memory(&self) -> usize {
        self.solution.len() + self.protected.len() + self.buckets.values().map(Vec::len).sum::<usize>()
    }

    fn note_memory(&mut self) {
        self.peak_memory = self.peak_memory.max(self.memory());
        self.max_live_buckets = self.max_live_buckets.max(self.buckets.len());
    }

    /// Processes one arrival.
    pub fn ingest(&mut self, instance: &Instance, arrival: ElementId) -> Result<()> {
        if arrival >= self.n {
            return invalid(format!("element id {arrival} out of range 0..{}", self.n));
        }
        if self.arrival_index[arrival].is_some() {
            return Err(Error::Contract(format!("element {arrival} arrived twice")));
        }
        self.arrival_index[arrival] = Some(self.arrivals);
        self.arrivals += 1;
        let f = &instance.objective;
        let arrival_value = f.value(&[arrival])?;

        let e = if self.config.d == 0 {
            arrival
        } else {
            self.protected.push(Protected {
                value: arrival_value,
                id: arrival,
            });
            if self.protected.len() <= self.config.d {
                // warm-up: the first d arrivals only fill V_d
                self.note_memory();
                return Ok(());
            }
            self.protected.pop().expect("non-empty").id
        };
        let e_value = if e == arrival {
            arrival_value
        } else {
            f.value(&[e])?
        };
        self.max_singleton = self.max_singleton.max(e_value);

        if e_value > self.delta {
            self.delta = e_value;
            self.tau_min = self.config.epsilon / (1.0 + self.config.epsilon) * self.delta
                / self.k as f64;
            let min_exp = self.grid.ceil_exponent(self.tau_min);
            self.min_exponent = Some(min_exp);
            let dropped: Vec<i32> = self.buckets.range(..min_exp).map(|(&i, _)| i).collect();
            for i in dropped {
                let ids = self.buckets.remove(&i).expect("key exists");
                self.audit.low.extend(ids);
            }
        }

        let m = f.marginal(e, &self.solution)?;
        match self.placement(m) {
            Some(i) => {
                let bucket = self.buckets.entry(i).or_default();
                let pos = bucket.binary_search(&e).unwrap_or_else(|p| p);
                bucket.insert(pos, e);
            }
            None => self.audit.low.push(e),
        }
        self.note_memory();
        self.drain_buckets(instance)?;
        self.note_memory();
        Ok(())
    }

    /// Bucket exponent for marginal `m`, or `None` when the element belongs in `L`.
    fn placement(&self, m: f64) -> Option<i32> {
        if self.tau_min > m || m <= 0.0 {
            return None;
        }
        let min_exp = self.min_exponent?;
        let i = self.grid.floor_exponent(m);
        (i >= min_exp).then_some(i)
    }

    fn full_bucket(&self) -> Option<i32> {
        let mut full = self
            .buckets
            .iter()
            .filter(|(_, ids)| ids.len() >= self.cap)
            .map(|(&i, ids)| (i, ids));
        match self.config.drain_order {
            DrainOrder::Highest => full.next_back().map(|(i, _)| i),
            DrainOrder::Lowest => full.next().map(|(i, _)| i),
            DrainOrder::Arrival => full
                .min_by_key(|(_, ids)| {
                    ids.iter()
                        .map(|&e| self.arrival_index[e].unwrap_or(u64::MAX))
                        .min()
                })
                .map(|(i, _)| i),
        }
    }

    /// Drains over-full buckets until every bucket is below the cap.
    pub fn drain_buckets(&mut self, instance: &Instance) -> Result<()> {
        while let Some(exponent) = self.full_bucket() {
            let bucket = self.buckets.get_mut(&exponent).expect("bucket exists");
            let g = bucket.remove(self.rng.gen_range(0..bucket.len()));
            if bucket.is_empty() {
                self.buckets.remove(&exponent);
            }
            let coin: f64 = self.rng.gen();
            let accept = match self.config.gate {
                SampleGate::Bernoulli => coin < self.config.p,
                SampleGate::AlwaysAccept => true,
                SampleGate::AlwaysReject => false,
            };
            self.audit.drained.push(g);

            let w = instance.objective.marginal(g, &self.solution)?;
            debug_assert!(w >= self.tau_min && w > 0.0, "weight {w} below tau_min");
            self.weights[g] = Some(w);
            self.audit.weight_log.push((g, w));

            if instance.matroid.can_add(&self.solution, g)? {
                if accept {
                    self.solution.push(g);
                    self.entry_exponent[g] = exponent;
                    self.rebucket(&instance.objective, true)?;
                } else {
                    self.audit.rejected.push(g);
                }
            } else {
                let circuit = instance.matroid.circuit(&self.solution, g)?;
                let victim = circuit
                    .iter()
                    .copied()
                    .filter(|&x| x != g)
                    .min_by(|&a, &b| {
                        let (wa, wb) = (self.weights[a].unwrap(), self.weights[b].unwrap());
                        wa.total_cmp(&wb).then(a.cmp(&b))
                    })
                    .ok_or_else(|| Error::Contract("circuit without solution elements".into()))?;
                let victim_weight = self.weights[victim].expect("solution elements have weights");
                if w > (1.0 + self.config.gamma) * victim_weight {
                    if accept {
                        self.solution.retain(|&x| x != victim);
                        self.solution.push(g);
                        self.entry_exponent[g] = exponent;
                        self.audit.swapped_out.push(victim);
                        self.rebucket(&instance.objective, false)?;
                    } else {
                        self.audit.rejected.push(g);
                    }
                } else {
                    self.audit.failed.push(g);
                }
            }
            if !instance.matroid.is_independent(&self.solution)? {
                return Err(Error::Contract("candidate solution became dependent".into()));
            }
            self.note_memory();
        }
        Ok(())
    }

    /// Refiles every buffered element by its marginal against the current `A`.
    ///
    /// `grew` says `A` only gained an element since the last call; then no
    /// element may move up. After a swap marginals can rise, and such moves
    /// are counted in `upward_moves`.
    pub fn rebucket(&mut self, objective: &Objective, grew: bool) -> Result<()> {
        let old = std::mem::take(&mut self.buckets);
        for (from, ids) in old {
            for e in ids {
                let m = objective.marginal(e, &self.solution)?;
                match self.placement(m) {
                    Some(to) => {
                        if to > from {
                            debug_assert!(!grew, "element {e} moved up after A grew");
                            self.upward_moves += 1;
                        }
                        self.buckets.entry(to).or_default().push(e);
                    }
                    None => self.audit.low.push(e),
                }
            }
        }
        for ids in self.buckets.values_mut() {
            ids.sort_unstable();
        }
        Ok(())
    }

    pub fn finalize(self, instance: &Instance) -> Summary {
        let protected = self.protected_ids();
        let buckets: Vec<Bucket> = self
            .buckets
            .iter()
            .rev()
            .map(|(&exponent, ids)| Bucket {
                exponent,
                ids: ids.clone(),
            })
            .collect();
        let mut reservoir: Vec<ElementId> = protected
            .iter()
            .copied()
            .chain(buckets.iter().flat_map(|b| b.ids.iter().copied()))
            .collect();
        reservoir.sort_unstable();
        let solution = self
            .solution
            .iter()
            .map(|&id| SolutionEntry {
                id,
                exponent: self.entry_exponent[id],
                marginal: self.weights[id].expect("solution elements have weights"),
            })
            .collect();
        let discarded = self.audit.low.len()
            + self.audit.swapped_out.len()
            + self.audit.rejected.len()
            + self.audit.failed.len();
        Summary {
            mode: Mode::Streaming,
            instance_path: None,
            n: self.n,
            k: self.k,
            d: self.config.d,
            epsilon: self.config.epsilon,
            monotone_mode: self.config.monotone_mode,
            gamma: Some(self.config.gamma),
            p: Some(self.config.p),
            seed: self.config.seed,
            bucket_cap: self.cap,
            delta: self.delta,
            solution,
            reservoir,
            protected,
            thresholds_used: buckets.iter().map(|b| b.exponent).collect(),
            buckets,
            counters: Counters {
                oracle_calls: instance.objective.queries() - self.calls_at_start,
                discarded,
                lattice_size: self.max_live_buckets,
                peak_memory: self.peak_memory,
                upward_moves: self.upward_moves,
            },
            audit: Some(self.audit),
        }
    }
}

/// Arrival order for a streaming run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrivalOrder {
    /// `0, 1, …, n−1`.
    Natural,
    /// A seeded uniform shuffle, independent of the algorithm seed.
    Shuffle(u64),
    Explicit(Vec<ElementId>),
}

impl ArrivalOrder {
    pub fn resolve(&self, n: usize) -> Vec<ElementId> {
        match self {
            ArrivalOrder::Natural => (0..n).collect(),
            ArrivalOrder::Shuffle(seed) => {
                use rand::seq::SliceRandom;
                let mut order: Vec<_> = (0..n).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                order
            }
            ArrivalOrder::Explicit(ids) => ids.clone(),
        }
    }
}

/// Streams `order` through a fresh state and returns the summary.
pub fn streaming_phase1(
    instance: &Instance,
    order: &[ElementId],
    config: &StreamingConfig,
) -> Result<Summary> {
    let mut state = StreamingState::new(instance, config.clone())?;
    for &e in order {
        state.ingest(instance, e)?;
    }
    Ok(state.finalize(instance))
}

/// One inequality of the weight bookkeeping, `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl WeightCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        WeightCheck {
            name,
            lhs,
            rhs,
            holds: lhs <= rhs + tol,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightReport {
    /// `γ·w(K) ≤ w(A)`
    pub swapped_mass: WeightCheck,
    /// `w(A) ≤ f(A)`
    pub solution_mass: WeightCheck,
    /// `w(A \ D) ≤ f(A \ D)`
    pub survivor_mass: WeightCheck,
    /// `f(A ∪ K) ≤ w(A ∪ K)`
    pub history_mass: WeightCheck,
}

impl WeightReport {
    pub fn checks(&self) -> [&WeightCheck; 4] {
        [
            &self.swapped_mass,
            &self.solution_mass,
            &self.survivor_mass,
            &self.history_mass,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|c| c.holds)
    }
}

pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Evaluates the weight inequalities on a streaming summary with audit
/// information, for the deletion set `deleted`.
pub fn check_weight_properties(
    summary: &Summary,
    objective: &Objective,
    deleted: &[ElementId],
) -> Result<WeightReport> {
    let audit = summary
        .audit
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("summary carries no streaming audit".into()))?;
    let gamma = summary
        .gamma
        .ok_or_else(|| Error::InvalidArgument("summary carries no gamma".into()))?;
    let weight_of = |id: ElementId| -> Result<f64> {
        audit
            .weight_of(id)
            .ok_or_else(|| Error::InvalidArgument(format!("no weight logged for element {id}")))
    };
    let a: Vec<_> = summary.solution_ids();
    let w_a: f64 = summary.solution.iter().map(|e| e.marginal).sum();
    let w_k: f64 = audit
        .swapped_out
        .iter()
        .map(|&id| weight_of(id))
        .sum::<Result<f64>>()?;
    let survivors: Vec<_> = a.iter().copied().filter(|e| !deleted.contains(e)).collect();
    let w_survivors: f64 = summary
        .solution
        .iter()
        .filter(|e| !deleted.contains(&e.id))
        .map(|e| e.marginal)
        .sum();
    let history: Vec<_> = a.iter().chain(&audit.swapped_out).copied().collect();
    let tol = WEIGHT_TOLERANCE;
    Ok(WeightReport {
        swapped_mass: WeightCheck::new("swapped-mass", gamma * w_k, w_a, tol),
        solution_mass: WeightCheck::new("solution-mass", w_a, objective.value(&a)?, tol),
        survivor_mass: WeightCheck::new(
            "survivor-mass",
            w_survivors,
            objective.value(&survivors)?,
            tol,
        ),
        history_mass: WeightCheck::new("history-mass", objective.value(&history)?, w_a + w_k, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;

    fn modular(weights: Vec<f64>, k: usize) -> Instance {
        let n = weights.len();
        Instance::new(Objective::modular(weights).unwrap(), Matroid::uniform(n, k)).unwrap()
    }

    #[test]
    fn defaults() {
        let c = StreamingConfig::new(0.1, 2, false, 0);
        assert_eq!(c.gamma, 1.746);
        assert!((c.p - 1.0 / 3.746).abs() < 1e-15);
        let m = StreamingConfig::new(0.1, 2, true, 0);
        assert_eq!((m.gamma, m.p), (1.0, 1.0));
        assert_eq!(c.bucket_cap(), 20);
        assert_eq!(StreamingConfig::new(0.5, 0, true, 0).bucket_cap(), 1);
    }

    #[test]
    fn invalid_configs() {
        let inst = modular(vec![1.0], 1);
        for cfg in [
            StreamingConfig::new(0.0, 1, true, 0),
            StreamingConfig::new(0.1, 1, true, 0).with_p(0.0),
            StreamingConfig::new(0.1, 1, true, 0).with_p(1.2),
            StreamingConfig::new(0.1, 1, true, 0).with_gamma(-1.0),
        ] {
            assert!(StreamingState::new(&inst, cfg).is_err());
        }
    }

    #[test]
    fn warm_up_fills_protected_buffer() {
        let inst = modular(vec![1.0, 2.0, 3.0], 1);
        let s = streaming_phase1(&inst, &[0, 1], &StreamingConfig::new(0.2, 2, true, 0)).unwrap();
        assert!(s.solution.is_empty());
        assert_eq!(s.reservoir, vec![0, 1]);
        assert_eq!(s.protected, vec![0, 1]);
        assert_eq!(s.delta, 0.0);
    }

    #[test]
    fn empty_stream() {
        let inst = modular(vec![1.0, 2.0], 1);
        let s = streaming_phase1(&inst, &[], &StreamingConfig::new(0.2, 1, true, 0)).unwrap();
        assert_eq!(s.size(), 0);
    }

    #[test]
    fn duplicate_arrival_is_a_contract_error() {
        let inst = modular(vec![1.0, 2.0], 1);
        let mut st = StreamingState::new(&inst, StreamingConfig::new(0.2, 0, true, 0)).unwrap();
        st.ingest(&inst, 0).unwrap();
        assert!(matches!(st.ingest(&inst, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn zero_value_arrival_goes_low() {
        let inst = modular(vec![2.0, 0.0], 1);
        let mut st = StreamingState::new(&inst, StreamingConfig::new(0.2, 0, true, 0)).unwrap();
        st.ingest(&inst, 0).unwrap();
        st.ingest(&inst, 1).unwrap();
        assert_eq!(st.audit().low, vec![1]);
    }

    #[test]
    fn swap_trace_uniform_rank_one() {
        // d = 0 drains every filed element at once; p = 1
        let inst = modular(vec![1.0, 3.0], 1);
        let s = streaming_phase1(&inst, &[0, 1], &StreamingConfig::new(0.5, 0, true, 0)).unwrap();
        assert_eq!(s.solution_ids(), vec![1]);
        let audit = s.audit.as_ref().unwrap();
        assert_eq!(audit.swapped_out, vec![0]);
        assert_eq!(audit.weight_log, vec![(0, 1.0), (1, 3.0)]);
        let report = check_weight_properties(&s, &inst.objective, &[]).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.swapped_mass.lhs, 1.0);
        assert_eq!(report.swapped_mass.rhs, 3.0);
        assert_eq!(report.history_mass.lhs, 4.0);
        assert_eq!(report.history_mass.rhs, 4.0);
    }

    #[test]
    fn equal_margin_does_not_swap() {
        // w(g) = (1+γ)·w(k_g) exactly
        let inst = modular(vec![1.0, 2.0], 1);
        let s = streaming_phase1(&inst, &[0, 1], &StreamingConfig::new(0.5, 0, true, 0)).unwrap();
        assert_eq!(s.solution_ids(), vec![0]);
        assert_eq!(s.audit.as_ref().unwrap().failed, vec![1]);
    }

    #[test]
    fn rejecting_gate_keeps_solution_empty() {
        let inst = modular(vec![1.0, 3.0, 2.0, 5.0], 2);
        let mut cfg = StreamingConfig::new(0.5, 0, true, 0);
        cfg.gate = SampleGate::AlwaysReject;
        let s = streaming_phase1(&inst, &[0, 1, 2, 3], &cfg).unwrap();
        assert!(s.solution.is_empty());
        assert_eq!(s.audit.as_ref().unwrap().rejected, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_solution_weight_report() {
        let inst = modular(vec![1.0], 1);
        let s = streaming_phase1(&inst, &[], &StreamingConfig::new(0.5, 0, true, 0)).unwrap();
        let r = check_weight_properties(&s, &inst.objective, &[]).unwrap();
        assert!(r.all_hold());
        assert!(r.checks().iter().all(|c| c.lhs == 0.0 && c.rhs == 0.0));
    }

    #[test]
    fn rebucket_is_idempotent_on_modular() {
        let inst = modular(vec![1.0, 1.5, 2.0, 2.5, 3.0, 0.9], 2);
        let mut st = StreamingState::new(&inst, StreamingConfig::new(0.1, 3, true, 4)).unwrap();
        for e in 0..6 {
            st.ingest(&inst, e).unwrap();
        }
        let before = st.buckets().clone();
        st.rebucket(&inst.objective, true).unwrap();
        assert_eq!(&before, st.buckets());
    }

    #[test]
    fn protected_buffer_eviction_order() {
        let mut heap = BinaryHeap::new();
        for (value, id) in [(1.0, 4), (1.0, 7), (2.0, 1)] {
            heap.push(Protected { value, id });
        }
        assert_eq!(heap.pop().unwrap().id, 7);
        assert_eq!(heap.pop().unwrap().id, 4);
        assert_eq!(heap.pop().unwrap().id, 1);
    }
}
