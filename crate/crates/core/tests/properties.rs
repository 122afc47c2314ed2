use proptest::prelude::*;

use robust_summary::lattice::Grid;
use robust_summary::verify::{verify_summary, VerifyOptions};
use robust_summary::{
    centralized_phase1, generate_instance, opt_value, phase2, streaming_phase1, ArrivalOrder, CentralizedConfig,
    GeneratorSpec, Instance, Matroid, MatroidSpec, Objective, OptMethod, SolverKind, StreamingConfig, Summary,
};

fn instance_strategy() -> impl Strategy<Value = (Instance, bool)> {
    (0usize..4, 8usize..40, 1usize..5, any::<u64>()).prop_map(|(kind, n, k, seed)| {
        let (spec, monotone) = match kind {
            0 => (format!("coverage({n},{},0.15)", n + 5), true),
            1 => (format!("facility({n},5)"), true),
            2 => (format!("cut({n},0.3,1,2)"), false),
            _ => (format!("lowerbound({k},2,{})", n.saturating_sub(k + 2)), true),
        };
        let matroid = match seed % 3 {
            0 => MatroidSpec::Uniform { k },
            1 => MatroidSpec::Partition { blocks: k, cap: 1 },
            _ => MatroidSpec::Graphic { vertices: n },
        };
        let inst = generate_instance(&GeneratorSpec::parse(&spec).unwrap(), &matroid, seed).unwrap();
        (inst, monotone)
    })
}

fn small_set(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::btree_set(0..n, 0..n.min(6)).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn centralized_summaries_verify((inst, monotone) in instance_strategy(), d in 0usize..4, eps in 0.1f64..0.9, seed in any::<u64>()) {
        let cfg = CentralizedConfig::new(eps, d, seed).monotone(monotone);
        let s = centralized_phase1(&inst, &cfg).unwrap();
        let report = verify_summary(&s, &inst, VerifyOptions::default()).unwrap();
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn streaming_summaries_verify((inst, monotone) in instance_strategy(), d in 0usize..4, eps in 0.1f64..0.9, seed in any::<u64>()) {
        let cfg = StreamingConfig::new(eps, d, monotone, seed);
        let order = ArrivalOrder::Shuffle(seed ^ 0x5eed).resolve(inst.n());
        let s = streaming_phase1(&inst, &order, &cfg).unwrap();
        let report = verify_summary(&s, &inst, VerifyOptions { random_deletions: 20, seed }).unwrap();
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn phase2_output_is_feasible((inst, monotone) in instance_strategy(), d in 0usize..4, seed in any::<u64>(), deleted in small_set(8)) {
        let s = centralized_phase1(&inst, &CentralizedConfig::new(0.3, d, seed).monotone(monotone)).unwrap();
        let solver = if monotone { SolverKind::Greedy } else { SolverKind::local_search() };
        let sol = phase2(&s, &deleted, &inst, solver).unwrap();
        prop_assert!(inst.matroid.is_independent(&sol.set).unwrap());
        prop_assert!(sol.set.iter().all(|e| !deleted.contains(e)));
        prop_assert!(sol.value >= sol.surviving_value);
        prop_assert_eq!(sol.guarantee_void, deleted.len() > d);
    }

    #[test]
    fn grid_exponents_bracket(eps in 0.01f64..0.99, x in 1e-6f64..1e6) {
        let g = Grid::new(eps);
        let i = g.floor_exponent(x);
        prop_assert!(g.power(i) <= x && x < g.power(i + 1));
        let j = g.ceil_exponent(x);
        prop_assert!(g.power(j) >= x && (j == i || j == i + 1));
    }

    #[test]
    fn rank_is_monotone_and_bounded((inst, _) in instance_strategy(), a in small_set(8), b in small_set(8)) {
        let union: Vec<usize> = a.iter().chain(&b).copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let (ra, ru) = (inst.matroid.rank_of(&a).unwrap(), inst.matroid.rank_of(&union).unwrap());
        prop_assert!(ra <= a.len() && ra <= ru && ru <= inst.k());
        prop_assert_eq!(inst.matroid.is_independent(&a).unwrap(), ra == a.len());
    }

    #[test]
    fn fast_marginals_match_differences((inst, _) in instance_strategy(), set in small_set(8), e in 0usize..8) {
        let f = &inst.objective;
        let a = f.marginal(e, &set).unwrap();
        let b = f.marginal_by_difference(e, &set).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn text_formats_round_trip((inst, monotone) in instance_strategy(), seed in any::<u64>()) {
        let back = Instance::parse(&inst.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), inst.to_text());
        let cfg = StreamingConfig::new(0.3, 2, monotone, seed);
        let s = streaming_phase1(&inst, &ArrivalOrder::Natural.resolve(inst.n()), &cfg).unwrap();
        let parsed = Summary::parse(&s.to_text(true)).unwrap();
        prop_assert_eq!(parsed.to_text(true), s.to_text(true));
        prop_assert!(parsed.same_selection(&s));
    }

    #[test]
    fn opt_shrinks_as_deletions_grow(weights in proptest::collection::vec(0.0f64..5.0, 6..12), k in 1usize..4, cut in 0usize..4) {
        let n = weights.len();
        let inst = Instance::new(Objective::modular(weights).unwrap(), Matroid::uniform(n, k)).unwrap();
        let d2: Vec<usize> = (0..cut + 2).collect();
        let d1 = &d2[..cut];
        let a = opt_value(&inst, d1, OptMethod::Exhaustive).unwrap().value;
        let b = opt_value(&inst, &d2, OptMethod::Exhaustive).unwrap().value;
        prop_assert!(b <= a + 1e-12);
    }
}
