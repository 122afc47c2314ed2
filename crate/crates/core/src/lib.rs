//! Deletion-robust submodular maximization under matroid constraints.
//!
//! Phase I builds a small summary (offline or in one streaming pass) from
//! which, after an adversary removes up to `d` elements, Phase II recovers a
//! solution with a constant-factor guarantee.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod bounds;
pub mod centralized;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod instance;
pub mod lattice;
pub mod matroid;
pub mod objective;
pub mod phase2;
pub mod streaming;
pub mod summary;
pub mod verify;

pub use adversary::{choose_deletions, opt_value, DeletionStrategy, OptMethod, OptValue, StrategySpec};
pub use bounds::{theoretical_bound, BoundReport};
pub use centralized::{centralized_phase1, CentralizedConfig, Recompute};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport, InstanceSource};
pub use generate::{generate_instance, GeneratorSpec, MatroidSpec};
pub use instance::Instance;
pub use lattice::{lattice_size_bound, ThresholdLattice};
pub use matroid::Matroid;
pub use objective::{Element, ElementId, Objective, ObjectiveKindName};
pub use phase2::{phase2, RobustSolution, SolutionSource, SolverKind};
pub use streaming::{check_weight_properties, streaming_phase1, ArrivalOrder, DrainOrder, StreamingConfig};
pub use summary::{Mode, Summary};
pub use verify::{verify_summary, VerifyOptions, VerifyReport};
