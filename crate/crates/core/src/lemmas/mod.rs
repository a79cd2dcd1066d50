//! Numerical checks of the inequalities behind the decay argument.

mod monotonicity;
mod oscillation;
mod suite;
mod trajectory;

pub use monotonicity::{best_monotonicity_constant, gap_profile, gap_ratio, monotonicity_gap};
pub use oscillation::{mean_oscillation_bound, oscillation_constant, OscillationBound, SampledPath, Sampling};
pub use suite::{run_lemma_suite, LemmaReport, LemmaRow, SuiteOptions};
pub use trajectory::{
    characteristic_difference_check, dissipation_integrals, lem_ineq_bound, witness_point_search, Witness,
};
