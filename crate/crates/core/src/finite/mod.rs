//! Finite-time distributions on the ring.

mod general;
mod hka;
mod identities;
mod lindep;
mod query;
mod scaling;
mod series;
mod step;
mod transition;

use serde::{Deserialize, Serialize};

use crate::bethe::RootSolverConfig;
use crate::numerics::Execution;

pub use general::{general_c, general_d, joint_cdf_general};
pub use hka::{
    configurations_with, h_slice_bruteforce, h_slice_closed, hka_bruteforce, hka_bruteforce_below, hka_closed,
    hka_closed_below, l_x, r_x, BruteForce, RootPair,
};
pub use identities::{
    block_sum_identity, cofactor_ratio_identity, crossing_count, ordered_partitions, partition_identity,
    permutation_ratio_identity, permutations, rank_one_identity, rank_one_identity_by_column, verify_cauchy_identities,
    IdentityReport, Sides,
};
pub use lindep::{check_l_independence, l_threshold, LIndependenceReport};
pub use query::{
    default_finite_scheme, level_scaled_scheme, translate_query, DistributionResult, FiniteQuery, InitialCondition,
    ProbePoint, Sign,
};
pub use scaling::{scale_parameters, ScaledProbe};
pub use series::{step_series_d, subsets};
pub(crate) use step::{check_nested, mixed_sign, to_result};
pub use step::{joint_cdf_step, mixed_event_prob_finite, mixed_radii, step_integrand, step_kernels, step_log_c, step_points};
pub use transition::{transition_integrand, transition_probability};

/// Evaluation settings shared by the finite-time formulas.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FiniteOptions {
    pub solver: RootSolverConfig,
    pub exec: Execution,
}
