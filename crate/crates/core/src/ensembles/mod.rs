//! Random and exhaustive tree ensembles, the planar counting formulas, and
//! the expected number of turning points.

mod counting;
mod enumerate;
mod experiment;
mod probability;
mod sample;
mod stream;
mod worst_case;

pub use counting::{
    count_planar, count_planar_marked, count_planar_marked_ab, prob_p, prob_p_bound,
};
pub use enumerate::{
    double_factorial, enumerate_labeled_topologies, enumerate_planar_trees, PlanarCensus,
    LABELED_ENUMERATION_MAX_LEAVES, PLANAR_ENUMERATION_MAX_LEAVES,
};
pub use experiment::{
    expected_pi_exact, expected_pi_monte_carlo, experiment_threads, ExperimentReport,
    EXACT_EXPECTATION_MAX_LEAVES, THREADS_ENV,
};
pub use probability::{
    exact_q, exact_sn, qtilde, qtilde0, qtilde_geometric, sum_sn_bound, sum_sn_bound_f64,
    sum_sn_geometric_f64, EXACT_SN_MAX_LEAVES, EXACT_SUM_BOUND_MAX_LEAVES,
};
pub use sample::{
    assign_generic_heights, default_height_range, sample_generic_pair, sample_topology_uniform,
    GenericPairSample, RESAMPLE_LIMIT,
};
pub use stream::SeededStream;
pub use worst_case::worst_case_pair;
