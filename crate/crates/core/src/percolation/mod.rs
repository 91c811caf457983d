//! Bond percolation on rectangles of the square lattice.

pub mod crossing;
pub mod estimate;
pub mod explore;
pub mod lattice;
pub mod pivotal;
pub mod rng;

pub use crossing::{
    has_crossing, has_dual_crossing, has_dual_horizontal_crossing, has_dual_vertical_crossing,
    has_horizontal_crossing, has_vertical_crossing, Direction, DisjointSets,
};
pub use estimate::{
    central_edge, central_pivotal_probability, conditional_noise_correlation_crossing,
    estimate_crossing_probability, estimate_four_arm, estimate_pivotal_mean, estimate_revealment,
    near_critical_flip_probability, nested_variance, noise_correlation_crossing,
    pivotal_scaling_ratio, revealment_with_inner_bias, rsw_two_scale_check, subgraph_inner_bias,
    two_scale_crossing_variance, two_scale_crossing_variance_with, ConditionalNoise, NearCritical,
    NestedVariance, PivotalScaling, RevealmentReport, RswReport,
};
pub use explore::{explore, explore_config, ExplorationTrace, Side, StopRule};
pub use lattice::{EdgeConfig, EdgeKind, RectLattice};
pub use pivotal::{is_pivotal, pivotal_edges, pivotal_edges_baseline};
pub use rng::{bernoulli_config, config_at, sample_weights, WeightedConfig};
