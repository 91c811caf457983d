//! Exact analysis of real-valued functions on the discrete cube.

pub mod bias;
pub mod boolfn;
pub mod fourier;
pub mod spectral;

pub use bias::{product_measure, Bias};
pub use boolfn::{
    build_function, build_function_with_cap, crossing_function, BitCap, BoolFn, DEFAULT_MAX_BITS,
};
pub use fourier::{
    biased_char, fourier_transform, inverse_transform, level_weights, noise_correlation,
    noise_correlation_direct, variance, Spectrum, DIRECT_NOISE_MAX_BITS,
};
pub use spectral::{
    expected_pivotal_count, pivotal_marginals, pivotal_set, spectral_sample,
    spectral_sample_signed, SpectralSampleDist,
};
