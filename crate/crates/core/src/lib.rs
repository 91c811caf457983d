//! Fourier analysis on the biased cube, two-scale partial observation, and
//! bond percolation experiments on rectangles.
//!
//! The [`cube`] module holds exact transforms for functions of up to 24 bits.
//! [`partial`] builds the two-scale operator `h_f` and its variance bounds.
//! [`percolation`] has crossing events, pivotal edges, the exploration
//! algorithm, and Monte Carlo estimators. [`experiments`] drives them from
//! config files.

pub mod cube;
pub mod error;
pub mod experiments;
pub mod partial;
pub mod percolation;
pub mod stats;
pub mod tol;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/biased-fourier.md")]
    mod biased_fourier {}
    #[doc = include_str!("../../../book/src/spectral-sample.md")]
    mod spectral_sample {}
    #[doc = include_str!("../../../book/src/two-scale.md")]
    mod two_scale {}
    #[doc = include_str!("../../../book/src/percolation.md")]
    mod percolation {}
    #[doc = include_str!("../../../book/src/exploration.md")]
    mod exploration {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
