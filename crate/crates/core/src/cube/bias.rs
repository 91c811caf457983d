use std::fmt;

use crate::error::{Error, Result};

/// A product-measure bias `p`, strictly inside `(0, 1)`.
///
/// Under `P_p` every bit is `1` with probability `p`, independently.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bias(f64);

impl Bias {
    pub const HALF: Bias = Bias(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 && p < 1.0 {
            Ok(Bias(p))
        } else {
            Err(Error::InvalidBias(p))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_half(self) -> bool {
        self.0 == 0.5
    }

    /// Value of the one-bit character at a `0` bit: `sqrt(p / (1 - p))`.
    pub fn char_at_zero(self) -> f64 {
        if self.is_half() {
            1.0
        } else {
            (self.0 / (1.0 - self.0)).sqrt()
        }
    }

    /// Value of the one-bit character at a `1` bit: `-sqrt((1 - p) / p)`.
    pub fn char_at_one(self) -> f64 {
        if self.is_half() {
            -1.0
        } else {
            -((1.0 - self.0) / self.0).sqrt()
        }
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for Bias {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Bias::new(p)
    }
}

/// The product measure `P_p` on `{0,1}^n` as a dense table indexed by mask.
///
/// Accepts the closed interval `[0, 1]`; the endpoints give point masses.
pub fn product_measure(n: usize, p: f64) -> Vec<f64> {
    let mut w = vec![0.0; 1 << n];
    w[0] = 1.0;
    for i in 0..n {
        let h = 1 << i;
        for mask in 0..h {
            let base = w[mask];
            w[mask | h] = base * p;
            w[mask] = base * (1.0 - p);
        }
    }
    w
}
