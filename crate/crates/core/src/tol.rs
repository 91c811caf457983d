//! Floating point comparison used throughout the exact routines.
//!
//! Two values are considered equal when their difference is below
//! `max(REL * max(|a|, |b|), ABS)`.

pub const REL: f64 = 1e-10;
pub const ABS: f64 = 1e-12;

pub fn close(a: f64, b: f64) -> bool {
    close_with(a, b, REL, ABS)
}

pub fn close_with(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= (rel * a.abs().max(b.abs())).max(abs)
}
