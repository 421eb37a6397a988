//! Number formatting shared by all CSV writers.

use std::fmt;

/// Shortest round-trip representation: plain decimal for magnitudes in
/// `[1e-4, 1e15)` and zero, exponent form otherwise.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}
