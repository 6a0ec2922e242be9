//! Numerical tolerances.

use crate::riesz::KernelKind;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Absolute slack on cap and mass constraints.
    pub feas: T,
    /// Absolute tolerance for sampled integrand/profile properties,
    /// scaled by the magnitude of the terms being compared.
    pub prop: T,
    /// Relative agreement between the two evaluation paths.
    pub eval: T,
    /// Relative tie band for argmax sets and ascent improvements.
    pub tie: T,
    /// Relative chain tolerance in one dimension.
    pub chain_1d: T,
    /// Override for the two-dimensional chain constant `C` in `C * h`.
    pub chain_c: Option<T>,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            feas: lit(1e-12),
            prop: lit(1e-12),
            eval: lit(1e-10),
            tie: lit(1e-12),
            chain_1d: lit(1e-9),
            chain_c: None,
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Chain tolerance for a domain of dimension `dim` with cell width `h`.
    /// One dimension is relative, two dimensions are `C * h` relative.
    pub fn chain(&self, dim: usize, h: T, kernel: &KernelKind<T>) -> T {
        if dim == 1 {
            self.chain_1d
        } else {
            self.chain_c.unwrap_or_else(|| lit(chain_constant(kernel))) * h
        }
    }
}

/// Constant `C` of the 2D chain tolerance `C * h`. Entries bound the values
/// returned by [`crate::study::calibrate_chain_constant`].
pub fn chain_constant<T: Scalar>(kernel: &KernelKind<T>) -> f64 {
    match kernel {
        KernelKind::Exp => 1e-3,
        KernelKind::Algebraic { .. } => 1e-3,
        _ => 1e-2,
    }
}

/// Constant `C` bounding 2D radial monotonicity violations of the potential
/// by `C * h`; see [`crate::study::calibrate_potential_constant`].
pub fn potential_constant<T: Scalar>(kernel: &KernelKind<T>) -> f64 {
    match kernel {
        KernelKind::Exp => 2e-3,
        KernelKind::Algebraic { .. } => 2e-3,
        _ => 2e-2,
    }
}
