//! Coefficient domains for formal series.
//!
//! Two domains are supported: exact Gaussian rationals ([`Exact`]) and
//! complex floats at fixed 53-bit precision ([`Complex64`]). Mixing them is a
//! compile-time impossibility inside the library; the JSON layer reports a
//! domain mismatch instead of coercing.

use num::{One, Zero};
use num_complex::Complex64;

use crate::exact::Exact;

/// Default threshold below which a float coefficient counts as zero in
/// valuation queries. Never used in arithmetic.
pub const FLOAT_VAL_EPS: f64 = 1e-13;

/// Scalar operations required of a series coefficient.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(p: i64, q: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Zero test for valuation purposes: exact in the rational domain,
    /// `|a| < eps` in the float domain.
    fn is_val_zero(&self, eps: f64) -> bool;
    fn to_complex(&self) -> Complex64;
    /// Human-readable name of the coefficient domain.
    fn domain_name() -> &'static str;
}

impl Coeff for Exact {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(p: i64, q: i64) -> Self {
        Exact::ratio(p, q)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn div(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_val_zero(&self, _eps: f64) -> bool {
        Zero::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        Exact::to_complex(self)
    }
    fn domain_name() -> &'static str {
        "exact-rational"
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(p: i64, q: i64) -> Self {
        Complex64::new(p as f64 / q as f64, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_val_zero(&self, eps: f64) -> bool {
        self.norm() < eps
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn domain_name() -> &'static str {
        "complex-float"
    }
}

/// Descriptor of a coefficient domain, carried by serialized artifacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffDomain {
    ExactRational,
    /// Complex floats with the given mantissa precision in bits. Only 53
    /// (IEEE double) is available in this build.
    ComplexFloat { precision_bits: u32 },
}

impl CoeffDomain {
    pub fn complex_float_default() -> Self {
        CoeffDomain::ComplexFloat { precision_bits: 53 }
    }
}
