//! Formal tangent-to-identity diffeomorphisms at infinity.
//!
//! An element is `f = id + sigma + tail` with `tail` a series without
//! constant term. Composition follows the group law
//! `f o h = id + chi + phi o (id + chi)`, and two independent inversion
//! algorithms are provided: Lagrange reversion and fixed-point iteration of
//! the contraction `C(f) = id - (f o h - f)`.

use serde_json::{json, Value};

use crate::coeff::{Coeff, FLOAT_VAL_EPS};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::formal::{inv_factorial, FormalSeries};
use num_complex::Complex64;

/// Inversion strategy; both must agree exactly in exact mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InversionMethod {
    Lagrange,
    FixedPoint,
}

impl std::str::FromStr for InversionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lagrange" => Ok(InversionMethod::Lagrange),
            "fixed-point" | "fixed_point" | "fixedpoint" => Ok(InversionMethod::FixedPoint),
            other => Err(Error::UnknownId(format!("inversion method {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalDiffeo<C: Coeff> {
    /// Translation part.
    pub sigma: C,
    /// Series without constant term; `f = id + sigma + tail`.
    pub tail: FormalSeries<C>,
}

impl<C: Coeff> FormalDiffeo<C> {
    pub fn new(sigma: C, tail: FormalSeries<C>) -> Result<Self> {
        if !tail.coeff(0).is_val_zero(FLOAT_VAL_EPS) {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(FormalDiffeo { sigma, tail })
    }

    pub fn identity(order: usize) -> Self {
        FormalDiffeo {
            sigma: C::zero(),
            tail: FormalSeries::zero(order),
        }
    }

    pub fn translation(sigma: C, order: usize) -> Self {
        FormalDiffeo {
            sigma,
            tail: FormalSeries::zero(order),
        }
    }

    pub fn order(&self) -> usize {
        self.tail.order()
    }

    /// `sigma + tail` as one series (the `f - id` part).
    pub fn offset(&self) -> FormalSeries<C> {
        let mut s = self.tail.clone();
        s.set_coeff(0, self.sigma.clone());
        s
    }

    fn from_offset(chi: FormalSeries<C>) -> Self {
        let sigma = chi.coeff(0);
        let mut tail = chi;
        tail.set_coeff(0, C::zero());
        FormalDiffeo { sigma, tail }
    }

    /// Group law `f o h`; the sigma parts add.
    pub fn compose(&self, h: &Self) -> Self {
        let chi = h.offset();
        let composed = self.offset().compose_tail(&chi);
        Self::from_offset(chi.truncate(composed.order()).add(&composed))
    }

    /// Compose with a plain series: `phi o f` for `phi` in the base algebra.
    pub fn pullback(&self, phi: &FormalSeries<C>) -> FormalSeries<C> {
        phi.compose_tail(&self.offset())
    }

    /// Inverse for the group law, to truncation order.
    pub fn invert(&self, method: InversionMethod) -> Self {
        match method {
            InversionMethod::Lagrange => self.invert_lagrange(),
            InversionMethod::FixedPoint => self.invert_fixed_point(),
        }
    }

    /// Lagrange reversion: `(id+chi)^{o(-1)} = id + sum_k (-1)^k/k! d^{k-1}(chi^k)`.
    fn invert_lagrange(&self) -> Self {
        let n = self.order();
        let chi = self.offset();
        let mut acc = FormalSeries::zero(n);
        let mut chi_pow = FormalSeries::constant(C::one(), n);
        for k in 1..=(n + 1) {
            chi_pow = chi_pow.mul(&chi);
            // d^{k-1}(chi^k), truncated back to working order
            let mut term = chi_pow.clone();
            for _ in 1..k {
                term = term.derive().truncate(n);
            }
            let sign = if k % 2 == 0 { C::one() } else { C::one().neg() };
            acc = acc.add(&term.scale(&sign.mul(&inv_factorial::<C>(k))));
            if chi_pow.coeffs().iter().all(|c| c.is_val_zero(0.0)) {
                break;
            }
        }
        Self::from_offset(acc)
    }

    /// Banach iteration of `C(f) = id - (f o h - f)`, a 1/2-contraction in
    /// the Krull metric; exactly `order + 1` iterations are performed, which
    /// pins every coefficient up to the truncation order. No convergence
    /// heuristics.
    fn invert_fixed_point(&self) -> Self {
        let n = self.order();
        let mut f = Self::identity(n);
        for _ in 0..=n {
            // offset(C(f)) = offset(f) - offset(f o h)
            let fh = f.compose(self);
            f = Self::from_offset(f.offset().sub(&fh.offset()));
        }
        f
    }
}

impl FormalDiffeo<Exact> {
    pub fn to_json(&self) -> Result<Value> {
        if !self.sigma.is_real() {
            return Err(Error::InvalidParam(
                "exact diffeos with non-real sigma have no JSON form".into(),
            ));
        }
        Ok(json!({
            "sigma": [crate::exact::ratio_to_f64(&self.sigma.re), 0.0],
            "tail": self.tail.to_json()?,
        }))
    }
}

impl FormalDiffeo<Complex64> {
    pub fn to_json(&self) -> Value {
        json!({
            "sigma": [self.sigma.re, self.sigma.im],
            "tail": self.tail.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let sigma = crate::formal::parse_complex(
            v.get("sigma")
                .ok_or_else(|| Error::InvalidParam("missing \"sigma\"".into()))?,
        )?;
        let tail = FormalSeries::<Complex64>::from_json(
            v.get("tail")
                .ok_or_else(|| Error::InvalidParam("missing \"tail\"".into()))?,
        )?;
        FormalDiffeo::new(sigma, tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diffeo(sigma: i64, tail: &[(i64, i64)]) -> FormalDiffeo<Exact> {
        let mut coeffs: Vec<Exact> = tail.iter().map(|&(p, q)| Exact::ratio(p, q)).collect();
        coeffs.insert(0, Exact::int(0));
        FormalDiffeo::new(Exact::int(sigma), FormalSeries::from_coeffs(coeffs)).unwrap()
    }

    #[test]
    fn compose_identity_and_translations() {
        let f = diffeo(2, &[(1, 2), (-1, 3), (0, 1), (5, 1)]);
        let id = FormalDiffeo::identity(4);
        assert_eq!(f.compose(&id), f);
        assert_eq!(id.compose(&f), f);
        // (id+1) o (id+1) = id+2
        let t1 = FormalDiffeo::translation(Exact::int(1), 4);
        let t2 = t1.compose(&t1);
        assert_eq!(t2.sigma, Exact::int(2));
        assert!(t2.tail.is_zero());
    }

    #[test]
    fn compose_shift_of_inverse_z() {
        // (id + z^-1) o (id + 1) = id + 1 + z^-1 - z^-2 + z^-3 - ...
        let f = diffeo(0, &[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let t1 = FormalDiffeo::translation(Exact::int(1), 5);
        let c = f.compose(&t1);
        assert_eq!(c.sigma, Exact::int(1));
        for n in 1..=5 {
            let want = if n % 2 == 1 { Exact::int(1) } else { Exact::int(-1) };
            assert_eq!(c.tail.coeff(n), want);
        }
    }

    #[test]
    fn invert_translation() {
        let t = FormalDiffeo::translation(Exact::int(5), 3);
        for m in [InversionMethod::Lagrange, InversionMethod::FixedPoint] {
            let inv = t.invert(m);
            assert_eq!(inv.sigma, Exact::int(-5));
            assert!(inv.tail.is_zero());
        }
    }

    #[test]
    fn invert_id_plus_zinv() {
        // invert(id + z^-1) = id - z^-1 - z^-3 - 2 z^-5 - ...
        let h = diffeo(0, &[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let inv = h.invert(InversionMethod::Lagrange);
        assert_eq!(inv.tail.coeff(1), Exact::int(-1));
        assert_eq!(inv.tail.coeff(2), Exact::int(0));
        assert_eq!(inv.tail.coeff(3), Exact::int(-1));
        assert_eq!(inv.tail.coeff(4), Exact::int(0));
        assert_eq!(inv.tail.coeff(5), Exact::int(-2));
        // composing back gives id through order 6
        let comp = h.compose(&inv);
        assert!(comp.sigma.is_val_zero(0.0));
        assert!(comp.tail.is_zero());
        let comp = inv.compose(&h);
        assert!(comp.sigma.is_val_zero(0.0));
        assert!(comp.tail.is_zero());
    }

    #[test]
    fn invert_is_involution() {
        let h = diffeo(1, &[(1, 2), (-2, 3), (1, 1), (0, 1), (4, 7), (1, 9)]);
        for m in [InversionMethod::Lagrange, InversionMethod::FixedPoint] {
            assert_eq!(h.invert(m).invert(m), h);
        }
    }

    #[test]
    fn methods_agree_and_sigma_rules() {
        let h = diffeo(3, &[(2, 1), (1, 5), (0, 1), (7, 2), (1, 1), (2, 3)]);
        let a = h.invert(InversionMethod::Lagrange);
        let b = h.invert(InversionMethod::FixedPoint);
        assert_eq!(a, b);
        assert_eq!(a.sigma, Exact::int(-3));
        let f = diffeo(2, &[(1, 1), (0, 1), (1, 4), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(f.compose(&h).sigma, Exact::int(5));
    }

    #[test]
    fn tangent_subgroup_is_closed() {
        // no constant term in tails stays true under composition and inversion
        let f = diffeo(0, &[(1, 1), (1, 2), (0, 1), (2, 5)]);
        let h = diffeo(0, &[(-1, 3), (0, 1), (1, 1), (1, 7)]);
        let c = f.compose(&h);
        assert!(c.sigma.is_val_zero(0.0));
        assert!(c.tail.coeff(0).is_val_zero(0.0));
        let inv = f.invert(InversionMethod::Lagrange);
        assert!(inv.sigma.is_val_zero(0.0));
        assert!(inv.tail.coeff(0).is_val_zero(0.0));
    }
}
