//! Truncated formal power series in `z^-1`.
//!
//! A [`FormalSeries`] holds coefficients `a_0..a_N` of
//! `sum a_n z^-n`; `N` is the truncation order. Binary operations truncate to
//! the minimum of the operand orders, and operations that lose further orders
//! (division by a series of positive valuation) say so in their docs.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coeff::{Coeff, FLOAT_VAL_EPS};
use crate::error::{Error, Result};
use crate::exact::Exact;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<C: Coeff> {
    coeffs: Vec<C>,
}

/// Truncated Taylor coefficients `h_0..h_K` of a germ at 0, used as the outer
/// function of [`FormalSeries::substitute`].
#[derive(Clone, Debug)]
pub struct TaylorGerm<C: Coeff> {
    pub coeffs: Vec<C>,
}

impl<C: Coeff> TaylorGerm<C> {
    /// exp(t) truncated at degree `k_max`.
    pub fn exp(k_max: usize) -> Self {
        let mut coeffs = Vec::with_capacity(k_max + 1);
        let mut c = C::one();
        coeffs.push(c.clone());
        for p in 1..=k_max {
            c = c.div(&C::from_ratio(p as i64, 1));
            coeffs.push(c.clone());
        }
        TaylorGerm { coeffs }
    }
}

impl<C: Coeff> FormalSeries<C> {
    /// Builds a series from coefficients `a_0..a_N`; order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least order 0");
        FormalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        FormalSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial z^-n.
    pub fn monomial(n: usize, order: usize) -> Self {
        assert!(n <= order);
        let mut s = Self::zero(order);
        s.coeffs[n] = C::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        assert!(n < self.coeffs.len());
        self.coeffs[n] = c;
    }

    /// Truncates (or zero-extends) to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        FormalSeries { coeffs }
    }

    /// `min{n : a_n != 0}`, or `None` for the zero truncation.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_val_zero(FLOAT_VAL_EPS))
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].add(&rhs.coeffs[k]))
            .collect();
        FormalSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].sub(&rhs.coeffs[k]))
            .collect();
        FormalSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Cauchy product truncated at the minimum operand order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); n + 1];
        for (p, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_val_zero(0.0) {
                continue;
            }
            for (q, b) in rhs.coeffs.iter().enumerate().take(n + 1 - p) {
                coeffs[p + q] = coeffs[p + q].add(&a.mul(b));
            }
        }
        FormalSeries { coeffs }
    }

    /// Termwise derivative d/dz: `a_n z^-n -> -n a_n z^-(n+1)`.
    /// The output order is `order + 1`: the top input coefficient still
    /// determines one more output coefficient.
    pub fn derive(&self) -> Self {
        let mut coeffs = vec![C::zero(); self.order() + 2];
        for (n, a) in self.coeffs.iter().enumerate() {
            coeffs[n + 1] = a.mul(&C::from_ratio(-(n as i64), 1));
        }
        FormalSeries { coeffs }
    }

    /// Multiplication by z, defined on series without constant term.
    /// Loses one order.
    pub fn mul_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_val_zero(FLOAT_VAL_EPS) {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(FormalSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// The shift operator `T_c: phi(z) -> phi(z+c)`, an algebra automorphism
    /// commuting with the derivative. Order-preserving.
    pub fn shift(&self, c: &C) -> Self {
        self.compose_tail(&Self::constant(c.clone(), self.order()))
    }

    /// Composition `phi o (id + chi) = sum_p chi^p d^p(phi) / p!`, formally
    /// convergent because `val(chi^p d^p phi) >= val(phi) + p`.
    /// The result is truncated at `min(order phi, order chi)`.
    pub fn compose_tail(&self, chi: &Self) -> Self {
        let n = self.order().min(chi.order());
        let mut acc = self.truncate(n);
        let mut term = self.truncate(n);
        let mut chi_pow = Self::constant(C::one(), n);
        for p in 1..=n {
            term = term.derive().truncate(n);
            chi_pow = chi_pow.mul(chi);
            // exact-zero checks only; float epsilons never short-circuit arithmetic
            if chi_pow.coeffs.iter().all(|c| c.is_val_zero(0.0))
                || term.coeffs.iter().all(|c| c.is_val_zero(0.0))
            {
                break;
            }
            let inc = chi_pow.mul(&term).scale(&inv_factorial::<C>(p));
            acc = acc.add(&inc);
        }
        acc
    }

    /// Substitution of a series without constant term into a Taylor germ:
    /// `H o phi = sum_p h_p phi^p`. Rejects `phi` with a nonzero constant
    /// term.
    pub fn substitute(h: &TaylorGerm<C>, phi: &Self) -> Result<Self> {
        if !phi.coeffs[0].is_val_zero(FLOAT_VAL_EPS) {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = phi.order();
        let mut acc = Self::zero(n);
        if let Some(h0) = h.coeffs.first() {
            acc.coeffs[0] = h0.clone();
        }
        let mut phi_pow = Self::constant(C::one(), n);
        for (p, hp) in h.coeffs.iter().enumerate().skip(1) {
            if p > n {
                break;
            }
            phi_pow = phi_pow.mul(phi);
            acc = acc.add(&phi_pow.scale(hp));
        }
        Ok(acc)
    }

    /// Division. Requires `val(rhs) <= val(self)`; knowing both inputs to
    /// order `N` determines the quotient to order `N - val(rhs)` only, so
    /// that many orders are lost.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let v = rhs.valuation().ok_or_else(|| {
            Error::InvalidParam("division by the zero truncation".into())
        })?;
        if let Some(sv) = self.valuation() {
            if sv < v {
                return Err(Error::ValuationTooLow { needed: v, got: sv });
            }
        }
        let n = self.order().min(rhs.order());
        if n < v {
            return Err(Error::InvalidParam(
                "truncation order too small for the requested division".into(),
            ));
        }
        let m = n - v; // guaranteed order of the quotient
        let lead = rhs.coeffs[v].clone();
        let mut q = vec![C::zero(); m + 1];
        for k in 0..=m {
            // numerator coefficient of z^-(k+v) minus contributions
            let mut s = self.coeff(k + v);
            for j in 0..k {
                s = s.sub(&q[j].mul(&rhs.coeff(k + v - j)));
            }
            q[k] = s.div(&lead);
        }
        // quotient starts at z^(-0) relative offset: q[k] is coeff of z^-k
        Ok(FormalSeries { coeffs: q })
    }

    /// Krull distance 2^-val(psi-phi); 0 when the truncations are equal.
    pub fn krull_distance(&self, rhs: &Self) -> f64 {
        match self.sub(rhs).valuation() {
            Some(v) => 0.5f64.powi(v as i32),
            None => 0.0,
        }
    }

    pub fn to_complex_series(&self) -> FormalSeries<Complex64> {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|c| c.to_complex()).collect(),
        }
    }

    /// Evaluates the partial sum `sum_{n<=N} a_n z^-n` at a point (Horner in
    /// z^-1).
    pub fn eval_partial(&self, z: Complex64, n_terms: usize) -> Complex64 {
        let top = n_terms.min(self.order());
        let zinv = 1.0 / z;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (0..=top).rev() {
            acc = acc * zinv + self.coeffs[n].to_complex();
        }
        acc
    }
}

/// 1/p! in the coefficient domain.
pub fn inv_factorial<C: Coeff>(p: usize) -> C {
    let mut c = C::one();
    for k in 1..=p {
        c = c.div(&C::from_ratio(k as i64, 1));
    }
    c
}

/// p! in the coefficient domain.
pub fn factorial<C: Coeff>(p: usize) -> C {
    let mut c = C::one();
    for k in 1..=p {
        c = c.mul(&C::from_ratio(k as i64, 1));
    }
    c
}

// ---------------------------------------------------------------------------
// JSON: {"var":"zinv","order":N,"coeffs":[[re,im],...]} for floats,
//       {"var":"zinv","order":N,"coeffs_rational":[["p","q"],...]} for exact.
// ---------------------------------------------------------------------------

impl FormalSeries<Complex64> {
    pub fn to_json(&self) -> Value {
        json!({
            "var": "zinv",
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        check_var(v, "zinv")?;
        if v.get("coeffs_rational").is_some() {
            return Err(Error::DomainMismatch(
                "expected complex-float coefficients, found exact-rational".into(),
            ));
        }
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParam("missing \"coeffs\"".into()))?;
        let coeffs = coeffs
            .iter()
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()?;
        from_parts(v, coeffs)
    }
}

impl FormalSeries<Exact> {
    pub fn to_json(&self) -> Result<Value> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if !c.is_real() {
                    return Err(Error::InvalidParam(
                        "exact series with non-real coefficients have no JSON form".into(),
                    ));
                }
                Ok(json!([c.re.numer().to_string(), c.re.denom().to_string()]))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({
            "var": "zinv",
            "order": self.order(),
            "coeffs_rational": coeffs,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        check_var(v, "zinv")?;
        if v.get("coeffs").is_some() {
            return Err(Error::DomainMismatch(
                "expected exact-rational coefficients, found complex-float".into(),
            ));
        }
        let coeffs = v
            .get("coeffs_rational")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParam("missing \"coeffs_rational\"".into()))?;
        let coeffs = coeffs
            .iter()
            .map(parse_exact)
            .collect::<Result<Vec<_>>>()?;
        from_parts(v, coeffs)
    }
}

fn check_var(v: &Value, want: &str) -> Result<()> {
    match v.get("var").and_then(Value::as_str) {
        Some(s) if s == want => Ok(()),
        Some(s) => Err(Error::InvalidParam(format!(
            "expected var \"{want}\", got \"{s}\""
        ))),
        None => Err(Error::InvalidParam("missing \"var\"".into())),
    }
}

fn from_parts<C: Coeff>(v: &Value, coeffs: Vec<C>) -> Result<FormalSeries<C>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParam("empty coefficient list".into()));
    }
    if let Some(order) = v.get("order").and_then(Value::as_u64) {
        if order as usize + 1 != coeffs.len() {
            return Err(Error::InvalidParam(format!(
                "order {} does not match {} coefficients",
                order,
                coeffs.len()
            )));
        }
    }
    Ok(FormalSeries::from_coeffs(coeffs))
}

pub(crate) fn parse_complex(v: &Value) -> Result<Complex64> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidParam("coefficient must be [re,im]".into()))?;
    if arr.len() != 2 {
        return Err(Error::InvalidParam("coefficient must be [re,im]".into()));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| Error::InvalidParam("non-numeric coefficient".into()))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| Error::InvalidParam("non-numeric coefficient".into()))?;
    Ok(Complex64::new(re, im))
}

fn parse_exact(v: &Value) -> Result<Exact> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidParam("rational coefficient must be [\"p\",\"q\"]".into()))?;
    if arr.len() != 2 {
        return Err(Error::InvalidParam("rational coefficient must be [\"p\",\"q\"]".into()));
    }
    let p = arr[0]
        .as_str()
        .ok_or_else(|| Error::InvalidParam("rational parts must be strings".into()))?;
    let q = arr[1]
        .as_str()
        .ok_or_else(|| Error::InvalidParam("rational parts must be strings".into()))?;
    let r = Exact::parse_rational(&format!("{p}/{q}"))
        .ok_or_else(|| Error::InvalidParam(format!("bad rational {p}/{q}")))?;
    Ok(Exact::new(r, num::BigRational::from_integer(0.into())))
}
