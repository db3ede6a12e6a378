//! Formal Borel transform and the delta-extended convolution algebra.
//!
//! `B` sends `a + sum a_n z^-(n+1)` to `a delta + sum a_n zeta^n / n!`; it is
//! an algebra isomorphism once the Cauchy product on the left is matched with
//! the convolution on the right, `delta` being the unit.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::formal::{factorial, inv_factorial, FormalSeries};
use crate::quad::{adaptive_segment, SegmentResult};

/// Image of a formal series under the Borel transform: a multiple of the
/// convolution unit `delta` plus the minor `sum b_n zeta^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelFunction<C: Coeff> {
    pub delta: C,
    /// Taylor coefficients b_0..b_{N-1} of the minor.
    pub minor: Vec<C>,
}

impl<C: Coeff> BorelFunction<C> {
    pub fn new(delta: C, minor: Vec<C>) -> Self {
        BorelFunction { delta, minor }
    }

    /// Number of known minor coefficients.
    pub fn minor_len(&self) -> usize {
        self.minor.len()
    }

    pub fn minor_coeff(&self, n: usize) -> C {
        self.minor.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn to_complex(&self) -> BorelFunction<Complex64> {
        BorelFunction {
            delta: self.delta.to_complex(),
            minor: self.minor.iter().map(|c| c.to_complex()).collect(),
        }
    }

    /// Evaluates the truncated minor at a point.
    pub fn eval_minor_truncated(&self, zeta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.minor.iter().rev() {
            acc = acc * zeta + c.to_complex();
        }
        acc
    }
}

/// Formal Borel transform. `B(a + sum a_n z^-(n+1)) = a delta + sum a_n zeta^n/n!`.
pub fn borel<C: Coeff>(phi: &FormalSeries<C>) -> BorelFunction<C> {
    let n = phi.order();
    let mut minor = Vec::with_capacity(n);
    for k in 1..=n {
        minor.push(phi.coeff(k).mul(&inv_factorial::<C>(k - 1)));
    }
    BorelFunction {
        delta: phi.coeff(0),
        minor,
    }
}

/// Inverse Borel transform, exact on truncations.
pub fn inverse_borel<C: Coeff>(hat: &BorelFunction<C>) -> FormalSeries<C> {
    let mut coeffs = Vec::with_capacity(hat.minor.len() + 1);
    coeffs.push(hat.delta.clone());
    for (n, b) in hat.minor.iter().enumerate() {
        coeffs.push(b.mul(&factorial::<C>(n)));
    }
    FormalSeries::from_coeffs(coeffs)
}

/// Convolution product, the push-forward of the Cauchy product through `B`;
/// `delta` is the unit.
pub fn convolve<C: Coeff>(a: &BorelFunction<C>, b: &BorelFunction<C>) -> BorelFunction<C> {
    borel(&inverse_borel(a).mul(&inverse_borel(b)))
}

/// Solves the linear difference equation `phi(z+1) - phi(z) = psi(z)` for the
/// unique solution without constant term. Requires `val(psi) >= 2`; the
/// minor of the solution is `B(psi)(zeta) / (e^-zeta - 1)`, computed by exact
/// series division after factoring the simple zero at 0. One truncation
/// order is lost to that division.
pub fn solve_difference<C: Coeff>(psi: &FormalSeries<C>) -> Result<FormalSeries<C>> {
    match psi.valuation() {
        None => return Ok(FormalSeries::zero(psi.order().saturating_sub(1))),
        Some(v) if v < 2 => return Err(Error::ValuationTooLow { needed: 2, got: v }),
        _ => {}
    }
    let n = psi.order();
    let psi_hat = borel(psi); // b_0 = 0 since val >= 2
    // (e^-zeta - 1)/(-zeta) = sum_{k>=0} (-1)^k zeta^k/(k+1)!
    let mut den = Vec::with_capacity(n);
    for k in 0..n {
        let c = inv_factorial::<C>(k + 1);
        den.push(if k % 2 == 0 { c } else { c.neg() });
    }
    // minor(phi) = psi_hat / (e^-zeta - 1) = (psi_hat/zeta) / (-(e^-zeta-1)/(-zeta))
    // psi_hat has b_0 = 0, so psi_hat/zeta drops the first coefficient.
    let num: Vec<C> = psi_hat.minor.iter().skip(1).cloned().collect();
    let num_series = FormalSeries::from_coeffs(if num.is_empty() { vec![C::zero()] } else { num });
    let den_series = FormalSeries::from_coeffs(den).neg();
    let quot = num_series.div(&den_series)?;
    let minor = quot.coeffs().to_vec();
    Ok(inverse_borel(&BorelFunction::new(C::zero(), minor)))
}

/// Numerical convolution of two holomorphic evaluators along the segment
/// `[0, zeta]`, as the integral of `Phi(zeta_1) Psi(zeta - zeta_1)`.
pub fn convolve_numeric(
    phi: &dyn Fn(Complex64) -> Complex64,
    psi: &dyn Fn(Complex64) -> Complex64,
    zeta: Complex64,
    tolerance: f64,
) -> Result<SegmentResult> {
    // parametrize zeta_1 = s * zeta, s in [0,1]
    let f = |s: f64| phi(s * zeta) * psi((1.0 - s) * zeta) * zeta;
    let r = adaptive_segment(&f, 0.0, 1.0, tolerance)?;
    Ok(r)
}

// ---------------------------------------------------------------------------
// JSON: mirrors FormalSeries with "var":"zeta" plus "delta":[re,im].
// ---------------------------------------------------------------------------

impl BorelFunction<Complex64> {
    pub fn to_json(&self) -> Value {
        json!({
            "var": "zeta",
            "delta": [self.delta.re, self.delta.im],
            "order": self.minor.len().saturating_sub(1),
            "coeffs": self.minor.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
        })
    }
}

impl BorelFunction<Exact> {
    pub fn to_json(&self) -> Result<Value> {
        let minor_series = FormalSeries::from_coeffs(if self.minor.is_empty() {
            vec![Exact::int(0)]
        } else {
            self.minor.clone()
        });
        let mut v = minor_series.to_json()?;
        let obj = v.as_object_mut().unwrap();
        obj.insert("var".into(), json!("zeta"));
        if !self.delta.is_real() {
            return Err(Error::InvalidParam(
                "exact delta parts with nonzero imaginary part have no JSON form".into(),
            ));
        }
        obj.insert(
            "delta".into(),
            json!([
                self.delta.re.numer().to_string(),
                self.delta.re.denom().to_string()
            ]),
        );
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler(order: usize) -> FormalSeries<Exact> {
        let mut s = FormalSeries::zero(order);
        let mut f = Exact::int(1);
        for n in 0..order {
            s.set_coeff(n + 1, if n % 2 == 0 { f.clone() } else { -f.clone() });
            f = f * Exact::int(n as i64 + 1);
        }
        s
    }

    #[test]
    fn borel_of_zinv_is_one() {
        let z1 = FormalSeries::<Exact>::monomial(1, 4);
        let hat = borel(&z1);
        assert!(hat.delta.is_val_zero(0.0));
        assert_eq!(hat.minor_coeff(0), Exact::int(1));
        for k in 1..4 {
            assert!(hat.minor_coeff(k).is_val_zero(0.0));
        }
    }

    #[test]
    fn borel_of_euler_is_geometric() {
        let hat = borel(&euler(10));
        for n in 0..10 {
            let want = if n % 2 == 0 { Exact::int(1) } else { Exact::int(-1) };
            assert_eq!(hat.minor_coeff(n), want);
        }
    }

    #[test]
    fn borel_of_shifted_zinv_is_exponential() {
        // B(T_{-c} z^-1) has minor coefficients c^n/n!
        let c = Exact::int(3);
        let z1 = FormalSeries::<Exact>::monomial(1, 8);
        let shifted = z1.shift(&-c.clone());
        let hat = borel(&shifted);
        let mut cn = Exact::int(1);
        for n in 0..8 {
            assert_eq!(hat.minor_coeff(n), cn.clone() * inv_factorial::<Exact>(n));
            cn = cn * c.clone();
        }
    }

    #[test]
    fn inverse_borel_round_trip() {
        let s = euler(12);
        assert_eq!(inverse_borel(&borel(&s)), s);
    }

    #[test]
    fn delta_is_convolution_unit() {
        let hat = borel(&euler(9));
        let delta = BorelFunction::new(Exact::int(1), vec![Exact::int(0); 9]);
        assert_eq!(convolve(&delta, &hat), hat);
    }

    #[test]
    fn one_convolve_one_is_zeta() {
        // 1 * 1 = zeta  (p=q=c=0 case of the monomial convolution law)
        let one = BorelFunction::new(Exact::int(0), vec![Exact::int(1), Exact::int(0), Exact::int(0)]);
        let conv = convolve(&one, &one);
        assert!(conv.minor_coeff(0).is_val_zero(0.0));
        assert_eq!(conv.minor_coeff(1), Exact::int(1));
        assert!(conv.minor_coeff(2).is_val_zero(0.0));
    }

    #[test]
    fn monomial_exponential_convolution_law() {
        // (zeta^p/p! e^{c zeta}) * (zeta^q/q! e^{c zeta}) = zeta^{p+q+1}/(p+q+1)! e^{c zeta}
        // with p=1, q=2, c=1, checked through order 8.
        let order = 9usize;
        let c = Exact::int(1);
        let make = |p: usize| {
            // minor of T_{-c} z^-(p+1): coefficients of zeta^p/p! e^{c zeta}
            let zp = FormalSeries::<Exact>::monomial(p + 1, order);
            borel(&zp.shift(&-c.clone()))
        };
        let lhs = convolve(&make(1), &make(2));
        let rhs = make(4); // p+q+1 = 4
        for n in 0..=8 {
            assert_eq!(lhs.minor_coeff(n), rhs.minor_coeff(n), "coefficient {n}");
        }
    }

    #[test]
    fn derivative_becomes_mult_by_minus_zeta() {
        let s = euler(10);
        let lhs = borel(&s.derive().truncate(10));
        let rhs = borel(&s);
        // minor of B(d phi) is -zeta * minor(B phi): shifted by one index
        assert!(lhs.minor_coeff(0).is_val_zero(0.0));
        for n in 1..10 {
            assert_eq!(lhs.minor_coeff(n), -rhs.minor_coeff(n - 1));
        }
    }

    #[test]
    fn solve_difference_basic() {
        // psi = 0 -> 0
        let zero = FormalSeries::<Exact>::zero(6);
        assert!(solve_difference(&zero).unwrap().is_zero());
        // val < 2 rejected
        let z1 = FormalSeries::<Exact>::monomial(1, 6);
        assert!(solve_difference(&z1).is_err());
        // psi = z^-2 -> phi = -z^-1 - 1/2 z^-2 - 1/6 z^-3 - ...
        // (expand zeta/(e^-zeta - 1) and re-substitute through order 8)
        let z2 = FormalSeries::<Exact>::monomial(2, 9);
        let phi = solve_difference(&z2).unwrap();
        assert_eq!(phi.coeff(1), Exact::int(-1));
        assert_eq!(phi.coeff(2), Exact::ratio(-1, 2));
        assert_eq!(phi.coeff(3), Exact::ratio(-1, 6));
        // re-substitution: phi(z+1) - phi(z) = psi to the guaranteed order
        let resid = phi.shift(&Exact::int(1)).sub(&phi).sub(&z2.truncate(phi.order()));
        assert!(resid.is_zero(), "residual {resid:?}");
    }

    #[test]
    fn convolve_numeric_constants_and_exponentials() {
        // 1 * 1 at zeta = 2 -> 2
        let one = |_z: Complex64| Complex64::new(1.0, 0.0);
        let r = convolve_numeric(&one, &one, Complex64::new(2.0, 0.0), 1e-10).unwrap();
        assert!((r.value - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        // e^zeta * e^zeta at zeta = 1 -> zeta e^zeta = e
        let ex = |z: Complex64| z.exp();
        let r = convolve_numeric(&ex, &ex, Complex64::new(1.0, 0.0), 1e-12).unwrap();
        assert!((r.value.re - std::f64::consts::E).abs() < 1e-10);
        assert!(r.value.im.abs() < 1e-12);
    }

    #[test]
    fn convolve_numeric_matches_coefficient_convolution() {
        // two fixed degree-10 polynomials at zeta = 0.5, against the
        // coefficient law pushed through B
        let a: Vec<f64> = (0..=10).map(|k| ((k * 7 + 3) % 11) as f64 / 4.0 - 1.0).collect();
        let b: Vec<f64> = (0..=10).map(|k| ((k * 5 + 1) % 13) as f64 / 5.0 - 1.0).collect();
        let pa = a.clone();
        let pb = b.clone();
        let fa = move |z: Complex64| pa.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        let fb = move |z: Complex64| pb.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        // pad to hold the full degree-21 product so truncation is exact
        let pad = |v: &[f64]| {
            let mut m: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            m.resize(22, Complex64::new(0.0, 0.0));
            m
        };
        let ha = BorelFunction::new(Complex64::new(0.0, 0.0), pad(&a));
        let hb = BorelFunction::new(Complex64::new(0.0, 0.0), pad(&b));
        let hc = convolve(&ha, &hb);
        let zeta = Complex64::new(0.5, 0.0);
        let direct = convolve_numeric(&fa, &fb, zeta, 1e-12).unwrap().value;
        let series = hc.eval_minor_truncated(zeta);
        assert!(
            (direct - series).norm() < 1e-10,
            "direct {direct} vs series {series}"
        );
    }
}
