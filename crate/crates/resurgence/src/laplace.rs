//! Directional Laplace transforms and Borel sums.
//!
//! [`laplace_ray`] integrates `e^{-z zeta} phihat(zeta)` along the ray of
//! direction `theta`, valid on the half-plane `Re(z e^{i theta}) > gamma`;
//! [`borel_sum_arc`] glues directions over an arc, [`lateral_pair`] takes the
//! two sums hugging a singular ray, and [`gevrey_residual`] fits the
//! `L M^N N! |z|^{-N-1}` remainder envelope.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formal::FormalSeries;
use crate::minors::{CrossingSign, LateralPath, Minor};
use crate::quad::adaptive_segment_panels;

/// A summation direction in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub theta: f64,
}

/// An arc of directions with a constant growth bound; the Borel sum is
/// certified on the union of half-planes `Re(z e^{i theta}) > gamma`.
#[derive(Clone, Copy, Debug)]
pub struct SummationArc {
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
}

impl SummationArc {
    pub fn new(theta1: f64, theta2: f64, gamma: f64) -> Result<Self> {
        if !(theta1 < theta2) {
            return Err(Error::InvalidParam("arc needs theta1 < theta2".into()));
        }
        if theta2 - theta1 > std::f64::consts::PI + 1e-12 {
            return Err(Error::InvalidParam(
                "arcs longer than pi are out of scope; use lateral pairs".into(),
            ));
        }
        Ok(SummationArc {
            theta1,
            theta2,
            gamma,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig {
    /// Integration length along the ray; `None` selects it from the growth
    /// bound so the dropped tail stays under half the tolerance.
    pub truncation_length: Option<f64>,
    /// Initial Gauss-Legendre panel density (16-node panels per unit length
    /// at density 16).
    pub nodes_per_unit: u32,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            truncation_length: None,
            nodes_per_unit: 8,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        QuadratureConfig {
            tolerance,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LaplaceValue {
    pub value: Complex64,
    /// Quadrature error estimate plus the truncated-tail bound.
    pub est_error: f64,
    /// The tail bound alone, `~ alpha e^{(gamma - c) T}/(c - gamma)`.
    pub tail_bound: f64,
}

/// Margin by which `Re(z e^{i theta})` must clear the growth constant.
const HALFPLANE_MARGIN: f64 = 5e-2;
/// Minimal allowed distance from the integration path to a singular point.
const PATH_CLEARANCE: f64 = 2e-3;

fn decay_rate(z: Complex64, theta: f64) -> f64 {
    (z * Complex64::from_polar(1.0, theta)).re
}

/// Picks the truncation length so that `alpha (1+T^d) e^{(gamma-c)T} / (c-gamma)`
/// falls below `tol`, and returns `(T, bound)`.
fn tail_truncation(minor: &dyn Minor, theta: f64, c: f64, tol: f64) -> Result<(f64, f64)> {
    let g = minor.growth(theta);
    let rate = c - g.gamma;
    debug_assert!(rate > 0.0);
    let bound = |t: f64| {
        g.alpha * (1.0 + t.powi(g.poly_degree as i32)) * ((g.gamma - c) * t).exp() / rate
    };
    let mut t = (2.0 / rate).max(1.0);
    for _ in 0..60 {
        if bound(t) < tol {
            return Ok((t, bound(t)));
        }
        t *= 1.5;
        if t > 1e5 {
            break;
        }
    }
    Err(Error::QuadratureNonConvergence {
        achieved: bound(t),
        requested: tol,
    })
}

fn check_ray_clearance(minor: &dyn Minor, theta: f64, t_max: f64) -> Result<()> {
    let dir = Complex64::from_polar(1.0, theta);
    for omega in minor.singularities_within(1.05 * t_max + 1.0) {
        let proj = (omega * dir.conj()).re;
        let dist = if proj <= 0.0 {
            omega.norm()
        } else if proj >= t_max {
            (omega - t_max * dir).norm()
        } else {
            (omega - proj * dir).norm()
        };
        if dist < PATH_CLEARANCE {
            return Err(Error::SingularPointOnPath {
                point: format!("{omega}"),
            });
        }
    }
    Ok(())
}

/// Integrates a complex-valued path integrand with eval errors surfaced.
fn integrate_with_errors(
    f: &dyn Fn(f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    tol: f64,
    panels: usize,
) -> Result<crate::quad::SegmentResult> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let r = adaptive_segment_panels(&wrapped, a, b, tol, panels)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r)
}

/// Laplace transform of `a delta + minor` along the ray of direction
/// `theta`, evaluated at `z`. `L(delta) = 1` contributes the constant `a`.
pub fn laplace_ray(
    minor: &dyn Minor,
    a: Complex64,
    theta: f64,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<LaplaceValue> {
    let c = decay_rate(z, theta);
    let g = minor.growth(theta);
    if c <= g.gamma + HALFPLANE_MARGIN {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: format!(
                "Re(z e^(i {theta:.4})) = {c:.4} does not clear the growth constant {:.4}",
                g.gamma
            ),
        });
    }
    let (t_max, tail_bound) = match quad.truncation_length {
        Some(t) => {
            let rate = c - g.gamma;
            let b = g.alpha * (1.0 + t.powi(g.poly_degree as i32)) * (-rate * t).exp() / rate;
            (t, b)
        }
        None => tail_truncation(minor, theta, c, quad.tolerance / 2.0)?,
    };
    check_ray_clearance(minor, theta, t_max)?;
    let dir = Complex64::from_polar(1.0, theta);
    let f = |xi: f64| -> Result<Complex64> {
        let zeta = xi * dir;
        Ok((-z * zeta).exp() * minor.eval(zeta)? * dir)
    };
    let panels = ((t_max * quad.nodes_per_unit as f64 / 16.0).ceil() as usize).max(1);
    let r = integrate_with_errors(&f, 0.0, t_max, quad.tolerance / 2.0, panels)?;
    Ok(LaplaceValue {
        value: a + r.value,
        est_error: r.est_error + tail_bound,
        tail_bound,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ArcSum {
    pub value: Complex64,
    pub est_error: f64,
    /// Direction actually used.
    pub theta: f64,
    /// Disagreement between two admissible directions, when a second one
    /// exists.
    pub consistency: Option<f64>,
}

fn wrap_to(theta: f64, lo: f64, hi: f64) -> f64 {
    let mut t = theta;
    let tau = 2.0 * std::f64::consts::PI;
    while t < lo {
        t += tau;
    }
    while t > hi {
        t -= tau;
    }
    t
}

/// Borel sum over an arc: picks an admissible direction (maximal clearance of
/// the half-plane condition), and cross-checks a second admissible direction
/// when one exists. Values are independent of the choice by the gluing
/// property of directional Laplace transforms.
pub fn borel_sum_arc(
    minor: &dyn Minor,
    a: Complex64,
    arc: &SummationArc,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<ArcSum> {
    let inset = 1e-3 * (arc.theta2 - arc.theta1);
    let lo = arc.theta1 + inset;
    let hi = arc.theta2 - inset;
    // clearance m(theta) = Re(z e^{i theta}) - gamma is unimodal in theta
    let best = wrap_to(-z.arg(), lo, hi).clamp(lo, hi);
    let clearance = |theta: f64| decay_rate(z, theta) - arc.gamma;
    let mut theta_star = best;
    if clearance(theta_star) <= HALFPLANE_MARGIN {
        // scan for any admissible direction before giving up
        let mut found = None;
        for k in 0..=200 {
            let th = lo + (hi - lo) * k as f64 / 200.0;
            if clearance(th) > HALFPLANE_MARGIN {
                found = Some(th);
                break;
            }
        }
        theta_star = found.ok_or_else(|| Error::OutsideDomain {
            z: format!("{z}"),
            reason: "no admissible direction in the arc".into(),
        })?;
    }
    let main = laplace_ray(minor, a, theta_star, z, quad)?;
    // second admissible direction, spread away from the first
    let mut consistency = None;
    for cand in [
        theta_star + 0.35 * (hi - theta_star),
        theta_star - 0.35 * (theta_star - lo),
    ] {
        if (cand - theta_star).abs() > 1e-6 && clearance(cand) > HALFPLANE_MARGIN {
            if let Ok(second) = laplace_ray(minor, a, cand, z, quad) {
                consistency = Some((second.value - main.value).norm());
                break;
            }
        }
    }
    Ok(ArcSum {
        value: main.value,
        est_error: main.est_error,
        theta: theta_star,
        consistency,
    })
}

/// The pair of Borel sums hugging a singular ray: directions
/// `theta - eps` (right of the ray) and `theta + eps` (left of the ray).
pub fn lateral_pair(
    minor: &dyn Minor,
    a: Complex64,
    singular_ray_theta: f64,
    eps: f64,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<(LaplaceValue, LaplaceValue)> {
    if eps <= 0.0 || eps >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidParam("lateral offset must lie in (0, pi/2)".into()));
    }
    let plus = laplace_ray(minor, a, singular_ray_theta - eps, z, quad)?;
    let minus = laplace_ray(minor, a, singular_ray_theta + eps, z, quad)?;
    Ok((plus, minus))
}

/// Laplace transform along a detoured lateral path (straight ray with
/// semicircles around the on-ray singular points).
pub fn laplace_lateral_path(
    minor: &dyn Minor,
    path: &LateralPath,
    a: Complex64,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<LaplaceValue> {
    let theta = path.theta;
    let c = decay_rate(z, theta);
    let g = minor.growth(theta);
    if c <= g.gamma + HALFPLANE_MARGIN {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: "outside the lateral half-plane".into(),
        });
    }
    let (t_max, tail_bound) = tail_truncation(minor, theta, c, quad.tolerance / 2.0)?;
    let dir = Complex64::from_polar(1.0, theta);
    let r = path.detour_radius;
    let mut value = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    let mut cursor = 0.0f64;
    let tol = quad.tolerance / (2.0 * (path.crossings.len() + 1) as f64);
    for &(x, sign) in &path.crossings {
        if x + r > t_max {
            break;
        }
        // straight stretch
        let f = |xi: f64| -> Result<Complex64> {
            let zeta = xi * dir;
            Ok((-z * zeta).exp() * minor.eval(zeta)? * dir)
        };
        let seg = integrate_with_errors(&f, cursor, x - r, tol, 4)?;
        value += seg.value;
        est += seg.est_error;
        // semicircle around x*dir
        let center = x * dir;
        let arc = |t: f64| -> Result<Complex64> {
            let phi = match sign {
                CrossingSign::Plus => theta + std::f64::consts::PI * (1.0 + t),
                CrossingSign::Minus => theta + std::f64::consts::PI * (1.0 - t),
            };
            let e = Complex64::from_polar(1.0, phi);
            let zeta = center + r * e;
            // d zeta = i r e^{i phi} * (d phi/dt) dt
            let dphi = match sign {
                CrossingSign::Plus => std::f64::consts::PI,
                CrossingSign::Minus => -std::f64::consts::PI,
            };
            Ok((-z * zeta).exp() * minor.eval(zeta)? * Complex64::new(0.0, 1.0) * r * e * dphi)
        };
        let seg = integrate_with_errors(&arc, 0.0, 1.0, tol, 4)?;
        value += seg.value;
        est += seg.est_error;
        cursor = x + r;
    }
    let f = |xi: f64| -> Result<Complex64> {
        let zeta = xi * dir;
        Ok((-z * zeta).exp() * minor.eval(zeta)? * dir)
    };
    let seg = integrate_with_errors(&f, cursor, t_max, tol, 8)?;
    value += seg.value;
    est += seg.est_error;
    Ok(LaplaceValue {
        value: a + value,
        est_error: est + tail_bound,
        tail_bound,
    })
}

// ---------------------------------------------------------------------------
// Gevrey residual diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GevreyReport {
    /// Envelope prefactor after covering adjustment.
    pub l: f64,
    /// Fitted geometric rate.
    pub m: f64,
    /// Whether every residual sits under the fitted envelope with at most
    /// two decades of scatter (the envelope shape is then meaningful).
    pub holds: bool,
    /// max/min ratio of residual to least-squares envelope.
    pub scatter: f64,
    /// (z, N, residual) samples used.
    pub samples: Vec<(Complex64, usize, f64)>,
}

/// Measures `|value_fn(z) - partial sums|` for N = 0..n_max at each z, fits
/// `L M^N N! |z|^{-N-1}` by least squares in (log L, log M), and reports
/// whether the envelope shape holds.
pub fn gevrey_residual(
    phi: &FormalSeries<Complex64>,
    value_fn: &dyn Fn(Complex64) -> Result<Complex64>,
    z_list: &[Complex64],
    n_max: usize,
) -> Result<GevreyReport> {
    let mut samples = vec![];
    for &z in z_list {
        let v = value_fn(z)?;
        let floor = 1e-14 * v.norm().max(1.0);
        for n in 0..=n_max.min(phi.order()) {
            let r = (v - phi.eval_partial(z, n)).norm();
            if r > floor {
                samples.push((z, n, r));
            }
        }
    }
    if samples.len() < 4 {
        return Err(Error::InvalidParam(
            "too few usable residuals for a Gevrey fit".into(),
        ));
    }
    // log r = log L + N log M + log N! - (N+1) log|z|
    let mut s_n = 0.0;
    let mut s_nn = 0.0;
    let mut s_y = 0.0;
    let mut s_ny = 0.0;
    let k = samples.len() as f64;
    for &(z, n, r) in &samples {
        let y = r.ln() - ln_factorial(n) + (n as f64 + 1.0) * z.norm().ln();
        let nf = n as f64;
        s_n += nf;
        s_nn += nf * nf;
        s_y += y;
        s_ny += nf * y;
    }
    let det = k * s_nn - s_n * s_n;
    if det.abs() < 1e-12 {
        return Err(Error::IllConditionedFit { cond: f64::INFINITY });
    }
    let log_l = (s_nn * s_y - s_n * s_ny) / det;
    let log_m = (k * s_ny - s_n * s_y) / det;
    let mut rhos: Vec<f64> = samples
        .iter()
        .map(|&(z, n, r)| {
            let env =
                log_l + n as f64 * log_m + ln_factorial(n) - (n as f64 + 1.0) * z.norm().ln();
            (r.ln() - env).exp()
        })
        .collect();
    rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rho_max = *rhos.last().unwrap();
    let rho_med = rhos[rhos.len() / 2];
    // upward deviation from the typical fit quality; a blow-up here means the
    // residuals outgrow every envelope of this shape
    let scatter = rho_max / rho_med;
    Ok(GevreyReport {
        l: log_l.exp() * rho_max,
        m: log_m.exp(),
        holds: scatter <= 100.0,
        scatter,
        samples,
    })
}

pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{build_minor, EulerMinor, PolyMinor};
    use crate::oracles;

    fn tol() -> QuadratureConfig {
        QuadratureConfig::with_tolerance(1e-11)
    }

    #[test]
    fn laplace_of_constant_minor() {
        // minor = 1 (the Borel image of z^-1) at theta=0, z=2 -> 1/2
        let m = PolyMinor {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        };
        let r = laplace_ray(&m, Complex64::new(0.0, 0.0), 0.0, Complex64::new(2.0, 0.0), &tol())
            .unwrap();
        assert!((r.value - Complex64::new(0.5, 0.0)).norm() < 1e-10, "{r:?}");
    }

    #[test]
    fn laplace_monomial_law() {
        // L^0(zeta^n/n!) = z^-(n-1): n=3, z=2 -> 1/16
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 4];
        coeffs[3] = Complex64::new(1.0 / 6.0, 0.0);
        let m = PolyMinor { coeffs };
        let r = laplace_ray(&m, Complex64::new(0.0, 0.0), 0.0, Complex64::new(2.0, 0.0), &tol())
            .unwrap();
        assert!((r.value - Complex64::new(1.0 / 16.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn laplace_monomial_law_rotated() {
        // relative error < 1e-9 for n <= 10 and several directions
        for &theta in &[0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2] {
            let z = Complex64::from_polar(2.0, -theta + 0.2);
            for n in 0..=10usize {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
                coeffs[n] = Complex64::new(1.0 / (1..=n).map(|k| k as f64).product::<f64>(), 0.0);
                let m = PolyMinor { coeffs };
                let r =
                    laplace_ray(&m, Complex64::new(0.0, 0.0), theta, z, &tol()).unwrap();
                let want = z.powi(-(n as i32) - 1);
                assert!(
                    (r.value - want).norm() / want.norm() < 1e-9,
                    "n={n} theta={theta}"
                );
            }
        }
    }

    #[test]
    fn euler_sum_at_one() {
        let r = laplace_ray(
            &EulerMinor,
            Complex64::new(0.0, 0.0),
            0.0,
            Complex64::new(1.0, 0.0),
            &tol(),
        )
        .unwrap();
        assert!(
            (r.value.re - 0.59634736).abs() < 1e-7,
            "value {}",
            r.value
        );
        assert!(r.value.im.abs() < 1e-11);
    }

    #[test]
    fn laplace_linearity_in_minor() {
        let m1 = build_minor("poly(coeffs=1;0.5;-0.25)").unwrap();
        let m2 = build_minor("exp(c=0.3)").unwrap();
        let z = Complex64::new(2.0, 0.7);
        let a = laplace_ray(m1.as_ref(), Complex64::new(0.0, 0.0), 0.0, z, &tol()).unwrap();
        let b = laplace_ray(m2.as_ref(), Complex64::new(0.0, 0.0), 0.0, z, &tol()).unwrap();
        // 2*m1 - 3i*m2 as a custom closure-backed minor
        struct Combo(Box<dyn crate::minors::Minor>, Box<dyn crate::minors::Minor>);
        impl crate::minors::Minor for Combo {
            fn eval(&self, zeta: Complex64) -> crate::error::Result<Complex64> {
                Ok(2.0 * self.0.eval(zeta)? - Complex64::new(0.0, 3.0) * self.1.eval(zeta)?)
            }
            fn singularities_within(&self, r: f64) -> Vec<Complex64> {
                let mut v = self.0.singularities_within(r);
                v.extend(self.1.singularities_within(r));
                v
            }
            fn growth(&self, theta: f64) -> crate::minors::GrowthBound {
                let a = self.0.growth(theta);
                let b = self.1.growth(theta);
                crate::minors::GrowthBound {
                    alpha: 2.0 * a.alpha + 3.0 * b.alpha,
                    gamma: a.gamma.max(b.gamma),
                    poly_degree: a.poly_degree.max(b.poly_degree),
                }
            }
            fn id(&self) -> String {
                "combo".into()
            }
        }
        let combo = Combo(m1, m2);
        let c = laplace_ray(&combo, Complex64::new(0.0, 0.0), 0.0, z, &tol()).unwrap();
        let want = 2.0 * a.value - Complex64::new(0.0, 3.0) * b.value;
        assert!((c.value - want).norm() < 1e-11);
    }

    #[test]
    fn arc_sum_of_convergent_series() {
        // minor e^zeta sums z^-1(1-z^-1)^-1 to 1/(z-1): z=3 -> 1/2
        let m = build_minor("exp(c=1)").unwrap();
        let arc = SummationArc::new(-0.7, 0.7, 1.0).unwrap();
        let r = borel_sum_arc(m.as_ref(), Complex64::new(0.0, 0.0), &arc, Complex64::new(3.0, 0.0), &tol())
            .unwrap();
        assert!((r.value - Complex64::new(0.5, 0.0)).norm() < 1e-10);
        if let Some(c) = r.consistency {
            assert!(c < 1e-9);
        }
    }

    #[test]
    fn arc_sum_constant_minor_large_z() {
        let m = build_minor("poly(coeffs=1)").unwrap();
        let arc = SummationArc::new(-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4, 0.0)
            .unwrap();
        let r = borel_sum_arc(
            m.as_ref(),
            Complex64::new(0.0, 0.0),
            &arc,
            Complex64::new(10.0, 0.0),
            &tol(),
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.1, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn euler_continuation_beyond_right_halfplane() {
        // z = -1+2i is summable through directions near -pi/2; two admissible
        // directions agree and match the exponential-integral oracle.
        let arc = SummationArc::new(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 0.0)
            .unwrap();
        let z = Complex64::new(-1.0, 2.0);
        let r = borel_sum_arc(&EulerMinor, Complex64::new(0.0, 0.0), &arc, z, &tol()).unwrap();
        if let Some(c) = r.consistency {
            assert!(c < 1e-9, "direction disagreement {c}");
        }
        let want = oracles::euler_function(z).unwrap();
        assert!((r.value - want).norm() < 1e-9, "{} vs {want}", r.value);
    }

    #[test]
    fn arc_rejects_out_of_domain() {
        let arc = SummationArc::new(-0.3, 0.3, 0.0).unwrap();
        let r = borel_sum_arc(
            &EulerMinor,
            Complex64::new(0.0, 0.0),
            &arc,
            Complex64::new(-3.0, 0.1),
            &tol(),
        );
        assert!(matches!(r, Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn lateral_pair_entire_minor_no_jump() {
        let m = PolyMinor {
            coeffs: vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, -1.0)],
        };
        let (p, q) = lateral_pair(
            &m,
            Complex64::new(0.0, 0.0),
            std::f64::consts::PI,
            0.15,
            Complex64::new(-3.0, 0.0),
            &tol(),
        )
        .unwrap();
        assert!((p.value - q.value).norm() < 1e-12);
    }

    #[test]
    fn euler_stokes_jump_across_negative_axis() {
        // phi+ - phi- = 2 pi i e^z for Re z < 0
        let z = Complex64::new(-3.0, 0.0);
        let (p, q) = lateral_pair(
            &EulerMinor,
            Complex64::new(0.0, 0.0),
            std::f64::consts::PI,
            0.2,
            z,
            &tol(),
        )
        .unwrap();
        let want = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z.exp();
        assert!(
            ((p.value - q.value) - want).norm() < 1e-10,
            "jump {} want {want}",
            p.value - q.value
        );
    }

    #[test]
    fn detoured_path_residue_identity() {
        // Poincare minor: integrals along the two detours differ by
        // 2 pi i * residue * e^{-omega0 z}
        let s = Complex64::new(-(2.0f64.ln()), 0.0);
        let m = crate::minors::PoincareMinor { s };
        let theta = std::f64::consts::PI;
        let x0 = 2.0f64.ln();
        let z = Complex64::new(-3.0, 0.2);
        let quad = tol();
        let plus = LateralPath::new(theta, vec![(x0, CrossingSign::Plus)], 0.2).unwrap();
        let minus = LateralPath::new(theta, vec![(x0, CrossingSign::Minus)], 0.2).unwrap();
        let a = laplace_lateral_path(&m, &plus, Complex64::new(0.0, 0.0), z, &quad).unwrap();
        let b = laplace_lateral_path(&m, &minus, Complex64::new(0.0, 0.0), z, &quad).unwrap();
        // residue 1 at omega_0 = s; the "plus" contour passes on the same
        // side as the right-lateral ray, so plus - minus = 2 pi i e^{-s z}
        let want = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * (-s * z).exp();
        let diff = a.value - b.value;
        assert!((diff - want).norm() < 1e-9, "diff {diff} want {want}");
    }

    #[test]
    fn gevrey_envelope_for_euler() {
        let series = crate::classics::euler_series(24).to_complex_series();
        let f = |z: Complex64| oracles::euler_function(z);
        let zs = [Complex64::new(10.0, 0.0)];
        let rep = gevrey_residual(&series, &f, &zs, 20).unwrap();
        assert!(rep.holds, "scatter {}", rep.scatter);
        assert!(rep.m > 0.5 && rep.m < 2.0, "M = {}", rep.m);
    }

    #[test]
    fn gevrey_convergent_series_trivial_envelope() {
        // geometric series z^-1/(1-0.5 z^-1): value 1/(z-0.5)
        let mut s = FormalSeries::<Complex64>::zero(20);
        for n in 1..=20 {
            s.set_coeff(n, Complex64::new(0.5f64.powi(n as i32 - 1), 0.0));
        }
        let f = |z: Complex64| Ok(1.0 / (z - 0.5));
        let zs = [Complex64::new(4.0, 0.0)];
        let rep = gevrey_residual(&s, &f, &zs, 14).unwrap();
        assert!(rep.m < 1.0, "convergent series should fit M < 1, got {}", rep.m);
    }
}
