//! Evaluators for the analytic continuation of minors in the Borel plane.
//!
//! Every evaluator implements the [`Minor`] trait; closed-form kinds are
//! registered by a string id (`euler`, `stirling`, `poincare(s=..)`, ...) and
//! built at runtime through [`build_minor`], while [`Pade`] continues a
//! truncated [`BorelFunction`] rationally. Evaluation returns the principal
//! branch reached along the straight segment from 0.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::borel::BorelFunction;
use crate::error::{Error, Result};
use crate::quad::{polynomial_roots, solve_dense};

/// Exponential-type bound `|minor(xi e^{i theta})| <= alpha (1 + xi^deg) e^{gamma xi}`
/// along a ray, used to budget Laplace tail truncation.
#[derive(Clone, Copy, Debug)]
pub struct GrowthBound {
    pub alpha: f64,
    pub gamma: f64,
    pub poly_degree: u32,
}

pub trait Minor {
    /// Value of the principal branch at `zeta`.
    fn eval(&self, zeta: Complex64) -> Result<Complex64>;
    /// Singular points with modulus at most `radius`.
    fn singularities_within(&self, radius: f64) -> Vec<Complex64>;
    /// Growth bound along the ray of direction `theta`.
    fn growth(&self, theta: f64) -> GrowthBound;
    fn id(&self) -> String;
    /// Residues are only meaningful for meromorphic kinds; `None` elsewhere.
    fn residue_hint(&self, _omega: Complex64) -> Option<Complex64> {
        None
    }
}

const SINGULAR_EPS: f64 = 1e-9;

fn guard_singular(zeta: Complex64, points: &[Complex64]) -> Result<()> {
    for &p in points {
        if (zeta - p).norm() < SINGULAR_EPS * p.norm().max(1.0) {
            return Err(Error::SingularPointOnPath {
                point: format!("{p}"),
            });
        }
    }
    Ok(())
}

/// Distance from the ray `xi e^{i theta}, xi >= 0` to a point.
pub fn ray_distance(theta: f64, p: Complex64) -> f64 {
    let dir = Complex64::from_polar(1.0, theta);
    let proj = (p * dir.conj()).re;
    if proj <= 0.0 {
        p.norm()
    } else {
        (p - proj * dir).norm()
    }
}

/// e^z - 1 without cancellation for small |z|.
pub fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = z;
        let mut acc = z;
        for k in 2..25 {
            term = term * z / k as f64;
            acc += term;
        }
        acc
    } else {
        z.exp() - 1.0
    }
}

/// Log(1+z), principal branch, stable for small |z|.
pub fn ln1p_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        z * (Complex64::new(1.0, 0.0) - z / 2.0 + z * z / 3.0)
    } else {
        (Complex64::new(1.0, 0.0) + z).ln()
    }
}

// ---------------------------------------------------------------------------
// Closed-form kinds
// ---------------------------------------------------------------------------

/// 1/(1+zeta): the minor of the factorially divergent alternating series.
pub struct EulerMinor;

impl Minor for EulerMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &[Complex64::new(-1.0, 0.0)])?;
        Ok(1.0 / (1.0 + zeta))
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        if radius >= 1.0 {
            vec![Complex64::new(-1.0, 0.0)]
        } else {
            vec![]
        }
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let d = ray_distance(theta, Complex64::new(-1.0, 0.0)).min(1.0);
        GrowthBound {
            alpha: 1.0 / d.max(1e-6),
            gamma: 0.0,
            poly_degree: 0,
        }
    }
    fn id(&self) -> String {
        "euler".into()
    }
    fn residue_hint(&self, omega: Complex64) -> Option<Complex64> {
        ((omega - Complex64::new(-1.0, 0.0)).norm() < 1e-9).then_some(Complex64::new(1.0, 0.0))
    }
}

/// zeta^-2 (zeta/2 coth(zeta/2) - 1): even, meromorphic with simple poles on
/// 2 pi i Z*.
pub struct StirlingMinor;

impl Minor for StirlingMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &self.singularities_within(zeta.norm() + 1.0))?;
        if zeta.norm() < 0.4 {
            // Taylor coefficients B_{2k}/(2k)!, k = 1..7
            let z2 = zeta * zeta;
            let coeffs = [
                1.0 / 12.0,
                -1.0 / 720.0,
                1.0 / 30240.0,
                -1.0 / 1209600.0,
                1.0 / 47900160.0,
                -691.0 / 1307674368000.0,
                1.0 / 74724249600.0,
            ];
            let mut acc = Complex64::new(0.0, 0.0);
            for &ck in coeffs.iter().rev() {
                acc = acc * z2 + ck;
            }
            Ok(acc)
        } else {
            let half = zeta / 2.0;
            // coth(w) = (e^{2w}+1)/(e^{2w}-1)
            let e = expm1_c(zeta);
            let coth = (e + 2.0) / e;
            Ok((half * coth - 1.0) / (zeta * zeta))
        }
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        let mut v = vec![];
        let mut m = 1.0f64;
        while 2.0 * std::f64::consts::PI * m <= radius {
            v.push(Complex64::new(0.0, 2.0 * std::f64::consts::PI * m));
            v.push(Complex64::new(0.0, -2.0 * std::f64::consts::PI * m));
            m += 1.0;
        }
        v
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let d = nearest_lattice_ray_distance(theta, Complex64::new(0.0, 2.0 * std::f64::consts::PI));
        GrowthBound {
            alpha: 1.0 + 4.0 / d.min(1.0).max(1e-6),
            gamma: 0.0,
            poly_degree: 0,
        }
    }
    fn id(&self) -> String {
        "stirling".into()
    }
    fn residue_hint(&self, omega: Complex64) -> Option<Complex64> {
        // residue of the minor at 2 pi i m is 1/(2 pi i m)
        let m = omega.im / (2.0 * std::f64::consts::PI);
        if omega.re.abs() < 1e-9 && (m - m.round()).abs() < 1e-9 && m.round() != 0.0 {
            Some(1.0 / omega)
        } else {
            None
        }
    }
}

/// min over m in Z* of the distance from the ray to m*step.
fn nearest_lattice_ray_distance(theta: f64, step: Complex64) -> f64 {
    let mut d = f64::INFINITY;
    for m in 1..200 {
        let p = step * m as f64;
        d = d.min(ray_distance(theta, p));
        d = d.min(ray_distance(theta, -p));
        if p.norm() > 400.0 {
            break;
        }
    }
    d
}

/// 1/(1 - e^{s - zeta}) with |e^s| < 1: simple poles on s + 2 pi i Z, each of
/// residue 1.
pub struct PoincareMinor {
    pub s: Complex64,
}

impl PoincareMinor {
    pub fn lattice_point(&self, k: i64) -> Complex64 {
        self.s + Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)
    }
}

impl Minor for PoincareMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &self.singularities_within(zeta.norm() + 1.0))?;
        Ok(-1.0 / expm1_c(self.s - zeta))
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        let mut v = vec![];
        let kmax = (radius / (2.0 * std::f64::consts::PI) + 2.0) as i64;
        for k in -kmax..=kmax {
            let p = self.lattice_point(k);
            if p.norm() <= radius {
                v.push(p);
            }
        }
        v
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let w = self.s.exp().norm();
        let mut d = f64::INFINITY;
        for k in -60..=60 {
            d = d.min(ray_distance(theta, self.lattice_point(k)));
        }
        let alpha = (1.0 + 1.0 / d.min(1.0).max(1e-6)) * (2.0 / (1.0 - w)).max(2.0 / w);
        GrowthBound {
            alpha,
            gamma: theta.cos().max(0.0),
            poly_degree: 0,
        }
    }
    fn id(&self) -> String {
        format!("poincare(s={})", format_complex(self.s))
    }
    fn residue_hint(&self, omega: Complex64) -> Option<Complex64> {
        let k = (omega - self.s).im / (2.0 * std::f64::consts::PI);
        ((omega - self.s).re.abs() < 1e-9 && (k - k.round()).abs() < 1e-9)
            .then_some(Complex64::new(1.0, 0.0))
    }
}

/// zeta^{s-1} / (Gamma(s) (1 - e^{-zeta})) for integer s >= 2: regular at 0,
/// simple poles on 2 pi i Z*.
pub struct HurwitzMinor {
    pub s: u32,
    gamma_s: f64,
}

impl HurwitzMinor {
    pub fn new(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParam(
                "hurwitz minor needs integer s >= 2".into(),
            ));
        }
        let gamma_s = (1..s).map(|k| k as f64).product();
        Ok(HurwitzMinor { s, gamma_s })
    }
}

impl Minor for HurwitzMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &self.singularities_within(zeta.norm() + 1.0))?;
        // zeta^{s-1}/(1-e^{-zeta}) = zeta^{s-2} * (zeta / (1 - e^{-zeta}))
        let ratio = if zeta.norm() < 1e-12 {
            Complex64::new(1.0, 0.0)
        } else {
            zeta / -expm1_c(-zeta)
        };
        Ok(zeta.powu(self.s - 2) * ratio / self.gamma_s)
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        StirlingMinor.singularities_within(radius)
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let d = nearest_lattice_ray_distance(theta, Complex64::new(0.0, 2.0 * std::f64::consts::PI));
        GrowthBound {
            alpha: (1.0 + 2.0 / d.min(1.0).max(1e-6)) / self.gamma_s,
            gamma: 0.0,
            poly_degree: self.s - 1,
        }
    }
    fn id(&self) -> String {
        format!("hurwitz(s={})", self.s)
    }
    fn residue_hint(&self, omega: Complex64) -> Option<Complex64> {
        let m = omega.im / (2.0 * std::f64::consts::PI);
        if omega.re.abs() < 1e-9 && (m - m.round()).abs() < 1e-9 && m.round() != 0.0 {
            Some(omega.powu(self.s - 1) / self.gamma_s)
        } else {
            None
        }
    }
}

/// (1+zeta)^{alpha-1}, principal branch, cut along (-inf, -1].
pub struct IncGammaMinor {
    pub alpha: Complex64,
}

impl Minor for IncGammaMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &[Complex64::new(-1.0, 0.0)])?;
        Ok(((self.alpha - 1.0) * ln1p_c(zeta)).exp())
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        if radius >= 1.0 {
            vec![Complex64::new(-1.0, 0.0)]
        } else {
            vec![]
        }
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let a = self.alpha.re - 1.0;
        let d = ray_distance(theta, Complex64::new(-1.0, 0.0)).min(1.0).max(1e-6);
        let alpha = (std::f64::consts::PI * self.alpha.im.abs()).exp()
            * if a < 0.0 { d.powf(a) } else { 2f64.powf(a) };
        GrowthBound {
            alpha,
            gamma: 0.0,
            poly_degree: a.max(0.0).ceil() as u32,
        }
    }
    fn id(&self) -> String {
        format!("incgamma(alpha={})", format_complex(self.alpha))
    }
}

/// Sum of simple poles `sum r_k / (zeta - p_k)`.
pub struct RationalMinor {
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
}

impl Minor for RationalMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &self.poles)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, r) in self.poles.iter().zip(&self.residues) {
            acc += r / (zeta - p);
        }
        Ok(acc)
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        self.poles
            .iter()
            .copied()
            .filter(|p| p.norm() <= radius)
            .collect()
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let mut alpha = 0.0;
        for (p, r) in self.poles.iter().zip(&self.residues) {
            alpha += r.norm() / ray_distance(theta, *p).min(1.0).max(1e-6);
        }
        GrowthBound {
            alpha,
            gamma: 0.0,
            poly_degree: 0,
        }
    }
    fn id(&self) -> String {
        let mut s = String::from("rational(poles=");
        for (k, p) in self.poles.iter().enumerate() {
            if k > 0 {
                s.push(';');
            }
            let _ = write!(s, "{}", format_complex(*p));
        }
        s.push(')');
        s
    }
    fn residue_hint(&self, omega: Complex64) -> Option<Complex64> {
        self.poles
            .iter()
            .position(|p| (p - omega).norm() < 1e-9)
            .map(|k| self.residues[k])
    }
}

/// Entire polynomial minor.
pub struct PolyMinor {
    pub coeffs: Vec<Complex64>,
}

impl Minor for PolyMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * zeta + c;
        }
        Ok(acc)
    }
    fn singularities_within(&self, _radius: f64) -> Vec<Complex64> {
        vec![]
    }
    fn growth(&self, _theta: f64) -> GrowthBound {
        GrowthBound {
            alpha: self.coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1e-300),
            gamma: 0.0,
            poly_degree: self.coeffs.len().saturating_sub(1) as u32,
        }
    }
    fn id(&self) -> String {
        "poly".into()
    }
}

/// e^{c zeta}: the minor of the convergent geometric series `T_{-c} z^-1`.
pub struct ExpMinor {
    pub c: Complex64,
}

impl Minor for ExpMinor {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        Ok((self.c * zeta).exp())
    }
    fn singularities_within(&self, _radius: f64) -> Vec<Complex64> {
        vec![]
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        GrowthBound {
            alpha: 1.0,
            gamma: (self.c * Complex64::from_polar(1.0, theta)).re,
            poly_degree: 0,
        }
    }
    fn id(&self) -> String {
        format!("exp(c={})", format_complex(self.c))
    }
}

// ---------------------------------------------------------------------------
// Pade continuation of a truncated Borel transform
// ---------------------------------------------------------------------------

/// Rational continuation `p/q` of a truncated minor, with spurious-pole
/// screening against a list of known singular points.
pub struct Pade {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    /// Effective degrees after degeneracy reduction.
    pub degrees: (usize, usize),
    pub poles: Vec<Complex64>,
    /// Denominator roots not matching any known singular point; each carries
    /// an exclusion zone of radius [`Pade::EXCLUSION_RADIUS`].
    pub spurious: Vec<Complex64>,
    growth_alpha: f64,
}

impl Pade {
    pub const RESIDUAL_LIMIT: f64 = 1e-8;
    pub const EXCLUSION_RADIUS: f64 = 0.1;

    /// Builds the `[l/m]` approximant of the minor of `hat`. Degenerate
    /// Toeplitz systems (rational minors of lower true degree) reduce `m`
    /// until the defining system has a stable solution; the relative
    /// residual of the full defining system must stay below
    /// [`Self::RESIDUAL_LIMIT`].
    pub fn new(hat: &BorelFunction<Complex64>, l: usize, m: usize) -> Result<Self> {
        Self::with_known_singularities(hat, l, m, &[])
    }

    pub fn with_known_singularities(
        hat: &BorelFunction<Complex64>,
        l: usize,
        m: usize,
        known: &[Complex64],
    ) -> Result<Self> {
        let c = &hat.minor;
        if c.len() < l + m + 1 {
            return Err(Error::InvalidParam(format!(
                "pade [{l}/{m}] needs {} coefficients, got {}",
                l + m + 1,
                c.len()
            )));
        }
        let coeff = |i: i64| -> Complex64 {
            if i < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                c.get(i as usize).copied().unwrap_or_default()
            }
        };
        let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
        let mut accepted: Option<(Vec<Complex64>, usize)> = None;
        for m_eff in (0..=m).rev() {
            let q = if m_eff == 0 {
                vec![Complex64::new(1.0, 0.0)]
            } else {
                // rows k = 1..m_eff: sum_j q_j c_{l+k-j} = 0, q_0 = 1
                let mut a = vec![vec![Complex64::new(0.0, 0.0); m_eff]; m_eff];
                let mut b = vec![Complex64::new(0.0, 0.0); m_eff];
                for k in 1..=m_eff {
                    for j in 1..=m_eff {
                        a[k - 1][j - 1] = coeff(l as i64 + k as i64 - j as i64);
                    }
                    b[k - 1] = -coeff(l as i64 + k as i64);
                }
                if !pivots_ok(&a, 1e-10 * scale) {
                    continue;
                }
                match solve_dense(&mut a, &mut b) {
                    Ok(sol) => {
                        let mut q = vec![Complex64::new(1.0, 0.0)];
                        q.extend(sol);
                        q
                    }
                    Err(_) => continue,
                }
            };
            // residual of the full defining system (rows k = 1..m)
            let mut resid = 0.0f64;
            for k in 1..=m {
                let mut s = Complex64::new(0.0, 0.0);
                for (j, qj) in q.iter().enumerate() {
                    s += qj * coeff(l as i64 + k as i64 - j as i64);
                }
                resid = resid.max(s.norm());
            }
            if resid / scale <= Self::RESIDUAL_LIMIT {
                accepted = Some((q, m_eff));
                break;
            }
        }
        let (q, m_eff) = accepted.ok_or(Error::PadeRejected {
            residual: 1.0,
            limit: Self::RESIDUAL_LIMIT,
        })?;
        // numerator p_i = sum_j q_j c_{i-j}, i = 0..l
        let mut p = Vec::with_capacity(l + 1);
        for i in 0..=l {
            let mut s = Complex64::new(0.0, 0.0);
            for (j, qj) in q.iter().enumerate() {
                s += qj * coeff(i as i64 - j as i64);
            }
            p.push(s);
        }
        let roots = polynomial_roots(&q);
        let mut poles = vec![];
        let mut spurious = vec![];
        for r in roots {
            let genuine = known
                .iter()
                .any(|k| (r - k).norm() <= 0.1 * k.norm().max(1e-12));
            if genuine || known.is_empty() {
                poles.push(r);
            } else {
                spurious.push(r);
            }
        }
        let growth_alpha = scale * (l + 1) as f64;
        Ok(Pade {
            numerator: p,
            denominator: q,
            degrees: (l, m_eff),
            poles,
            spurious,
            growth_alpha,
        })
    }

    fn eval_ratio(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let horner = |cs: &[Complex64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cs.iter().rev() {
                acc = acc * zeta + c;
            }
            acc
        };
        (horner(&self.numerator), horner(&self.denominator))
    }
}

impl Minor for Pade {
    fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        guard_singular(zeta, &self.poles)?;
        for s in &self.spurious {
            if (zeta - s).norm() < Self::EXCLUSION_RADIUS {
                return Err(Error::SingularPointOnPath {
                    point: format!("spurious pade pole {s}"),
                });
            }
        }
        let (p, q) = self.eval_ratio(zeta);
        Ok(p / q)
    }
    fn singularities_within(&self, radius: f64) -> Vec<Complex64> {
        self.poles
            .iter()
            .chain(self.spurious.iter())
            .copied()
            .filter(|p| p.norm() <= radius)
            .collect()
    }
    fn growth(&self, theta: f64) -> GrowthBound {
        let mut d: f64 = 1.0;
        for p in self.poles.iter().chain(self.spurious.iter()) {
            d = d.min(ray_distance(theta, *p));
        }
        let (l, m) = self.degrees;
        GrowthBound {
            alpha: self.growth_alpha / d.max(1e-6),
            gamma: 0.0,
            poly_degree: l.saturating_sub(m) as u32,
        }
    }
    fn id(&self) -> String {
        format!("pade[{}/{}]", self.degrees.0, self.degrees.1)
    }
}

fn pivots_ok(a: &[Vec<Complex64>], threshold: f64) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].norm() > m[piv][col].norm() {
                piv = r;
            }
        }
        if m[piv][col].norm() < threshold {
            return false;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for ccol in col..n {
                let sub = factor * m[col][ccol];
                m[r][ccol] -= sub;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Lateral paths
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingSign {
    /// Circumvent to the right of the travel direction.
    Plus,
    /// Circumvent to the left.
    Minus,
}

/// A ray with semicircular detours around the on-ray singular points
/// `omega_1 < omega_2 < ...`, each crossed on the side given by its sign.
pub struct LateralPath {
    pub theta: f64,
    /// Positions |omega_j| of the on-ray singular points, increasing.
    pub crossings: Vec<(f64, CrossingSign)>,
    pub detour_radius: f64,
}

impl LateralPath {
    pub fn new(theta: f64, crossings: Vec<(f64, CrossingSign)>, detour_radius: f64) -> Result<Self> {
        let mut min_gap = f64::INFINITY;
        for w in crossings.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParam(
                    "crossing positions must increase along the ray".into(),
                ));
            }
            min_gap = min_gap.min(w[1].0 - w[0].0);
        }
        if let Some(&(first, _)) = crossings.first() {
            min_gap = min_gap.min(first);
        }
        if detour_radius <= 0.0 || detour_radius >= min_gap / 2.0 {
            return Err(Error::InvalidParam(format!(
                "detour radius {detour_radius} must lie in (0, half the minimal gap)"
            )));
        }
        Ok(LateralPath {
            theta,
            crossings,
            detour_radius,
        })
    }

    /// Point of the path at ray-arclength parameter `xi`: the straight ray
    /// except on detour intervals, where the semicircle on the requested side
    /// is traversed.
    pub fn point(&self, xi: f64) -> Complex64 {
        let dir = Complex64::from_polar(1.0, self.theta);
        let r = self.detour_radius;
        for &(x, sign) in &self.crossings {
            if xi > x - r && xi < x + r {
                let t = (xi - (x - r)) / (2.0 * r);
                let phi = match sign {
                    // entering angle theta+pi, leaving angle theta (mod 2 pi)
                    CrossingSign::Plus => self.theta + std::f64::consts::PI * (1.0 + t),
                    CrossingSign::Minus => self.theta + std::f64::consts::PI * (1.0 - t),
                };
                return x * dir + r * Complex64::from_polar(1.0, phi);
            }
        }
        xi * dir
    }
}

/// Evaluates the branch of a minor continued along a lateral path at the
/// ray-arclength position `xi`. The closed-form kinds in this catalog are
/// single-valued away from their poles, so the branch is the principal one
/// evaluated at the path point; multivalued Pade-represented minors are only
/// trustworthy before the first crossed singularity.
pub fn eval_lateral(minor: &dyn Minor, path: &LateralPath, xi: f64) -> Result<Complex64> {
    minor.eval(path.point(xi))
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

pub struct MinorKindEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub build: fn(&Params) -> Result<Box<dyn Minor>>,
}

/// Available closed-form minor kinds, selectable by id from config or CLI.
pub static MINOR_KINDS: &[MinorKindEntry] = &[
    MinorKindEntry {
        id: "euler",
        summary: "1/(1+zeta)",
        build: |_s| Ok(Box::new(EulerMinor)),
    },
    MinorKindEntry {
        id: "stirling",
        summary: "zeta^-2 (zeta/2 coth(zeta/2) - 1)",
        build: |_s| Ok(Box::new(StirlingMinor)),
    },
    MinorKindEntry {
        id: "poincare",
        summary: "1/(1 - e^{s-zeta}), parameter s (or w = e^s, |w|<1)",
        build: |p| {
            let s = if let Some(w) = p.get_complex_opt("w")? {
                if w.norm() >= 1.0 || w.norm() == 0.0 {
                    return Err(Error::InvalidParam("poincare needs 0 < |w| < 1".into()));
                }
                w.ln()
            } else {
                let s = p.get_complex("s")?;
                if s.re >= 0.0 {
                    return Err(Error::InvalidParam("poincare needs Re s < 0".into()));
                }
                s
            };
            Ok(Box::new(PoincareMinor { s }))
        },
    },
    MinorKindEntry {
        id: "hurwitz",
        summary: "zeta^{s-1}/(Gamma(s)(1-e^{-zeta})), integer s >= 2",
        build: |p| {
            let s = p.get_f64("s")?;
            if s.fract() != 0.0 || s < 2.0 {
                return Err(Error::InvalidParam("hurwitz needs integer s >= 2".into()));
            }
            Ok(Box::new(HurwitzMinor::new(s as u32)?))
        },
    },
    MinorKindEntry {
        id: "incgamma",
        summary: "(1+zeta)^{alpha-1}, principal branch",
        build: |p| {
            Ok(Box::new(IncGammaMinor {
                alpha: p.get_complex("alpha")?,
            }))
        },
    },
    MinorKindEntry {
        id: "rational",
        summary: "sum of simple poles; poles=p1;p2;..., residues default to 1",
        build: |p| {
            let poles = p.get_complex_list("poles")?;
            let residues = match p.get_complex_list("residues") {
                Ok(r) => r,
                Err(_) => vec![Complex64::new(1.0, 0.0); poles.len()],
            };
            if residues.len() != poles.len() {
                return Err(Error::InvalidParam(
                    "rational: poles and residues must have equal length".into(),
                ));
            }
            Ok(Box::new(RationalMinor { poles, residues }))
        },
    },
    MinorKindEntry {
        id: "exp",
        summary: "e^{c zeta}",
        build: |p| {
            Ok(Box::new(ExpMinor {
                c: p.get_complex("c")?,
            }))
        },
    },
    MinorKindEntry {
        id: "poly",
        summary: "polynomial minor; coeffs=c0;c1;...",
        build: |p| {
            Ok(Box::new(PolyMinor {
                coeffs: p.get_complex_list("coeffs")?,
            }))
        },
    },
];

/// Builds a minor evaluator from a spec string such as `euler` or
/// `poincare(s=-0.693)`.
pub fn build_minor(spec: &str) -> Result<Box<dyn Minor>> {
    let (name, params) = Params::parse(spec)?;
    for entry in MINOR_KINDS {
        if entry.id == name {
            return (entry.build)(&params);
        }
    }
    Err(Error::UnknownId(format!("minor kind {name}")))
}

/// key=value parameter bag parsed from `name(k=v,k=v)`.
pub struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(spec: &str) -> Result<(String, Params)> {
        let spec = spec.trim();
        let (name, rest) = match spec.find('(') {
            None => (spec.to_string(), None),
            Some(i) => {
                if !spec.ends_with(')') {
                    return Err(Error::InvalidParam(format!("unbalanced parens in {spec}")));
                }
                (
                    spec[..i].trim().to_string(),
                    Some(&spec[i + 1..spec.len() - 1]),
                )
            }
        };
        let mut map = BTreeMap::new();
        if let Some(body) = rest {
            for kv in body.split(',') {
                let kv = kv.trim();
                if kv.is_empty() {
                    continue;
                }
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got {kv}")))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok((name, Params { map }))
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        self.map
            .get(key)
            .ok_or_else(|| Error::InvalidParam(format!("missing parameter {key}")))?
            .parse()
            .map_err(|_| Error::InvalidParam(format!("parameter {key} is not a number")))
    }

    pub fn get_complex(&self, key: &str) -> Result<Complex64> {
        let s = self
            .map
            .get(key)
            .ok_or_else(|| Error::InvalidParam(format!("missing parameter {key}")))?;
        parse_complex_str(s)
    }

    pub fn get_complex_opt(&self, key: &str) -> Result<Option<Complex64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(s) => parse_complex_str(s).map(Some),
        }
    }

    pub fn get_complex_list(&self, key: &str) -> Result<Vec<Complex64>> {
        let s = self
            .map
            .get(key)
            .ok_or_else(|| Error::InvalidParam(format!("missing parameter {key}")))?;
        s.split(';').map(|p| parse_complex_str(p.trim())).collect()
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`.
pub fn parse_complex_str(s: &str) -> Result<Complex64> {
    let s = s.trim().replace(' ', "");
    let bad = || Error::InvalidParam(format!("cannot parse complex number {s}"));
    if let Some(im) = s.strip_suffix('i') {
        // find the split between real and imaginary parts
        let bytes = im.as_bytes();
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E'
            {
                let re: f64 = im[..k].parse().map_err(|_| bad())?;
                let imag_str = &im[k..];
                let imag: f64 = if imag_str == "+" {
                    1.0
                } else if imag_str == "-" {
                    -1.0
                } else {
                    imag_str.parse().map_err(|_| bad())?
                };
                return Ok(Complex64::new(re, imag));
            }
        }
        let imag: f64 = if im.is_empty() {
            1.0
        } else if im == "-" {
            -1.0
        } else {
            im.parse().map_err(|_| bad())?
        };
        return Ok(Complex64::new(0.0, imag));
    }
    Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im > 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::borel;
    use crate::exact::Exact;
    use crate::formal::FormalSeries;

    #[test]
    fn euler_closed_form_value() {
        let m = EulerMinor;
        let v = m.eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(m.eval(Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn stirling_value_at_origin_limit() {
        let m = StirlingMinor;
        let v = m.eval(Complex64::new(1e-8, 0.0)).unwrap();
        assert!((v.re - 1.0 / 12.0).abs() < 1e-12);
        // series and closed form agree near the switch radius
        let a = m.eval(Complex64::new(0.399, 0.01)).unwrap();
        let b = {
            let z = Complex64::new(0.399, 0.01);
            let e = expm1_c(z);
            ((z / 2.0) * (e + 2.0) / e - 1.0) / (z * z)
        };
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn poincare_poles_and_residues() {
        let m = PoincareMinor {
            s: Complex64::new(-2.0f64.ln(), 0.0),
        };
        // value at 0 is 1/(1-w) = 2
        let v = m.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert_eq!(
            m.residue_hint(m.lattice_point(3)),
            Some(Complex64::new(1.0, 0.0))
        );
    }

    #[test]
    fn pade_recovers_rational_minor() {
        // Euler truncated minor of order 20, [10/10]: exact rational recovery
        let mut s = FormalSeries::<Exact>::zero(21);
        let mut f = Exact::int(1);
        for n in 0..21 {
            s.set_coeff(n + 1, if n % 2 == 0 { f.clone() } else { -f.clone() });
            f = f * Exact::int(n as i64 + 1);
        }
        let hat = borel(&s).to_complex();
        let pade = Pade::new(&hat, 10, 10).unwrap();
        let v = pade.eval(Complex64::new(5.0, 0.0)).unwrap();
        assert!(
            (v - Complex64::new(1.0 / 6.0, 0.0)).norm() < 1e-10,
            "pade at 5 gave {v}"
        );
        // pole found near -1, no spurious doublets after degeneracy reduction
        assert!(pade
            .poles
            .iter()
            .any(|p| (p - Complex64::new(-1.0, 0.0)).norm() < 1e-8));
        // matches the closed form off the pole
        for &x in &[0.3, 2.0, -0.5, 10.0] {
            let z = Complex64::new(x, 0.7);
            let a = pade.eval(z).unwrap();
            let b = EulerMinor.eval(z).unwrap();
            assert!((a - b).norm() < 1e-12, "mismatch at {z}: {a} vs {b}");
        }
    }

    #[test]
    fn pade_needs_enough_coefficients() {
        let hat = BorelFunction::new(Complex64::new(0.0, 0.0), vec![Complex64::new(1.0, 0.0); 5]);
        assert!(Pade::new(&hat, 10, 10).is_err());
    }

    #[test]
    fn lateral_path_points_and_invariant() {
        let path = LateralPath::new(
            0.0,
            vec![(1.0, CrossingSign::Plus), (2.0, CrossingSign::Minus)],
            0.2,
        )
        .unwrap();
        // off detours: on the ray
        assert!((path.point(0.5) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        // mid-detour: right of travel for Plus (negative imaginary side)
        let p = path.point(1.0);
        assert!((p - Complex64::new(1.0, -0.2)).norm() < 1e-12, "{p}");
        let q = path.point(2.0);
        assert!((q - Complex64::new(2.0, 0.2)).norm() < 1e-12, "{q}");
        // radius must be below half the minimal gap
        assert!(LateralPath::new(0.0, vec![(1.0, CrossingSign::Plus), (1.5, CrossingSign::Plus)], 0.3).is_err());
    }

    #[test]
    fn lateral_equals_eval_for_entire_minors() {
        let m = PolyMinor {
            coeffs: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(-2.0, 1.0),
                Complex64::new(0.5, 0.0),
            ],
        };
        let path = LateralPath::new(0.3, vec![(1.5, CrossingSign::Minus)], 0.1).unwrap();
        for &xi in &[0.2, 1.5, 3.0] {
            let a = eval_lateral(&m, &path, xi).unwrap();
            let b = m.eval(path.point(xi)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn meromorphic_minors_are_single_valued_past_detours() {
        // Stirling along ray pi/2 with a detour at 2 pi i: both signs give the
        // same value beyond the crossing
        let m = StirlingMinor;
        let x = 2.0 * std::f64::consts::PI;
        let plus = LateralPath::new(std::f64::consts::FRAC_PI_2, vec![(x, CrossingSign::Plus)], 0.5).unwrap();
        let minus = LateralPath::new(std::f64::consts::FRAC_PI_2, vec![(x, CrossingSign::Minus)], 0.5).unwrap();
        for &xi in &[x + 1.0, x + 2.5] {
            let a = eval_lateral(&m, &plus, xi).unwrap();
            let b = eval_lateral(&m, &minus, xi).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn registry_ids_parse() {
        assert!(build_minor("euler").is_ok());
        assert!(build_minor("stirling").is_ok());
        assert!(build_minor("poincare(w=0.5)").is_ok());
        assert!(build_minor("poincare(s=-0.6931471805599453)").is_ok());
        assert!(build_minor("hurwitz(s=2)").is_ok());
        assert!(build_minor("hurwitz(s=1)").is_err());
        assert!(build_minor("incgamma(alpha=0.5)").is_ok());
        assert!(build_minor("rational(poles=-1;-2+1i)").is_ok());
        assert!(build_minor("nosuch").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex_str("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex_str("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex_str("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex_str("-1-0.5i").unwrap(), Complex64::new(-1.0, -0.5));
        assert_eq!(parse_complex_str("3-i").unwrap(), Complex64::new(3.0, -1.0));
        assert_eq!(parse_complex_str("1e-3").unwrap(), Complex64::new(1e-3, 0.0));
    }
}
