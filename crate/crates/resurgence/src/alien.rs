//! Alien operators on simple singularities: residue-based evaluation for
//! meromorphic minors, the exact conversion combinatorics between the
//! one-sided lateral operators and the averaged derivations, and numerical
//! measurement of Stokes components from lateral sums.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::laplace::{lateral_pair, QuadratureConfig};
use crate::minors::Minor;
use crate::quad::{circle_contour_mean, weighted_lsq};

// ---------------------------------------------------------------------------
// Singular lattice
// ---------------------------------------------------------------------------

/// Ordered singular points on a ray, `omega_1 < omega_2 < ...` in the ray
/// order.
#[derive(Clone, Debug)]
pub struct SingularLattice {
    pub ray_theta: f64,
    pub points: Vec<Complex64>,
    pub closed_under_addition: bool,
}

impl SingularLattice {
    pub fn new(
        ray_theta: f64,
        mut points: Vec<Complex64>,
        closed_under_addition: bool,
    ) -> Result<Self> {
        points.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        for w in points.windows(2) {
            if (w[1].norm() - w[0].norm()) < 1e-12 {
                return Err(Error::InvalidParam(
                    "lattice points must be strictly ordered along the ray".into(),
                ));
            }
        }
        let dir = Complex64::from_polar(1.0, ray_theta);
        for p in &points {
            if (p - p.norm() * dir).norm() > 1e-9 * p.norm().max(1.0) {
                return Err(Error::InvalidParam(format!(
                    "lattice point {p} is not on the ray of direction {ray_theta}"
                )));
            }
        }
        Ok(SingularLattice {
            ray_theta,
            points,
            closed_under_addition,
        })
    }

    /// Equally spaced lattice `omega_1 * {1..m_max}`, closed under addition.
    pub fn arithmetic(omega1: Complex64, m_max: usize) -> Self {
        SingularLattice {
            ray_theta: omega1.arg(),
            points: (1..=m_max).map(|j| omega1 * j as f64).collect(),
            closed_under_addition: true,
        }
    }
}

// ---------------------------------------------------------------------------
// Free graded operator algebra
// ---------------------------------------------------------------------------

/// Truncated series in the free algebra over homogeneous operator symbols:
/// words are step sequences `(j_1, ..., j_s)` of lattice indices (the step
/// `j_1` acts first), the grade of a word is the sum of its entries, and the
/// product is composition.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeGradedOperatorSeries {
    pub m_max: usize,
    /// Coefficients by word; the empty word is the identity component.
    pub terms: BTreeMap<Vec<usize>, BigRational>,
}

fn word_weight(w: &[usize]) -> usize {
    w.iter().sum()
}

impl FreeGradedOperatorSeries {
    pub fn zero(m_max: usize) -> Self {
        FreeGradedOperatorSeries {
            m_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(m_max: usize) -> Self {
        let mut s = Self::zero(m_max);
        s.terms.insert(vec![], BigRational::one());
        s
    }

    /// `sum_j (generator j)`, the directional sum of homogeneous components.
    pub fn generator_sum(m_max: usize) -> Self {
        let mut s = Self::zero(m_max);
        for j in 1..=m_max {
            s.terms.insert(vec![j], BigRational::one());
        }
        s
    }

    pub fn coeff(&self, word: &[usize]) -> BigRational {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn insert(&mut self, word: Vec<usize>, c: BigRational) {
        if word_weight(&word) > self.m_max || c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(word.clone())
            .or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.m_max);
        for (w, v) in &self.terms {
            out.insert(w.clone(), v * c);
        }
        out
    }

    /// Composition product `self o rhs`: the word of `rhs` is executed
    /// first, so words concatenate as `rhs ++ self`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.m_max.min(rhs.m_max));
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                if word_weight(wa) + word_weight(wb) > out.m_max {
                    continue;
                }
                let mut w = wb.clone();
                w.extend_from_slice(wa);
                out.insert(w, ca * cb);
            }
        }
        out
    }

    /// The homogeneous part of a given grade.
    pub fn component(&self, grade: usize) -> BTreeMap<Vec<usize>, BigRational> {
        self.terms
            .iter()
            .filter(|(w, _)| word_weight(w) == grade)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    fn positive_part(&self) -> Self {
        let mut out = Self::zero(self.m_max);
        for (w, c) in &self.terms {
            if !w.is_empty() {
                out.insert(w.clone(), c.clone());
            }
        }
        out
    }
}

/// `exp(D) = Id + sum D^k / k!` for a series without identity component.
pub fn free_exp(d: &FreeGradedOperatorSeries) -> Result<FreeGradedOperatorSeries> {
    if !d.coeff(&[]).is_zero() {
        return Err(Error::InvalidParam(
            "free exp needs a series without identity component".into(),
        ));
    }
    let mut out = FreeGradedOperatorSeries::identity(d.m_max);
    let mut pow = FreeGradedOperatorSeries::identity(d.m_max);
    let mut fact = BigRational::one();
    for k in 1..=d.m_max {
        pow = pow.compose(d);
        fact *= BigRational::from_integer(k.into());
        out = out.add(&pow.scale(&fact.recip()));
        if pow.terms.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// `log(Id + P) = sum (-1)^{s-1} P^s / s` for a series whose identity
/// component is 1.
pub fn free_log(t: &FreeGradedOperatorSeries) -> Result<FreeGradedOperatorSeries> {
    if t.coeff(&[]) != BigRational::one() {
        return Err(Error::InvalidParam(
            "free log needs identity component equal to 1".into(),
        ));
    }
    let p = t.positive_part();
    let mut out = FreeGradedOperatorSeries::zero(t.m_max);
    let mut pow = FreeGradedOperatorSeries::identity(t.m_max);
    for s in 1..=t.m_max {
        pow = pow.compose(&p);
        if pow.terms.is_empty() {
            break;
        }
        let sign = if s % 2 == 1 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        out = out.add(&pow.scale(&(sign / BigRational::from_integer(s.into()))));
    }
    Ok(out)
}

/// Lateral-average weights `p(eps)! q(eps)! / r!` over the sign tuples of
/// length `r - 1`; they sum to 1.
pub fn median_weights(r: usize) -> Vec<(Vec<crate::minors::CrossingSign>, BigRational)> {
    use crate::minors::CrossingSign::{Minus, Plus};
    assert!(r >= 1);
    let fact = |n: usize| -> BigRational {
        BigRational::from_integer((1..=n.max(1)).product::<usize>().into())
    };
    let mut out = vec![];
    for mask in 0..(1u32 << (r - 1)) {
        let signs: Vec<_> = (0..r - 1)
            .map(|k| if mask >> k & 1 == 0 { Plus } else { Minus })
            .collect();
        let p = signs.iter().filter(|s| **s == Plus).count();
        let q = r - 1 - p;
        out.push((signs, fact(p) * fact(q) / fact(r)));
    }
    out
}

// ---------------------------------------------------------------------------
// Residue-based alien derivative for meromorphic minors
// ---------------------------------------------------------------------------

/// Constant term of the alien derivative at a simple pole of a meromorphic
/// minor: `2 pi i Res_omega(minor)`. The residue is taken on a circular
/// contour of radius a quarter of the minimal pole gap, 64 trapezoid nodes;
/// a non-vanishing second moment flags a non-simple pole.
pub fn alien_residue(minor: &dyn Minor, omega: Complex64) -> Result<Complex64> {
    let others = minor.singularities_within(omega.norm() + 10.0);
    let mut gap = f64::INFINITY;
    let mut found = false;
    for p in &others {
        let d = (p - omega).norm();
        if d < 1e-9 {
            found = true;
        } else {
            gap = gap.min(d);
        }
    }
    if !found {
        return Err(Error::InvalidParam(format!(
            "{omega} is not a listed singular point of {}",
            minor.id()
        )));
    }
    let radius = (gap / 4.0).min(omega.norm() / 4.0).min(1.0);
    let f = |z: Complex64| minor.eval(z).unwrap_or_default();
    let res = circle_contour_mean(&f, omega, radius, 64);
    let second = circle_contour_mean(&|z| (z - omega) * f(z), omega, radius, 64);
    let scale = res.norm().max(1e-12);
    if second.norm() > 1e-6 * scale * radius {
        return Err(Error::NonSimplePole {
            point: format!("{omega}"),
            moment: second.norm(),
        });
    }
    Ok(Complex64::new(0.0, 2.0 * std::f64::consts::PI) * res)
}

// ---------------------------------------------------------------------------
// Bridge constants vs one-sided Stokes constants
// ---------------------------------------------------------------------------

/// Scalar ring for the Stokes conversion formulas: complex floats for
/// measured data, polynomials in the lattice step for exact identities.
pub trait StokesRing: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn div_int(&self, k: i64) -> Self;
}

impl StokesRing for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }
    fn div_int(&self, k: i64) -> Self {
        self / k as f64
    }
}

/// Polynomials in the deferred transcendental lattice step (`2 pi i` on the
/// standard rays) with exact Gaussian-rational coefficients, so that the
/// conversion combinatorics stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPoly {
    pub coeffs: Vec<Exact>,
}

impl TauPoly {
    pub fn constant(c: Exact) -> Self {
        TauPoly { coeffs: vec![c] }
    }
    /// The lattice step itself.
    pub fn tau() -> Self {
        TauPoly {
            coeffs: vec![Exact::int(0), Exact::int(1)],
        }
    }
    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && num::Zero::is_zero(self.coeffs.last().unwrap()) {
            self.coeffs.pop();
        }
        self
    }
    /// Numeric value with the lattice step substituted.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * tau + c.to_complex();
        }
        acc
    }
}

impl StokesRing for TauPoly {
    fn zero() -> Self {
        TauPoly::constant(Exact::int(0))
    }
    fn one() -> Self {
        TauPoly::constant(Exact::int(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| num::Zero::is_zero(c))
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Exact::int(0); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + c.clone();
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + c.clone();
        }
        TauPoly { coeffs: out }.trim()
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![Exact::int(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TauPoly { coeffs: out }.trim()
    }
    fn neg(&self) -> Self {
        TauPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
    fn mul_int(&self, k: i64) -> Self {
        TauPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * Exact::int(k))
                .collect(),
        }
        .trim()
    }
    fn div_int(&self, k: i64) -> Self {
        TauPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() / Exact::int(k))
                .collect(),
        }
    }
}

/// Ordered tuples of positive integers summing to `total`.
fn compositions(total: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(acc.clone());
            return;
        }
        for first in 1..=total {
            acc.push(first);
            rec(total - first, acc, out);
            acc.pop();
        }
    }
    let mut out = vec![];
    rec(total, &mut vec![], &mut out);
    out
}

/// `j_1 (j_1+j_2) ... (j_1+...+j_{s-1})` as an integer; the transcendental
/// factor `step^{s-1}` is applied separately.
fn gamma_product_int(parts: &[usize]) -> i64 {
    let mut acc = 1i64;
    let mut partial = 0usize;
    for &j in &parts[..parts.len() - 1] {
        partial += j;
        acc *= partial as i64;
    }
    acc
}

fn step_power<S: StokesRing>(step: &S, k: usize) -> S {
    let mut out = S::one();
    for _ in 0..k {
        out = out.mul(step);
    }
    out
}

/// One-sided Stokes constants from bridge constants on the equally spaced
/// lattice `step * {1..m_max}`:
/// `S+_m = -sum_s (1/s!) sum_{j_1+...+j_s=m} Gamma C_{j_1}...C_{j_s}`,
/// `S-_m = sum_s ((-1)^{s-1}/s!) sum ...`, with
/// `Gamma = step^{s-1} j_1 (j_1+j_2) ...`.
pub fn stokes_exp<S: StokesRing>(
    c: &BTreeMap<usize, S>,
    step: &S,
    m_max: usize,
) -> (BTreeMap<usize, S>, BTreeMap<usize, S>) {
    let mut splus = BTreeMap::new();
    let mut sminus = BTreeMap::new();
    for m in 1..=m_max {
        let mut plus = S::zero();
        let mut minus = S::zero();
        for parts in compositions(m) {
            let s = parts.len();
            let mut term = step_power(step, s - 1);
            let mut all = true;
            for &j in &parts {
                match c.get(&j) {
                    Some(cj) if !cj.is_zero() => term = term.mul(cj),
                    _ => {
                        all = false;
                        break;
                    }
                }
            }
            if !all {
                continue;
            }
            term = term.mul_int(gamma_product_int(&parts));
            let fact: i64 = (1..=s as i64).product();
            term = term.div_int(fact);
            plus = plus.add(&term.neg());
            minus = minus.add(&if s % 2 == 1 { term.clone() } else { term.neg() });
        }
        if !plus.is_zero() {
            splus.insert(m, plus);
        }
        if !minus.is_zero() {
            sminus.insert(m, minus);
        }
    }
    (splus, sminus)
}

/// Recovers bridge constants from one-sided Stokes constants by triangular
/// inversion, grade by grade.
pub fn stokes_log<S: StokesRing>(
    s_map: &BTreeMap<usize, S>,
    plus_side: bool,
    step: &S,
    m_max: usize,
) -> BTreeMap<usize, S> {
    let mut c: BTreeMap<usize, S> = BTreeMap::new();
    for m in 1..=m_max {
        let mut acc = S::zero();
        for parts in compositions(m) {
            let s = parts.len();
            if s == 1 {
                continue;
            }
            let mut term = step_power(step, s - 1);
            let mut all = true;
            for &j in &parts {
                match c.get(&j) {
                    Some(cj) if !cj.is_zero() => term = term.mul(cj),
                    _ => {
                        all = false;
                        break;
                    }
                }
            }
            if !all {
                continue;
            }
            term = term.mul_int(gamma_product_int(&parts));
            let fact: i64 = (1..=s as i64).product();
            term = term.div_int(fact);
            if plus_side {
                acc = acc.add(&term);
            } else {
                acc = acc.add(&if s % 2 == 1 { term.clone() } else { term.neg() });
            }
        }
        let sm = s_map.get(&m).cloned().unwrap_or_else(S::zero);
        // plus side: S+_m = -(C_m + acc) ; minus side: S-_m = C_m + acc
        let cm = if plus_side {
            sm.neg().add(&acc.neg())
        } else {
            sm.add(&acc.neg())
        };
        if !cm.is_zero() {
            c.insert(m, cm);
        }
    }
    c
}

// ---------------------------------------------------------------------------
// Numerical Stokes measurement from lateral sums
// ---------------------------------------------------------------------------

/// Measured Stokes components on a singular ray.
#[derive(Clone, Debug)]
pub struct StokesMeasurement {
    pub ray_theta: f64,
    /// (omega_j, estimate, accepted) per component; a component is accepted
    /// only when its contribution clears ten times the fit residual.
    pub components: Vec<(Complex64, Complex64, bool)>,
    pub fit_residual: f64,
    pub condition: f64,
}

/// Default lateral offset for measurement rays.
pub const LATERAL_EPS: f64 = 0.25;

/// Builds a measurement grid in the overlap of the two lateral half-planes:
/// `Re(z e^{i theta})` spans a little over two decades of the leading
/// exponential `e^{-|omega_1| c}` starting at `c_lo`, with two transverse
/// offsets per level.
pub fn measurement_grid(
    ray_theta: f64,
    omega1_norm: f64,
    c_lo: f64,
    n_levels: usize,
) -> Vec<Complex64> {
    let span = 2.2 * std::f64::consts::LN_10 / omega1_norm;
    let mut out = vec![];
    for k in 0..n_levels {
        let c = c_lo + span * k as f64 / (n_levels.max(2) - 1) as f64;
        for &t in &[-0.35f64, 0.35f64] {
            // z with Re(z e^{i theta}) = c and transverse coordinate t
            let z = Complex64::from_polar(1.0, -ray_theta) * Complex64::new(c, t);
            out.push(z);
        }
    }
    out
}

/// Fits the lateral-sum difference `L+ - L-` against the exponential basis
/// `{e^{-omega_j z}}` of the ray's singular lattice, with log-magnitude
/// balanced weights.
pub fn measure_stokes(
    minor: &dyn Minor,
    a: Complex64,
    ray_theta: f64,
    m_max: usize,
    z_grid: &[Complex64],
    quad: &QuadratureConfig,
) -> Result<StokesMeasurement> {
    let mut lattice: Vec<Complex64> = minor
        .singularities_within(1e4)
        .into_iter()
        .filter(|p| crate::minors::ray_distance(ray_theta, *p) < 1e-9 * p.norm().max(1.0))
        .collect();
    lattice.sort_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap());
    lattice.truncate(m_max);
    if lattice.is_empty() {
        return Ok(StokesMeasurement {
            ray_theta,
            components: vec![],
            fit_residual: 0.0,
            condition: 1.0,
        });
    }
    if z_grid.len() < lattice.len() + 1 {
        return Err(Error::InvalidParam(
            "stokes measurement needs more grid points than components".into(),
        ));
    }
    let mut rows = vec![];
    let mut rhs = vec![];
    let mut weights = vec![];
    for &z in z_grid {
        let (p, m) = lateral_pair(minor, a, ray_theta, LATERAL_EPS, z, quad)?;
        let d = p.value - m.value;
        let lead = (-lattice[0] * z).exp().norm().max(1e-280);
        rows.push(lattice.iter().map(|&w| (-w * z).exp()).collect::<Vec<_>>());
        rhs.push(d);
        weights.push(1.0 / (lead * lead));
    }
    let fit = weighted_lsq(&rows, &rhs, &weights)?;
    if fit.condition > 1e12 {
        return Err(Error::IllConditionedFit {
            cond: fit.condition,
        });
    }
    let mut components = vec![];
    for (j, &w) in lattice.iter().enumerate() {
        let mut rms = 0.0;
        let mut wsum = 0.0;
        for (k, &z) in z_grid.iter().enumerate() {
            rms += weights[k] * ((-w * z).exp() * fit.coeffs[j]).norm_sqr();
            wsum += weights[k];
        }
        let rms = (rms / wsum).sqrt();
        components.push((w, fit.coeffs[j], rms > 10.0 * fit.residual_rms));
    }
    Ok(StokesMeasurement {
        ray_theta,
        components,
        fit_residual: fit.residual_rms,
        condition: fit.condition,
    })
}

// ---------------------------------------------------------------------------
// Stokes data triple
// ---------------------------------------------------------------------------

/// Numeric Stokes data on a ray: bridge constants alongside both one-sided
/// families, mutually consistent under the exp/log conversion.
#[derive(Clone, Debug)]
pub struct StokesData {
    pub ray_theta: f64,
    pub m_max: usize,
    /// Lattice step `omega_1`.
    pub step: Complex64,
    pub c: BTreeMap<usize, Complex64>,
    pub splus: BTreeMap<usize, Complex64>,
    pub sminus: BTreeMap<usize, Complex64>,
}

impl StokesData {
    pub fn from_bridge(
        ray_theta: f64,
        step: Complex64,
        m_max: usize,
        c: BTreeMap<usize, Complex64>,
    ) -> Self {
        let (splus, sminus) = stokes_exp(&c, &step, m_max);
        StokesData {
            ray_theta,
            m_max,
            step,
            c,
            splus,
            sminus,
        }
    }

    pub fn from_splus(
        ray_theta: f64,
        step: Complex64,
        m_max: usize,
        splus: BTreeMap<usize, Complex64>,
    ) -> Self {
        let c = stokes_log(&splus, true, &step, m_max);
        let (_, sminus) = stokes_exp(&c, &step, m_max);
        StokesData {
            ray_theta,
            m_max,
            step,
            c,
            splus,
            sminus,
        }
    }

    pub fn from_sminus(
        ray_theta: f64,
        step: Complex64,
        m_max: usize,
        sminus: BTreeMap<usize, Complex64>,
    ) -> Self {
        let c = stokes_log(&sminus, false, &step, m_max);
        let (splus, _) = stokes_exp(&c, &step, m_max);
        StokesData {
            ray_theta,
            m_max,
            step,
            c,
            splus,
            sminus,
        }
    }

    /// Maximal round-trip defect among the three families.
    pub fn consistency_defect(&self) -> f64 {
        let (sp, sm) = stokes_exp(&self.c, &self.step, self.m_max);
        let mut d = 0.0f64;
        for m in 1..=self.m_max {
            let a = self.splus.get(&m).cloned().unwrap_or_default();
            let b = sp.get(&m).cloned().unwrap_or_default();
            d = d.max((a - b).norm());
            let a = self.sminus.get(&m).cloned().unwrap_or_default();
            let b = sm.get(&m).cloned().unwrap_or_default();
            d = d.max((a - b).norm());
        }
        d
    }

    pub fn to_json(&self) -> Value {
        let pack = |m: &BTreeMap<usize, Complex64>| -> Vec<Value> {
            m.iter()
                .map(|(j, v)| {
                    let w = self.step * *j as f64;
                    json!([w.re, w.im, v.re, v.im])
                })
                .collect()
        };
        json!({
            "ray": self.ray_theta,
            "mmax": self.m_max,
            "C": pack(&self.c),
            "Splus": pack(&self.splus),
            "Sminus": pack(&self.sminus),
        })
    }
}
