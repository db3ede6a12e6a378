//! Catalog of worked examples: exact series, exact minor Taylor
//! coefficients, closed-form minor evaluators and independent reference
//! oracles, registered by string id.

use num::{BigRational, One, Signed, Zero};
use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::borel::{borel, inverse_borel, BorelFunction};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::formal::{FormalSeries, TaylorGerm};
use crate::minors::{build_minor, Minor, Params};
use crate::oracles;

/// Exact Bernoulli numbers `B_2, B_4, ..., B_{2 k_max}` extracted from the
/// series inverse of `(e^t - 1)/t`; the vanishing of the odd ones beyond
/// `B_1` is asserted during extraction.
pub fn bernoulli(k_max: usize) -> Vec<BigRational> {
    let order = 2 * k_max;
    // (e^t - 1)/t = sum t^k/(k+1)!
    let mut den = FormalSeries::<Exact>::zero(order);
    for k in 0..=order {
        let mut f = Exact::int(1);
        for j in 2..=(k + 1) {
            f = f / Exact::int(j as i64);
        }
        den.set_coeff(k, f);
    }
    let one = FormalSeries::<Exact>::constant(Exact::int(1), order);
    let inv = one.div(&den).expect("unit constant term");
    let mut out = Vec::with_capacity(k_max);
    for n in 0..=order {
        // c_n = B_n / n!
        let mut fact = Exact::int(1);
        for j in 2..=n {
            fact = fact * Exact::int(j as i64);
        }
        let b = inv.coeff(n) * fact;
        match n {
            0 => debug_assert!(b == Exact::int(1)),
            1 => debug_assert!(b == Exact::ratio(-1, 2)),
            _ if n % 2 == 1 => {
                assert!(num::Zero::is_zero(&b.re) && num::Zero::is_zero(&b.im),
                    "odd Bernoulli number B_{n} must vanish");
            }
            _ => out.push(b.re),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Exact series builders
// ---------------------------------------------------------------------------

/// `sum (-1)^n n! z^{-n-1}`.
pub fn euler_series(order: usize) -> FormalSeries<Exact> {
    let mut s = FormalSeries::zero(order);
    let mut f = Exact::int(1);
    for n in 0..order {
        s.set_coeff(n + 1, if n % 2 == 0 { f.clone() } else { -f.clone() });
        f = f * Exact::int(n as i64 + 1);
    }
    s
}

/// The odd series `sum_k B_{2k}/(2k(2k-1)) z^{-2k+1}`.
pub fn stirling_mu(order: usize) -> FormalSeries<Exact> {
    let b = bernoulli(order / 2 + 1);
    let mut s = FormalSeries::zero(order);
    for (i, b2k) in b.iter().enumerate() {
        let k = (i + 1) as i64;
        let n = (2 * k - 1) as usize;
        if n > order {
            break;
        }
        let denom = Exact::int(2 * k * (2 * k - 1));
        s.set_coeff(n, Exact::new(b2k.clone(), BigRational::zero()) / denom);
    }
    s
}

/// `exp(stirling_mu)`, the normalized gamma-ratio asymptotic series.
pub fn stirling_lambda(order: usize) -> FormalSeries<Exact> {
    let mu = stirling_mu(order);
    FormalSeries::substitute(&TaylorGerm::exp(order), &mu).expect("mu has no constant term")
}

/// Formal solution of `phi - w phi(z+1) = z^-1`, built through the exact
/// Borel-plane inverse of `1 - w e^{-zeta}`.
pub fn poincare_series(w: &Exact, order: usize) -> Result<FormalSeries<Exact>> {
    let minor = poincare_minor_taylor(w, order)?;
    Ok(inverse_borel(&BorelFunction::new(Exact::int(0), minor)))
}

/// `1/((s-1) z^{s-1}) + 1/(2 z^s) + sum_k binom(s+2k-1, s-1) B_{2k}/(s+2k-1) z^{-(s+2k-1)}`.
pub fn hurwitz_series(s: u32, order: usize) -> Result<FormalSeries<Exact>> {
    if s < 2 {
        return Err(Error::InvalidParam("hurwitz needs integer s >= 2".into()));
    }
    let mut out = FormalSeries::zero(order);
    let sm1 = (s - 1) as usize;
    if sm1 <= order {
        out.set_coeff(sm1, Exact::ratio(1, (s - 1) as i64));
    }
    if (s as usize) <= order {
        out.set_coeff(s as usize, Exact::ratio(1, 2));
    }
    let b = bernoulli(order / 2 + 1);
    for (i, b2k) in b.iter().enumerate() {
        let k = (i + 1) as u32;
        let n = (s + 2 * k - 1) as usize;
        if n > order {
            break;
        }
        // binom(s+2k-1, s-1)
        let mut binom = BigRational::one();
        for j in 0..(s - 1) {
            binom = binom * BigRational::from_integer((s as i64 + 2 * k as i64 - 1 - j as i64).into())
                / BigRational::from_integer((j as i64 + 1).into());
        }
        let coeff = binom * b2k / BigRational::from_integer(((s + 2 * k - 1) as i64).into());
        out.set_coeff(n, Exact::new(coeff, BigRational::zero()));
    }
    Ok(out)
}

/// `sum_n (alpha-1)(alpha-2)...(alpha-n) z^{-n-1}`.
pub fn incgamma_series(alpha: &Exact, order: usize) -> FormalSeries<Exact> {
    let mut s = FormalSeries::zero(order);
    let mut prod = Exact::int(1);
    for n in 0..order {
        s.set_coeff(n + 1, prod.clone());
        prod = prod * (alpha.clone() - Exact::int(n as i64 + 1));
    }
    s
}

// ---------------------------------------------------------------------------
// Exact minor Taylor coefficients (independent of the series builders)
// ---------------------------------------------------------------------------

pub fn euler_minor_taylor(len: usize) -> Vec<Exact> {
    (0..len)
        .map(|n| if n % 2 == 0 { Exact::int(1) } else { Exact::int(-1) })
        .collect()
}

/// Taylor coefficients of `zeta^-2 (zeta/2 coth(zeta/2) - 1)`:
/// `B_{2k}/(2k)!` at `zeta^{2k-2}`.
pub fn stirling_minor_taylor(len: usize) -> Vec<Exact> {
    let b = bernoulli(len / 2 + 2);
    let mut out = vec![Exact::int(0); len];
    for (i, b2k) in b.iter().enumerate() {
        let k = i + 1;
        let n = 2 * k - 2;
        if n >= len {
            break;
        }
        let mut fact = Exact::int(1);
        for j in 2..=(2 * k) {
            fact = fact * Exact::int(j as i64);
        }
        out[n] = Exact::new(b2k.clone(), BigRational::zero()) / fact;
    }
    out
}

/// Taylor coefficients of `1/(1 - w e^{-zeta})`.
pub fn poincare_minor_taylor(w: &Exact, len: usize) -> Result<Vec<Exact>> {
    if w.norm_sq() >= BigRational::one() || w.norm_sq().is_zero() {
        return Err(Error::InvalidParam("poincare needs 0 < |w| < 1".into()));
    }
    let order = len.max(1);
    // 1 - w e^{-zeta}
    let mut den = FormalSeries::<Exact>::zero(order);
    let mut term = Exact::int(1);
    for k in 0..=order {
        if k > 0 {
            term = term.clone() / Exact::int(k as i64);
        }
        // (-1)^k w / k!
        let c = if k % 2 == 0 { term.clone() } else { -term.clone() };
        den.set_coeff(k, -(w.clone() * c));
    }
    den.set_coeff(0, Exact::int(1) - w.clone());
    let one = FormalSeries::constant(Exact::int(1), order);
    let inv = one.div(&den)?;
    Ok(inv.coeffs()[..len].to_vec())
}

/// Taylor coefficients of `zeta^{s-1}/(Gamma(s)(1-e^{-zeta}))`.
pub fn hurwitz_minor_taylor(s: u32, len: usize) -> Result<Vec<Exact>> {
    if s < 2 {
        return Err(Error::InvalidParam("hurwitz needs integer s >= 2".into()));
    }
    let order = len + 2;
    // (1 - e^{-zeta})/zeta = sum (-1)^k zeta^k/(k+1)!
    let mut den = FormalSeries::<Exact>::zero(order);
    for k in 0..=order {
        let mut f = Exact::int(1);
        for j in 2..=(k + 1) {
            f = f / Exact::int(j as i64);
        }
        den.set_coeff(k, if k % 2 == 0 { f } else { -f });
    }
    let one = FormalSeries::constant(Exact::int(1), order);
    let u = one.div(&den)?; // zeta/(1 - e^{-zeta})
    let mut gamma_s = Exact::int(1);
    for j in 2..s {
        gamma_s = gamma_s * Exact::int(j as i64);
    }
    // minor = zeta^{s-2} u / Gamma(s)
    let shift = (s - 2) as usize;
    let mut out = vec![Exact::int(0); len];
    for n in 0..len {
        if n >= shift {
            out[n] = u.coeff(n - shift) / gamma_s.clone();
        }
    }
    Ok(out)
}

/// Binomial-series coefficients of `(1+zeta)^{alpha-1}`.
pub fn incgamma_minor_taylor(alpha: &Exact, len: usize) -> Vec<Exact> {
    let mut out = Vec::with_capacity(len);
    let mut c = Exact::int(1);
    for n in 0..len {
        out.push(c.clone());
        c = c * (alpha.clone() - Exact::int(n as i64 + 1)) / Exact::int(n as i64 + 1);
    }
    out
}

// ---------------------------------------------------------------------------
// Catalog registry
// ---------------------------------------------------------------------------

/// Metadata describing a catalog entry instance.
#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub id: String,
    /// Directions (radians) of the singular rays closest to the summable arc.
    pub singular_rays: Vec<f64>,
    /// Growth constant certified on the principal summation arc.
    pub gamma: f64,
    /// Principal summation arc (theta1, theta2).
    pub arc: (f64, f64),
}

/// A built example: exact series, float minor evaluator, metadata. The
/// exact minor Taylor coefficients come from a route independent of the
/// series builder, so Borel consistency is a real check.
pub struct BuiltExample {
    pub series: FormalSeries<Exact>,
    pub minor_taylor: Vec<Exact>,
    pub minor: Box<dyn Minor>,
    pub spec: ExampleSpec,
}

impl BuiltExample {
    /// `B(series)` must match the independent minor Taylor coefficients
    /// exactly.
    pub fn borel_consistent(&self) -> bool {
        let hat = borel(&self.series);
        let n = hat.minor_len().min(self.minor_taylor.len());
        (0..n).all(|k| hat.minor_coeff(k) == self.minor_taylor[k])
            && hat.delta == Exact::int(0)
    }
}

pub trait CatalogEntry: Sync + Send {
    fn id(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, params: &Params, order: usize) -> Result<BuiltExample>;
    /// Independent high-accuracy oracle for the Borel sum at `z`.
    fn reference_value(&self, params: &Params, z: Complex64) -> Result<Complex64>;
}

struct EulerEntry;
impl CatalogEntry for EulerEntry {
    fn id(&self) -> &'static str {
        "euler"
    }
    fn summary(&self) -> &'static str {
        "alternating factorial series; minor 1/(1+zeta)"
    }
    fn build(&self, _p: &Params, order: usize) -> Result<BuiltExample> {
        Ok(BuiltExample {
            series: euler_series(order),
            minor_taylor: euler_minor_taylor(order),
            minor: build_minor("euler")?,
            spec: ExampleSpec {
                id: "euler".into(),
                singular_rays: vec![std::f64::consts::PI],
                gamma: 0.0,
                arc: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            },
        })
    }
    fn reference_value(&self, _p: &Params, z: Complex64) -> Result<Complex64> {
        oracles::euler_function(z)
    }
}

struct StirlingEntry;
impl CatalogEntry for StirlingEntry {
    fn id(&self) -> &'static str {
        "stirling"
    }
    fn summary(&self) -> &'static str {
        "log of the normalized gamma ratio; minor zeta^-2(zeta/2 coth(zeta/2)-1)"
    }
    fn build(&self, _p: &Params, order: usize) -> Result<BuiltExample> {
        Ok(BuiltExample {
            series: stirling_mu(order),
            minor_taylor: stirling_minor_taylor(order),
            minor: build_minor("stirling")?,
            spec: ExampleSpec {
                id: "stirling".into(),
                singular_rays: vec![std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2],
                gamma: 0.0,
                arc: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            },
        })
    }
    fn reference_value(&self, _p: &Params, z: Complex64) -> Result<Complex64> {
        oracles::mu_oracle(z, 1e-13)
    }
}

struct PoincareEntry;
impl PoincareEntry {
    fn w_exact(p: &Params) -> Result<Exact> {
        let s = p
            .raw("w")
            .ok_or_else(|| Error::InvalidParam("poincare needs w=<rational in (0,1)>".into()))?;
        let w = Exact::parse_rational(s)
            .ok_or_else(|| Error::InvalidParam(format!("bad rational w = {s}")))?;
        if w.abs() >= BigRational::one() || w.is_zero() {
            return Err(Error::InvalidParam("poincare needs 0 < |w| < 1".into()));
        }
        Ok(Exact::new(w, BigRational::zero()))
    }
}
impl CatalogEntry for PoincareEntry {
    fn id(&self) -> &'static str {
        "poincare"
    }
    fn summary(&self) -> &'static str {
        "sum of w^k/(z+k); minor 1/(1-e^{s-zeta}), w = e^s"
    }
    fn build(&self, p: &Params, order: usize) -> Result<BuiltExample> {
        let w = Self::w_exact(p)?;
        let wf = w.to_complex();
        let s = wf.ln();
        let lattice_angles: Vec<f64> = (-2..=2)
            .map(|k| (s + Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)).arg())
            .collect();
        Ok(BuiltExample {
            series: poincare_series(&w, order)?,
            minor_taylor: poincare_minor_taylor(&w, order)?,
            minor: build_minor(&format!("poincare(s={})", crate::minors::format_complex(s)))?,
            spec: ExampleSpec {
                id: format!("poincare(w={})", w.re),
                singular_rays: lattice_angles,
                gamma: 0.0,
                arc: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            },
        })
    }
    fn reference_value(&self, p: &Params, z: Complex64) -> Result<Complex64> {
        let w = Self::w_exact(p)?.to_complex();
        oracles::poincare_sum(w, z, 1e-14)
    }
}

struct HurwitzEntry;
impl HurwitzEntry {
    fn s_int(p: &Params) -> Result<u32> {
        let s = p.get_f64("s")?;
        if s.fract() != 0.0 || s < 2.0 {
            return Err(Error::InvalidParam(
                "hurwitz is restricted to integer s >= 2".into(),
            ));
        }
        Ok(s as u32)
    }
}
impl CatalogEntry for HurwitzEntry {
    fn id(&self) -> &'static str {
        "hurwitz"
    }
    fn summary(&self) -> &'static str {
        "sum of (z+k)^{-s}; minor zeta^{s-1}/(Gamma(s)(1-e^{-zeta}))"
    }
    fn build(&self, p: &Params, order: usize) -> Result<BuiltExample> {
        let s = Self::s_int(p)?;
        Ok(BuiltExample {
            series: hurwitz_series(s, order)?,
            minor_taylor: hurwitz_minor_taylor(s, order)?,
            minor: build_minor(&format!("hurwitz(s={s})"))?,
            spec: ExampleSpec {
                id: format!("hurwitz(s={s})"),
                singular_rays: vec![std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2],
                gamma: 0.0,
                arc: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            },
        })
    }
    fn reference_value(&self, p: &Params, z: Complex64) -> Result<Complex64> {
        oracles::hurwitz_sum(Self::s_int(p)?, z)
    }
}

struct IncGammaEntry;
impl IncGammaEntry {
    fn alpha_exact(p: &Params) -> Result<Exact> {
        let s = p
            .raw("alpha")
            .ok_or_else(|| Error::InvalidParam("incgamma needs alpha=<rational>".into()))?;
        Exact::parse_rational(s)
            .map(|r| Exact::new(r, BigRational::zero()))
            .ok_or_else(|| Error::InvalidParam(format!("bad rational alpha = {s}")))
    }
}
impl CatalogEntry for IncGammaEntry {
    fn id(&self) -> &'static str {
        "incgamma"
    }
    fn summary(&self) -> &'static str {
        "e^z z^{-alpha} Gamma(alpha, z); minor (1+zeta)^{alpha-1}"
    }
    fn build(&self, p: &Params, order: usize) -> Result<BuiltExample> {
        let alpha = Self::alpha_exact(p)?;
        let af = alpha.to_complex();
        Ok(BuiltExample {
            series: incgamma_series(&alpha, order),
            minor_taylor: incgamma_minor_taylor(&alpha, order),
            minor: build_minor(&format!(
                "incgamma(alpha={})",
                crate::minors::format_complex(af)
            ))?,
            spec: ExampleSpec {
                id: format!("incgamma(alpha={})", alpha.re),
                singular_rays: vec![std::f64::consts::PI],
                gamma: 0.0,
                arc: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            },
        })
    }
    fn reference_value(&self, p: &Params, z: Complex64) -> Result<Complex64> {
        let alpha = Self::alpha_exact(p)?.to_complex();
        let g = oracles::incomplete_gamma_quadrature(alpha, z, 1e-13)?;
        Ok(z.exp() * (-alpha * z.ln()).exp() * g)
    }
}

static CATALOG: Lazy<Vec<Box<dyn CatalogEntry>>> = Lazy::new(|| {
    vec![
        Box::new(EulerEntry),
        Box::new(StirlingEntry),
        Box::new(PoincareEntry),
        Box::new(HurwitzEntry),
        Box::new(IncGammaEntry),
    ]
});

pub fn catalog() -> &'static [Box<dyn CatalogEntry>] {
    &CATALOG
}

/// Builds a catalog example from an id spec such as `euler` or
/// `poincare(w=1/2)`.
pub fn build(id_spec: &str, order: usize) -> Result<BuiltExample> {
    let (name, params) = Params::parse(id_spec)?;
    for e in catalog().iter() {
        if e.id() == name {
            return e.build(&params, order);
        }
    }
    Err(Error::UnknownId(format!("catalog entry {name}")))
}

/// Independent reference value for a catalog example.
pub fn reference_value(id_spec: &str, z: Complex64) -> Result<Complex64> {
    let (name, params) = Params::parse(id_spec)?;
    for e in catalog().iter() {
        if e.id() == name {
            return e.reference_value(&params, z);
        }
    }
    Err(Error::UnknownId(format!("catalog entry {name}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(4);
        assert_eq!(b[0], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[1], BigRational::new((-1).into(), 30.into()));
        assert_eq!(b[2], BigRational::new(1.into(), 42.into()));
        assert_eq!(b[3], BigRational::new((-1).into(), 30.into()));
    }

    #[test]
    fn euler_series_first_terms() {
        let s = euler_series(6);
        let want = [0i64, 1, -1, 2, -6, 24, -120];
        for (n, &w) in want.iter().enumerate() {
            assert_eq!(s.coeff(n), Exact::int(w));
        }
    }

    #[test]
    fn stirling_mu_first_terms() {
        let s = stirling_mu(5);
        assert_eq!(s.coeff(1), Exact::ratio(1, 12));
        assert_eq!(s.coeff(2), Exact::int(0));
        assert_eq!(s.coeff(3), Exact::ratio(-1, 360));
        assert_eq!(s.coeff(4), Exact::int(0));
        assert_eq!(s.coeff(5), Exact::ratio(1, 1260));
    }

    #[test]
    fn stirling_mu_is_odd() {
        let s = stirling_mu(21);
        for n in (2..=20).step_by(2) {
            assert_eq!(s.coeff(n), Exact::int(0), "even coefficient {n}");
        }
    }

    #[test]
    fn stirling_lambda_coefficients() {
        let l = stirling_lambda(5);
        assert_eq!(l.coeff(0), Exact::int(1));
        assert_eq!(l.coeff(1), Exact::ratio(1, 12));
        assert_eq!(l.coeff(2), Exact::ratio(1, 288));
        assert_eq!(l.coeff(3), Exact::ratio(-139, 51840));
        assert_eq!(l.coeff(4), Exact::ratio(-571, 2488320));
        assert_eq!(l.coeff(5), Exact::ratio(163879, 209018880));
    }

    #[test]
    fn stirling_mu_solves_its_difference_equation() {
        // psi = 1/2 L + z(z^-1 + L), L = -sum (-1)^{n-1}/n z^-n; the unique
        // solution of phi(z+1)-phi(z) = psi is mu
        let order = 12usize;
        let mut l = FormalSeries::<Exact>::zero(order);
        for n in 1..=order {
            let c = Exact::ratio(if n % 2 == 1 { -1 } else { 1 }, n as i64);
            l.set_coeff(n, c);
        }
        let z1 = FormalSeries::<Exact>::monomial(1, order);
        let psi = l.scale(&Exact::ratio(1, 2)).add(&z1.add(&l).mul_z().unwrap());
        let mu = crate::borel::solve_difference(&psi).unwrap();
        let want = stirling_mu(mu.order());
        assert_eq!(mu, want.truncate(mu.order()));
    }

    #[test]
    fn hurwitz_series_s2() {
        let s = hurwitz_series(2, 5).unwrap();
        assert_eq!(s.coeff(1), Exact::int(1));
        assert_eq!(s.coeff(2), Exact::ratio(1, 2));
        assert_eq!(s.coeff(3), Exact::ratio(1, 6));
        assert_eq!(s.coeff(4), Exact::int(0));
        assert_eq!(s.coeff(5), Exact::ratio(-1, 30));
    }

    #[test]
    fn catalog_borel_consistency_order_20() {
        for spec in ["euler", "stirling", "poincare(w=1/2)", "hurwitz(s=2)", "hurwitz(s=3)", "incgamma(alpha=1/2)"] {
            let b = build(spec, 20).unwrap();
            assert!(b.borel_consistent(), "borel consistency fails for {spec}");
        }
    }

    #[test]
    fn catalog_reference_values() {
        // poincare w=1/2, z=2 -> 4 ln 2 - 2 (closed-form log oracle)
        let v = reference_value("poincare(w=1/2)", Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - (4.0 * 2.0f64.ln() - 2.0)).abs() < 1e-12);
        // hurwitz s=2, z=1 -> pi^2/6
        let v = reference_value("hurwitz(s=2)", Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        // gamma-lambda at z=5: (2 pi)^{-1/2} 5^{1/2-5} e^5 Gamma(5), Gamma(5)=4!
        let lam = oracles::lambda_oracle(Complex64::new(5.0, 0.0), 1e-13).unwrap();
        let want = (2.0 * std::f64::consts::PI).sqrt().recip()
            * 5.0f64.powf(-4.5)
            * 5.0f64.exp()
            * 24.0;
        assert!((lam.re - want).abs() / want < 1e-11, "{lam} want {want}");
    }

    #[test]
    fn unknown_ids_and_bad_params() {
        assert!(build("nosuch", 5).is_err());
        assert!(build("poincare(w=2)", 5).is_err());
        assert!(build("hurwitz(s=1)", 5).is_err());
        assert!(build("hurwitz(s=2.5)", 5).is_err());
    }
}
