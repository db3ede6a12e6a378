//! Independent reference evaluators used to check Borel sums: none of them
//! go through the Laplace machinery.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{adaptive_segment, adaptive_segment_panels};

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// The function summing the alternating factorial series: `e^z E_1(z)`,
/// holomorphic on the plane cut along the negative reals. Small moduli use
/// the entire-series form of `E_1`, large ones a continued fraction
/// evaluated by the modified Lentz scheme.
pub fn euler_function(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 && z.im == 0.0 {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: "on the cut of E_1".into(),
        });
    }
    if z.norm() <= 4.0 {
        // E_1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..200 {
            term = term * (-z) / k as f64;
            let inc = term / k as f64;
            sum += inc;
            if inc.norm() < 1e-18 * sum.norm().max(1.0) {
                break;
            }
        }
        let e1 = -EULER_MASCHERONI - z.ln() - sum;
        Ok(z.exp() * e1)
    } else {
        // e^z E_1(z) = 1/(z+1- 1/(z+3- 4/(z+5- 9/(z+7- ...))))
        let tiny = Complex64::new(1e-300, 0.0);
        let b0 = z + 1.0;
        let mut f = if b0.norm() == 0.0 { tiny } else { b0 };
        let mut c = f;
        let mut d = Complex64::new(0.0, 0.0);
        for k in 1..20000 {
            let ak = Complex64::new(-((k * k) as f64), 0.0);
            let bk = z + (2 * k + 1) as f64;
            d = bk + ak * d;
            if d.norm() == 0.0 {
                d = tiny;
            }
            c = bk + ak / c;
            if c.norm() == 0.0 {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).norm() < 1e-15 {
                return Ok(1.0 / f);
            }
        }
        Err(Error::NonConvergence { limit: 20000 })
    }
}

/// Gamma function by direct quadrature of `t^{z-1} e^{-t}`, `Re z > 0`.
pub fn gamma_quadrature(z: Complex64, rel_tol: f64) -> Result<Complex64> {
    if z.re <= 0.0 {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: "gamma quadrature needs Re z > 0".into(),
        });
    }
    // coarse magnitude from the real Stirling shape, to set absolute budgets
    let x = z.re;
    let scale = (2.0 * std::f64::consts::PI / x).sqrt() * (x * (x.ln() - 1.0)).exp();
    let t_hi = 3.0 * x + 80.0;
    let f = |t: f64| {
        if t <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            ((z - 1.0) * t.ln() - t).exp()
        }
    };
    let panels = (t_hi / 4.0).ceil() as usize;
    let r = adaptive_segment_panels(&f, 0.0, t_hi, rel_tol * scale, panels)?;
    Ok(r.value)
}

/// `(2 pi)^{-1/2} z^{1/2 - z} e^z Gamma(z)`, the normalized gamma ratio, by
/// quadrature; principal branch of `z^{1/2-z}`.
pub fn lambda_oracle(z: Complex64, rel_tol: f64) -> Result<Complex64> {
    let g = gamma_quadrature(z, rel_tol)?;
    let pref = ((0.5 - z) * z.ln() + z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok(pref * g)
}

/// `log lambda(z)`; safe for z away from the negative reals where lambda is
/// close to 1.
pub fn mu_oracle(z: Complex64, rel_tol: f64) -> Result<Complex64> {
    Ok(lambda_oracle(z, rel_tol)?.ln())
}

/// Direct geometrically-convergent sum `sum_k w^k/(z+k)`.
pub fn poincare_sum(w: Complex64, z: Complex64, tol: f64) -> Result<Complex64> {
    if w.norm() >= 1.0 {
        return Err(Error::InvalidParam("poincare sum needs |w| < 1".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut wk = Complex64::new(1.0, 0.0);
    for k in 0..100_000 {
        let den = z + k as f64;
        if den.norm() < 1e-12 {
            return Err(Error::OutsideDomain {
                z: format!("{z}"),
                reason: "pole of the defining sum".into(),
            });
        }
        acc += wk / den;
        wk *= w;
        // tail bound |w|^{k+1} / ((1-|w|) dist)
        let tail = wk.norm() / ((1.0 - w.norm()) * den.norm().max(1.0));
        if tail < tol {
            return Ok(acc);
        }
    }
    Err(Error::NonConvergence { limit: 100_000 })
}

/// `sum_k (z+k)^{-s}` for integer `s >= 2` with an Euler-Maclaurin tail.
pub fn hurwitz_sum(s: u32, z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 && z.im.abs() < 1e-12 {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: "hurwitz sum needs z off the non-positive reals".into(),
        });
    }
    let sf = s as f64;
    let k_head = 40usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..k_head {
        acc += (z + k as f64).powf(-sf);
    }
    let zk = z + k_head as f64;
    // integral term + half term + Bernoulli corrections
    acc += zk.powf(1.0 - sf) / (sf - 1.0);
    acc += 0.5 * zk.powf(-sf);
    // B_2/2! s, B_4/4! s(s+1)(s+2), B_6/6! ...
    let bern = [(1.0 / 6.0, 2u32), (-1.0 / 30.0, 4), (1.0 / 42.0, 6), (-1.0 / 30.0, 8)];
    for &(b2j, two_j) in &bern {
        // (s)_{2j-1} = s (s+1) ... (s+2j-2)
        let mut poch = 1.0;
        for i in 0..(two_j - 1) {
            poch *= sf + i as f64;
        }
        let fact: f64 = (1..=two_j).map(|k| k as f64).product();
        acc += (b2j / fact) * poch * zk.powf(-sf - two_j as f64 + 1.0);
    }
    Ok(acc)
}

/// Incomplete gamma `Gamma(alpha, z) = int_z^inf e^{-t} t^{alpha-1} dt` by
/// quadrature along `z + R^+`, for `Re z > 0`.
pub fn incomplete_gamma_quadrature(
    alpha: Complex64,
    z: Complex64,
    tol: f64,
) -> Result<Complex64> {
    if z.re <= 0.0 {
        return Err(Error::OutsideDomain {
            z: format!("{z}"),
            reason: "incomplete gamma quadrature needs Re z > 0".into(),
        });
    }
    let u_hi = 60.0 + 3.0 * z.norm();
    let f = |u: f64| {
        let t = z + u;
        ((alpha - 1.0) * t.ln() - t).exp()
    };
    let r = adaptive_segment(&f, 0.0, u_hi, tol)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_function_reference_value() {
        let v = euler_function(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 0.596347362323194).abs() < 1e-12, "{v}");
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn euler_function_branches_agree() {
        // series and continued fraction must match near the switch radius
        for &(re, im) in &[(3.8, 0.9), (4.2, 0.9), (3.9, -1.1), (4.1, -1.1)] {
            let z = Complex64::new(re, im);
            let s = {
                let mut sum = Complex64::new(0.0, 0.0);
                let mut term = Complex64::new(1.0, 0.0);
                for k in 1..300 {
                    term = term * (-z) / k as f64;
                    sum += term / k as f64;
                }
                z.exp() * (-EULER_MASCHERONI - z.ln() - sum)
            };
            let v = euler_function(z).unwrap();
            assert!((v - s).norm() < 1e-12, "{z}: {v} vs {s}");
        }
    }

    #[test]
    fn euler_function_satisfies_ode() {
        // -phi' + phi = 1/z, checked with a central difference
        let z = Complex64::new(2.0, 0.5);
        let h = 1e-5;
        let fp = euler_function(z + h).unwrap();
        let fm = euler_function(z - h).unwrap();
        let f0 = euler_function(z).unwrap();
        let deriv = (fp - fm) / (2.0 * h);
        assert!((-deriv + f0 - 1.0 / z).norm() < 1e-9);
    }

    #[test]
    fn gamma_quadrature_factorials() {
        let g5 = gamma_quadrature(Complex64::new(5.0, 0.0), 1e-13).unwrap();
        assert!((g5.re - 24.0).abs() / 24.0 < 1e-12, "{g5}");
        let g8 = gamma_quadrature(Complex64::new(8.0, 0.0), 1e-13).unwrap();
        assert!((g8.re - 5040.0).abs() / 5040.0 < 1e-12, "{g8}");
    }

    #[test]
    fn gamma_quadrature_functional_equation() {
        let z = Complex64::new(6.0, 2.0);
        let a = gamma_quadrature(z + 1.0, 1e-13).unwrap();
        let b = gamma_quadrature(z, 1e-13).unwrap();
        assert!((a - z * b).norm() / a.norm() < 1e-11);
    }

    #[test]
    fn poincare_closed_form_log() {
        // sum (1/2)^k/(2+k) = 4 ln 2 - 2
        let v = poincare_sum(
            Complex64::new(0.5, 0.0),
            Complex64::new(2.0, 0.0),
            1e-14,
        )
        .unwrap();
        let want = 4.0 * 2.0f64.ln() - 2.0;
        assert!((v.re - want).abs() < 1e-12, "{v} want {want}");
    }

    #[test]
    fn hurwitz_at_one_is_basel() {
        let v = hurwitz_sum(2, Complex64::new(1.0, 0.0)).unwrap();
        let want = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((v.re - want).abs() < 1e-12, "{v}");
    }

    #[test]
    fn incomplete_gamma_half_at_four() {
        // Gamma(1/2, 4) = 2 int_2^inf e^{-u^2} du via the t = u^2 substitution
        let v = incomplete_gamma_quadrature(
            Complex64::new(0.5, 0.0),
            Complex64::new(4.0, 0.0),
            1e-13,
        )
        .unwrap();
        let g = |u: f64| Complex64::new((-u * u).exp(), 0.0);
        let want = 2.0 * adaptive_segment(&g, 2.0, 12.0, 1e-15).unwrap().value.re;
        assert!((v.re - want).abs() < 1e-12, "{v} want {want}");
    }
}
