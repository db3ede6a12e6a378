//! Quadrature and small numeric utilities: Gauss-Legendre rules, adaptive
//! composite integration of complex-valued analytic integrands over real
//! parameter intervals, trapezoid contour integrals on circles, and a tiny
//! weighted least-squares solver.

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1], computed
/// by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

static GL16: Lazy<Vec<(f64, f64)>> = Lazy::new(|| gauss_legendre(16));
static GL32: Lazy<Vec<(f64, f64)>> = Lazy::new(|| gauss_legendre(32));

/// Result of a segment integral: value plus an error estimate.
#[derive(Clone, Copy, Debug)]
pub struct SegmentResult {
    pub value: Complex64,
    pub est_error: f64,
}

fn panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, rule: &[(f64, f64)]) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in rule {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Adaptive composite Gauss-Legendre on `[a, b]`: each panel is accepted when
/// its 16-point and 32-point values agree within its share of the tolerance,
/// and bisected otherwise. Node placement is deterministic for a given
/// tolerance.
pub fn adaptive_segment(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tolerance: f64,
) -> Result<SegmentResult> {
    adaptive_segment_panels(f, a, b, tolerance, 1)
}

/// As [`adaptive_segment`] with an initial uniform split into `initial`
/// panels, for oscillatory integrands.
pub fn adaptive_segment_panels(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tolerance: f64,
    initial: usize,
) -> Result<SegmentResult> {
    let initial = initial.max(1);
    let mut stack: Vec<(f64, f64, u32)> = (0..initial)
        .map(|k| {
            let lo = a + (b - a) * k as f64 / initial as f64;
            let hi = a + (b - a) * (k + 1) as f64 / initial as f64;
            (lo, hi, 0u32)
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut est = 0.0f64;
    let max_depth = 40;
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = panel(f, lo, hi, &GL16);
        let fine = panel(f, lo, hi, &GL32);
        let err = (fine - coarse).norm();
        let local_tol = tolerance * (hi - lo) / (b - a).abs().max(1e-300);
        if err <= local_tol.max(1e-16 * fine.norm()) || depth >= max_depth {
            if depth >= max_depth && err > local_tol {
                return Err(Error::QuadratureNonConvergence {
                    achieved: err,
                    requested: local_tol,
                });
            }
            value += fine;
            est += err;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(SegmentResult {
        value,
        est_error: est,
    })
}

/// Trapezoid rule on the circle `center + r e^{i t}`, spectrally accurate
/// for integrands analytic in an annulus. Returns `1/(2 pi i) * contour
/// integral of f`.
pub fn circle_contour_mean(
    f: &dyn Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    nodes: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let t = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let e = Complex64::new(0.0, t).exp();
        let z = center + radius * e;
        // dz = i r e^{it} dt; 1/(2 pi i) f dz = f * r e^{it} / (2 pi) dt
        acc += f(z) * e;
    }
    acc * radius / nodes as f64
}

/// Weighted complex least squares: minimizes `sum_k w_k |sum_j m[k][j] x_j - y_k|^2`
/// via the normal equations. Returns the solution, the weighted rms residual,
/// and a crude condition estimate of the normal matrix.
pub struct LsqFit {
    pub coeffs: Vec<Complex64>,
    pub residual_rms: f64,
    pub condition: f64,
}

pub fn weighted_lsq(
    rows: &[Vec<Complex64>],
    rhs: &[Complex64],
    weights: &[f64],
) -> Result<LsqFit> {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    if m < n || n == 0 {
        return Err(Error::InvalidParam(format!(
            "least squares needs at least {n} rows, got {m}"
        )));
    }
    // normal equations A^H W A x = A^H W y
    let mut ata = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut atb = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        let w = weights[k];
        for i in 0..n {
            let ci = rows[k][i].conj() * w;
            for j in 0..n {
                ata[i][j] += ci * rows[k][j];
            }
            atb[i] += ci * rhs[k];
        }
    }
    let cond = condition_estimate(&ata);
    let x = solve_dense(&mut ata.clone(), &mut atb.clone())?;
    let mut ss = 0.0;
    let mut wsum = 0.0;
    for k in 0..m {
        let mut pred = Complex64::new(0.0, 0.0);
        for j in 0..n {
            pred += rows[k][j] * x[j];
        }
        ss += weights[k] * (pred - rhs[k]).norm_sqr();
        wsum += weights[k];
    }
    Ok(LsqFit {
        coeffs: x,
        residual_rms: (ss / wsum.max(1e-300)).sqrt(),
        condition: cond,
    })
}

fn condition_estimate(a: &[Vec<Complex64>]) -> f64 {
    // ratio of largest to smallest diagonal magnitude after a pivoted
    // elimination; crude but adequate as an ill-conditioning alarm
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut dmax = 0.0f64;
    let mut dmin = f64::INFINITY;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].norm() > m[piv][col].norm() {
                piv = r;
            }
        }
        m.swap(col, piv);
        let d = m[col][col].norm();
        dmax = dmax.max(d);
        dmin = dmin.min(d);
        if d == 0.0 {
            return f64::INFINITY;
        }
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for c in col..n {
                let sub = factor * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    if dmin == 0.0 {
        f64::INFINITY
    } else {
        dmax / dmin
    }
}

/// Dense complex linear solve with partial (column) pivoting.
pub fn solve_dense(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].norm() > a[piv][col].norm() {
                piv = r;
            }
        }
        if a[piv][col].norm() == 0.0 {
            return Err(Error::InvalidParam("singular linear system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                let sub = factor * a[col][c];
                a[r][c] -= sub;
            }
            let sub = factor * b[col];
            b[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Durand-Kerner simultaneous root finder for a monic polynomial given by
/// its coefficients `c_0 + c_1 x + ... + c_n x^n` (c_n need not be 1).
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    // strip trailing zeros
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.len() > 1 && cs.last().unwrap().norm() < 1e-300 {
        cs.pop();
    }
    let n = cs.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = cs[n];
    let monic: Vec<Complex64> = cs.iter().map(|c| c / lead).collect();
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    // initial guesses on a circle of the root-magnitude scale
    let scale = monic[..n]
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm().powf(1.0 / (n - k) as f64))
        .fold(0.5, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            scale * 1.1 * Complex64::new(t.cos(), t.sin())
        })
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() < 1e-280 {
                continue;
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-13 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // a 16-point rule is exact up to degree 31
        let rule = gauss_legendre(16);
        let val: f64 = rule.iter().map(|&(x, w)| w * x.powi(10)).sum();
        assert!((val - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_exponential() {
        let f = |t: f64| Complex64::new((-2.0 * t).exp(), 0.0);
        let r = adaptive_segment(&f, 0.0, 20.0, 1e-12).unwrap();
        assert!((r.value.re - 0.5 * (1.0 - (-40.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn contour_residue_of_simple_pole() {
        let f = |z: Complex64| 1.0 / (z - Complex64::new(0.3, 0.1));
        let r = circle_contour_mean(&f, Complex64::new(0.3, 0.1), 0.5, 64);
        assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_of_quadratic() {
        // (x-1)(x-2) = 2 - 3x + x^2
        let roots = polynomial_roots(&[
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let mut mags: Vec<f64> = roots.iter().map(|r| r.re).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mags[0] - 1.0).abs() < 1e-10 && (mags[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn lsq_recovers_plane() {
        // y = 2 + 3i + (1 - i) x over a few points
        let xs = [0.5, 1.0, 1.5, 2.0, 3.0];
        let a = Complex64::new(2.0, 3.0);
        let b = Complex64::new(1.0, -1.0);
        let rows: Vec<Vec<Complex64>> = xs
            .iter()
            .map(|&x| vec![Complex64::new(1.0, 0.0), Complex64::new(x, 0.0)])
            .collect();
        let rhs: Vec<Complex64> = xs.iter().map(|&x| a + b * x).collect();
        let w = vec![1.0; xs.len()];
        let fit = weighted_lsq(&rows, &rhs, &w).unwrap();
        assert!((fit.coeffs[0] - a).norm() < 1e-12);
        assert!((fit.coeffs[1] - b).norm() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }
}
