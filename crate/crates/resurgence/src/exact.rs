//! Exact Gaussian-rational scalars: complex numbers with `BigRational` real
//! and imaginary parts. Arithmetic is error-free.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use num_complex::Complex64;

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq)]
pub struct Exact {
    pub re: BigRational,
    pub im: BigRational,
}

impl Exact {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Exact { re, im }
    }

    /// Real rational p/q.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Exact {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    pub fn i() -> Self {
        Exact {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Exact {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus, a non-negative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero");
        Exact {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Parses a rational from a decimal or `p/q` string.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(BigRational::new(p, q));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: BigInt = if int.is_empty() || int == "-" {
                BigInt::zero()
            } else {
                int.parse().ok()?
            };
            let digits = frac.len() as u32;
            let num: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().ok()?
            };
            let den = BigInt::from(10u32).pow(digits);
            let f = BigRational::new(num, den);
            let i = BigRational::from_integer(int);
            return Some(if neg { i - f } else { i + f });
        }
        let p: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(p))
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    // Exact conversion would overflow for large numerators; scale first.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        let nf = bigint_to_f64(n);
        let df = bigint_to_f64(d);
        nf / df
    } else {
        let shift = (nb.max(db) - 900).max(0) as u64;
        let nf = bigint_to_f64(&(n >> shift));
        let df = bigint_to_f64(&(d >> shift));
        nf / df
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let mut x = 0.0f64;
    let (sign, bytes) = n.to_bytes_be();
    for b in bytes {
        x = x * 256.0 + b as f64;
    }
    if sign == num::bigint::Sign::Minus {
        -x
    } else {
        x
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_positive() {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        Exact {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for Exact {
    type Output = Exact;
    fn div(self, rhs: Exact) -> Exact {
        self * rhs.inv()
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = Exact::i();
        assert_eq!(i.clone() * i.clone(), Exact::int(-1));
        let z = Exact::ratio(1, 2) + Exact::ratio(1, 3) * Exact::i();
        let w = z.clone() * z.clone().inv();
        assert_eq!(w, Exact::int(1));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(
            Exact::parse_rational("-3/4").unwrap(),
            BigRational::new(BigInt::from(-3), BigInt::from(4))
        );
        assert_eq!(
            Exact::parse_rational("0.25").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(
            Exact::parse_rational("-1.5").unwrap(),
            BigRational::new(BigInt::from(-3), BigInt::from(2))
        );
        assert!(Exact::parse_rational("1/0").is_none());
    }

    #[test]
    fn f64_conversion() {
        let r = Exact::ratio(1, 3);
        assert!((r.to_complex().re - 1.0 / 3.0).abs() < 1e-15);
    }
}
