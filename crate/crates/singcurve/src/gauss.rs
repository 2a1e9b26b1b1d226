//! Gaussian rationals: the base coefficient field Q(i).
//!
//! Every curve input has coefficients here; algebraic extensions are
//! stacked on top by the tower module. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element a + b*i with exact rational a, b.
///
/// Rationals are kept reduced with positive denominator (num-rational
/// maintains that invariant on construction).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    pub fn zero() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussQ { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussQ { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussQ { re: r, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus a^2 + b^2, a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussQ { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussQ { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Exact square root in Q(i) when one exists.
    ///
    /// Solves (c + d*i)^2 = a + b*i over the rationals; used to resolve
    /// quadratic extensions that do not actually leave the base field.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(GaussQ::zero());
        }
        // |w|^2 = sqrt(a^2+b^2) must be rational.
        let r = rational_sqrt(&self.norm())?;
        if self.im.is_zero() {
            // sqrt of a rational: either rational or pure imaginary.
            if self.re.is_positive() {
                let c = rational_sqrt(&self.re)?;
                return Some(GaussQ::from_rational(c));
            }
            let d = rational_sqrt(&(-self.re.clone()))?;
            return Some(GaussQ { re: BigRational::zero(), im: d });
        }
        // c^2 = (a + r)/2, d = b / (2c). b != 0 so c != 0.
        let two = BigRational::from_integer(BigInt::from(2));
        let c2 = (&self.re + &r) / &two;
        let c = rational_sqrt(&c2)?;
        if c.is_zero() {
            return None;
        }
        let d = &self.im / (&two * &c);
        let w = GaussQ { re: c, im: d };
        debug_assert_eq!(&w * &w, *self);
        Some(w)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

impl Add for &GaussQ {
    type Output = GaussQ;
    fn add(self, rhs: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussQ {
    type Output = GaussQ;
    fn sub(self, rhs: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussQ {
    type Output = GaussQ;
    fn mul(self, rhs: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussQ {
    /// Exact, deterministic rendering: `3/2`, `i`, `-2*i`, `1+2*i`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.re.is_zero() {
            parts.push(fmt_rat(&self.re));
        }
        if !self.im.is_zero() {
            let im = if self.im.is_one() {
                "i".to_string()
            } else if (-self.im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(&self.im))
            };
            if parts.is_empty() || im.starts_with('-') {
                parts.push(im);
            } else {
                parts.push(format!("+{im}"));
            }
        }
        write!(f, "{}", parts.concat())
    }
}

impl fmt::Debug for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussQ::new(q(3, 2), q(-5, 7));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussQ::zero().inv().is_none());
    }

    #[test]
    fn exact_sqrt() {
        // sqrt(-4) = 2i
        let z = GaussQ::from_int(-4);
        assert_eq!(z.sqrt().unwrap(), GaussQ::new(q(0, 1), q(2, 1)));
        // sqrt(2i) = 1+i
        let z = GaussQ::new(q(0, 1), q(2, 1));
        assert_eq!(z.sqrt().unwrap(), GaussQ::new(q(1, 1), q(1, 1)));
        // sqrt(-3) does not exist in Q(i)
        assert!(GaussQ::from_int(-3).sqrt().is_none());
        // sqrt(9/4) = 3/2
        assert_eq!(GaussQ::from_rational(q(9, 4)).sqrt().unwrap(), GaussQ::from_rational(q(3, 2)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussQ::from_int(0).to_string(), "0");
        assert_eq!(GaussQ::i().to_string(), "i");
        assert_eq!(GaussQ::new(q(0, 1), q(-2, 1)).to_string(), "-2*i");
        assert_eq!(GaussQ::new(q(1, 2), q(-3, 4)).to_string(), "1/2-3/4*i");
    }
}
