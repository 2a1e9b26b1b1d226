//! Dense integer polynomials and cyclotomic polynomials.
//!
//! These carry the expanded Alexander polynomials. The canonical form used
//! for equality strips powers of t and makes the lowest coefficient
//! positive, which pins down the usual unit ambiguity.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Integer-coefficient univariate polynomial, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    /// t^n - 1.
    pub fn tn_minus_1(n: u64) -> Self {
        let mut c = vec![BigInt::zero(); n as usize + 1];
        c[0] = -BigInt::one();
        c[n as usize] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Exact division; `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dlen = divisor.coeffs.len();
        let lead = divisor.coeffs.last().unwrap();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dlen - 1].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigInt::zero() {
                return None;
            }
            let q = &top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &q * d;
                rem[k + j] -= t;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    /// Whether `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &IntPoly) -> bool {
        self.div_exact(divisor).is_some()
    }

    /// Canonical form: remove the t^k factor and make the lowest nonzero
    /// coefficient positive.
    pub fn canonical(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let mut c: Vec<BigInt> = self.coeffs[shift..].to_vec();
        if c[0].is_negative() {
            for x in &mut c {
                *x = -x.clone();
            }
        }
        IntPoly::from_coeffs(c)
    }
}

impl fmt::Display for IntPoly {
    /// Renders highest degree first, e.g. `t^4 - t^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// The d-th cyclotomic polynomial, computed by exact division of t^d - 1
/// by all lower-index cyclotomic factors.
pub fn cyclotomic(d: u64) -> Result<IntPoly> {
    if d == 0 {
        return Err(Error::InvalidInput("cyclotomic index must be >= 1".into()));
    }
    let mut acc = IntPoly::tn_minus_1(d);
    for e in 1..d {
        if d.is_multiple_of(e) {
            let phi_e = cyclotomic(e)?;
            acc = acc
                .div_exact(&phi_e)
                .ok_or_else(|| Error::Internal(format!("cyclotomic division failed at d={d}, e={e}")))?;
        }
    }
    Ok(acc)
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
