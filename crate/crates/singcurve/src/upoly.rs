//! Univariate polynomials over tower elements: gcd machinery, the
//! resultant determinant, discriminants and squarefree parts.

use crate::error::{Error, Result};
use crate::tower::{ep_trim, Decide, Elem, Tower};

/// Dense univariate polynomial, lowest degree first. The leading
/// coefficient is structurally nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    pub coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Elem>) -> UniPoly {
        UniPoly { coeffs: ep_trim(coeffs) }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly { coeffs: vec![Elem::one()] }
    }

    pub fn from_ints(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| Elem::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Elem {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn add(&self, t: &Tower, other: &UniPoly) -> UniPoly {
        UniPoly { coeffs: t.ep_add(&self.coeffs, &other.coeffs) }
    }

    pub fn sub(&self, t: &Tower, other: &UniPoly) -> UniPoly {
        UniPoly { coeffs: t.ep_sub(&self.coeffs, &other.coeffs) }
    }

    pub fn mul(&self, t: &Tower, other: &UniPoly) -> UniPoly {
        UniPoly { coeffs: t.ep_mul(&self.coeffs, &other.coeffs) }
    }

    pub fn scale(&self, t: &Tower, c: &Elem) -> UniPoly {
        UniPoly { coeffs: t.ep_scale(&self.coeffs, c) }
    }

    pub fn derivative(&self, t: &Tower) -> UniPoly {
        UniPoly { coeffs: t.ep_derivative(&self.coeffs) }
    }

    pub fn eval(&self, t: &Tower, x: &Elem) -> Elem {
        t.ep_eval(&self.coeffs, x)
    }

    pub fn monic(&self, t: &Tower) -> Result<UniPoly> {
        Ok(UniPoly { coeffs: t.ep_monicize(&self.coeffs)? })
    }

    /// Quotient and remainder; requires an invertible leading coefficient
    /// in the divisor (splits otherwise).
    pub fn divrem(&self, t: &Tower, den: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if den.is_zero() {
            return Err(Error::InvalidInput("polynomial division by zero".into()));
        }
        let lead = den.leading().clone();
        if lead.is_one() {
            let (q, r) = t.ep_divrem_monic(&self.coeffs, &den.coeffs);
            return Ok((UniPoly { coeffs: q }, UniPoly { coeffs: r }));
        }
        let inv = t.invert(&lead)?;
        let denm = den.scale(t, &inv);
        let (q, r) = t.ep_divrem_monic(&self.coeffs, &denm.coeffs);
        Ok((UniPoly { coeffs: t.ep_scale(&q, &inv) }, UniPoly { coeffs: r }))
    }

    /// Monic gcd.
    pub fn gcd(&self, t: &Tower, other: &UniPoly) -> Result<UniPoly> {
        Ok(UniPoly { coeffs: t.ep_gcd(&self.coeffs, &other.coeffs)? })
    }

    /// Substitute `T -> c*T` (used for conjugating expansions).
    pub fn compose_scale(&self, t: &Tower, c: &Elem) -> UniPoly {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut p = Elem::one();
        for a in &self.coeffs {
            out.push(t.mul(a, &p));
            p = t.mul(&p, c);
        }
        UniPoly::new(out)
    }
}

/// Resultant of `f` (degree m) and `g` (degree n): the determinant of the
/// (m+n)-dimensional matrix whose first n columns carry the shifted
/// coefficients of `f` and last m columns those of `g`. Evaluated by
/// Gaussian elimination with exact division; pivoting decisions go through
/// the tower's zero test, so zero divisors split the computation rather
/// than corrupting it.
pub fn resultant(t: &Tower, f: &UniPoly, g: &UniPoly) -> Result<Elem> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::InvalidInput("resultant of two zero polynomials".into()));
    }
    if f.is_zero() || g.is_zero() {
        // A zero argument shares a factor with anything nonconstant.
        return Ok(Elem::zero());
    }
    let m = f.degree();
    let n = g.degree();
    if m == 0 && n == 0 {
        return Ok(Elem::one());
    }
    let dim = m + n;
    // Column-major layout mirrors the definition; determinants do not care.
    let mut mat = vec![vec![Elem::zero(); dim]; dim];
    for col in 0..n {
        for (k, c) in f.coeffs.iter().enumerate() {
            mat[col][k + col] = c.clone();
        }
    }
    for col in 0..m {
        for (k, c) in g.coeffs.iter().enumerate() {
            mat[n + col][k + col] = c.clone();
        }
    }
    determinant(t, mat)
}

/// Determinant over the tower. Matrices whose entries all live in the
/// base field go through fraction-free elimination (entries stay integral
/// Gaussian numbers, no pivots blow up into huge reduced fractions);
/// anything with extension coefficients falls back to decided pivoting.
pub fn determinant(t: &Tower, mat: Vec<Vec<Elem>>) -> Result<Elem> {
    if mat.iter().all(|row| row.iter().all(|e| e.as_base().is_some())) {
        return Ok(Elem::from_gauss(base_determinant_bareiss(&mat)));
    }
    determinant_pivoting(t, mat)
}

/// Fraction-free (Bareiss) determinant for base-field matrices. Rows are
/// scaled integral first; the scaling divides back out at the end.
fn base_determinant_bareiss(mat: &[Vec<Elem>]) -> crate::gauss::GaussQ {
    use crate::gauss::GaussQ;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;
    let dim = mat.len();
    if dim == 0 {
        return GaussQ::one();
    }
    let mut m: Vec<Vec<GaussQ>> = Vec::with_capacity(dim);
    let mut scale = BigRational::one();
    for row in mat {
        let mut l = BigInt::one();
        for e in row {
            let g = e.as_base().unwrap();
            l = num_integer::lcm(l.clone(), g.re.denom().clone());
            l = num_integer::lcm(l, g.im.denom().clone());
        }
        let lr = BigRational::from_integer(l);
        scale *= &lr;
        let f = GaussQ::from_rational(lr);
        m.push(row.iter().map(|e| &f * e.as_base().unwrap()).collect());
    }
    let mut sign_neg = false;
    let mut prev = GaussQ::one();
    for k in 0..dim {
        if m[k][k].is_zero() {
            match (k + 1..dim).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return GaussQ::zero(),
            }
        }
        let pivot = m[k][k].clone();
        let prev_inv = prev.inv().expect("previous pivot nonzero");
        for i in k + 1..dim {
            for j in k + 1..dim {
                let a = &(&pivot * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &a * &prev_inv;
            }
            m[i][k] = GaussQ::zero();
        }
        prev = pivot;
    }
    let mut det = m[dim - 1][dim - 1].clone();
    if sign_neg {
        det = -&det;
    }
    let unscale = GaussQ::from_rational(BigRational::one() / scale);
    &det * &unscale
}

/// Determinant by elimination with decided pivots.
#[allow(clippy::needless_range_loop)]
fn determinant_pivoting(t: &Tower, mut mat: Vec<Vec<Elem>>) -> Result<Elem> {
    let dim = mat.len();
    let mut det = Elem::one();
    let mut sign_flip = false;
    for k in 0..dim {
        // choose a decided-invertible pivot in column k
        let mut pivot = None;
        for r in k..dim {
            match t.decide(&mat[r][k])? {
                Decide::Zero => continue,
                Decide::Unit(inv) => {
                    pivot = Some((r, inv));
                    break;
                }
            }
        }
        let Some((r, inv)) = pivot else {
            return Ok(Elem::zero());
        };
        if r != k {
            mat.swap(r, k);
            sign_flip = !sign_flip;
        }
        det = t.mul(&det, &mat[k][k].clone());
        for r in k + 1..dim {
            if mat[r][k].is_zero() {
                continue;
            }
            let factor = t.mul(&mat[r][k], &inv);
            for c in k..dim {
                let s = t.mul(&factor, &mat[k][c]);
                mat[r][c] = t.sub(&mat[r][c], &s);
            }
        }
    }
    if sign_flip {
        det = t.neg(&det);
    }
    Ok(det)
}

/// Discriminant with the sign convention D(f) = (-1)^(m(m-1)/2) R(f, f').
pub fn discriminant(t: &Tower, f: &UniPoly) -> Result<Elem> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::InvalidInput("discriminant requires degree >= 1".into()));
    }
    let m = f.degree();
    let r = resultant(t, f, &f.derivative(t))?;
    if (m * (m - 1) / 2) % 2 == 1 {
        Ok(t.neg(&r))
    } else {
        Ok(r)
    }
}

/// f divided by gcd(f, f'): same roots, all simple.
pub fn squarefree_part(t: &Tower, f: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() {
        return Err(Error::InvalidInput("squarefree part of the zero polynomial".into()));
    }
    let g = f.gcd(t, &f.derivative(t))?;
    if g.is_zero() || g.degree() == 0 {
        return Ok(f.clone());
    }
    let (q, r) = f.divrem(t, &g)?;
    if !r.is_zero() {
        return Err(Error::Internal("gcd does not divide its polynomial".into()));
    }
    Ok(q)
}

/// Squarefree decomposition `f = prod_k factor_k ^ mult_k` (Yun), returned
/// as (multiplicity, factor) pairs, monic and pairwise coprime.
pub fn squarefree_decomposition(t: &Tower, f: &UniPoly) -> Result<Vec<(usize, UniPoly)>> {
    let f = f.monic(t)?;
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let df = f.derivative(t);
    let a = f.gcd(t, &df)?;
    let (mut b, r) = f.divrem(t, &a)?;
    debug_assert!(r.is_zero());
    let (mut c, r) = df.divrem(t, &a)?;
    debug_assert!(r.is_zero());
    let mut out = Vec::new();
    let mut k = 1usize;
    loop {
        // d = c - b'
        let d = c.sub(t, &b.derivative(t));
        if d.is_zero() {
            if b.degree() >= 1 {
                out.push((k, b.monic(t)?));
            }
            break;
        }
        let g = b.gcd(t, &d)?;
        if g.degree() >= 1 {
            out.push((k, g.clone()));
        }
        let (nb, r) = b.divrem(t, &g)?;
        debug_assert!(r.is_zero());
        let (nc, r) = d.divrem(t, &g)?;
        debug_assert!(r.is_zero());
        b = nb;
        c = nc;
        k += 1;
        if b.degree() == 0 {
            break;
        }
    }
    Ok(out)
}
