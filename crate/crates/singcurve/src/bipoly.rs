//! Sparse bivariate polynomials f(x, y) = sum a_{r,s} x^r y^s.
//!
//! The curve inputs live here. Keys are (x-degree, y-degree); no zero
//! coefficient is ever stored.

use crate::error::{Error, Result};
use crate::tower::{Elem, Tower};
use crate::upoly::UniPoly;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Elem)>) -> BiPoly {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
        BiPoly { terms: map }
    }

    pub fn monomial(i: u32, j: u32, c: Elem) -> BiPoly {
        Self::from_terms([((i, j), c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn insert_add(&mut self, t: &Tower, key: (u32, u32), c: Elem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Elem::zero);
        *entry = t.add(entry, &c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, t: &Tower, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert_add(t, *k, v.clone());
        }
        out
    }

    pub fn neg(&self, t: &Tower) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, t.neg(v))).collect(),
        }
    }

    pub fn sub(&self, t: &Tower, other: &BiPoly) -> BiPoly {
        self.add(t, &other.neg(t))
    }

    pub fn mul(&self, t: &Tower, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.insert_add(t, (i1 + i2, j1 + j2), t.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, t: &Tower, c: &Elem) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, t.mul(v, c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Swap the roles of x and y.
    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn eval_origin(&self) -> Elem {
        self.coeff(0, 0)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Total-degree order of the polynomial (minimum i+j over the support).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// f(0, y) as a univariate polynomial in y.
    pub fn section_x0(&self) -> UniPoly {
        let mut coeffs = Vec::new();
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                if coeffs.len() <= j as usize {
                    coeffs.resize(j as usize + 1, Elem::zero());
                }
                coeffs[j as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// f(x, 0) as a univariate polynomial in x.
    pub fn section_y0(&self) -> UniPoly {
        let mut coeffs = Vec::new();
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                if coeffs.len() <= i as usize {
                    coeffs.resize(i as usize + 1, Elem::zero());
                }
                coeffs[i as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// Largest k with x^k | f; 0 for the zero polynomial.
    pub fn x_valuation(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).min().unwrap_or(0)
    }

    /// Largest k with y^k | f; 0 for the zero polynomial.
    pub fn y_valuation(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).min().unwrap_or(0)
    }

    /// Divide by x^k exactly.
    pub fn shift_x_down(&self, k: u32) -> BiPoly {
        assert!(self.x_valuation() >= k);
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), v)| ((i - k, j), v.clone())).collect(),
        }
    }

    /// Divide by y^k exactly.
    pub fn shift_y_down(&self, k: u32) -> BiPoly {
        assert!(self.y_valuation() >= k);
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), v)| ((i, j - k), v.clone())).collect(),
        }
    }

    /// View as a polynomial in y with x-polynomial coefficients:
    /// index j -> coefficient of y^j.
    pub fn y_coefficients(&self) -> Vec<BiPoly> {
        let dy = self.deg_y() as usize;
        let mut out = vec![BiPoly::zero(); dy + 1];
        for (&(i, j), c) in &self.terms {
            out[j as usize].terms.insert((i, 0), c.clone());
        }
        out
    }

    pub fn partial_y(&self, t: &Tower) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j >= 1 {
                let f = Elem::from_int(j as i64);
                out.insert_add(t, (i, j - 1), t.mul(c, &f));
            }
        }
        out
    }

    /// Evaluate at x = value, returning a univariate polynomial in y.
    pub fn eval_x(&self, t: &Tower, x: &Elem) -> UniPoly {
        let mut coeffs: Vec<Elem> = vec![Elem::zero(); self.deg_y() as usize + 1];
        for (&(i, j), c) in &self.terms {
            let xi = t.pow(x, i as u64);
            let term = t.mul(c, &xi);
            coeffs[j as usize] = t.add(&coeffs[j as usize], &term);
        }
        UniPoly::new(coeffs)
    }

    /// Substitute a pair of finite power series x(t), y(t) given as sparse
    /// exponent -> coefficient maps, and return the resulting series in t
    /// up to (and including) order `order`.
    pub fn eval_series(
        &self,
        t: &Tower,
        x_part: &BTreeMap<u32, Elem>,
        y_part: &BTreeMap<u32, Elem>,
        order: u32,
    ) -> BTreeMap<u32, Elem> {
        use crate::series::series_mul;
        // x^i and y^j built by repeated truncated multiplication, cached
        // per exponent as we sweep the support in (i, j) order.
        let mut result: BTreeMap<u32, Elem> = BTreeMap::new();
        let mut x_pows: Vec<BTreeMap<u32, Elem>> = vec![one_series()];
        let mut y_pows: Vec<BTreeMap<u32, Elem>> = vec![one_series()];
        for (&(i, j), c) in &self.terms {
            while x_pows.len() <= i as usize {
                let next = series_mul(t, x_pows.last().unwrap(), x_part, order);
                x_pows.push(next);
            }
            while y_pows.len() <= j as usize {
                let next = series_mul(t, y_pows.last().unwrap(), y_part, order);
                y_pows.push(next);
            }
            let prod = series_mul(t, &x_pows[i as usize], &y_pows[j as usize], order);
            for (e, v) in prod {
                let entry = result.entry(e).or_insert_with(Elem::zero);
                *entry = t.add(entry, &t.mul(&v, c));
            }
        }
        result.retain(|_, v| !v.is_zero());
        result
    }
}

fn one_series() -> BTreeMap<u32, Elem> {
    let mut m = BTreeMap::new();
    m.insert(0, Elem::one());
    m
}

/// Squarefree reduction in y over the base field: returns the product of
/// the distinct irreducible y-dependent factors (content in x removed from
/// the gcd computation), together with a flag telling whether anything was
/// actually reduced. Only valid for polynomials with base coefficients.
pub fn squarefree_reduce_y(t: &Tower, f: &BiPoly) -> Result<(BiPoly, bool)> {
    let fy = f.partial_y(t);
    if fy.is_zero() {
        // No y at all: f is a polynomial in x alone.
        return Ok((f.clone(), false));
    }
    let g = bi_gcd_y(t, f, &fy)?;
    if g.deg_y() == 0 {
        return Ok((f.clone(), false));
    }
    let q = bi_div_exact_y(t, f, &g)?;
    Ok((q, true))
}

/// Gcd of two bivariate polynomials viewed in y over the rational function
/// field in x, returned primitive (content in x removed). Implemented with
/// pseudo-division, so it stays exact over the base coefficients.
pub fn bi_gcd_y(t: &Tower, a: &BiPoly, b: &BiPoly) -> Result<BiPoly> {
    let mut r0 = primitive_part_x(t, a)?;
    let mut r1 = primitive_part_x(t, b)?;
    if r0.deg_y() < r1.deg_y() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_zero() {
        let r = pseudo_rem_y(t, &r0, &r1)?;
        r0 = r1;
        r1 = if r.is_zero() { BiPoly::zero() } else { primitive_part_x(t, &r)? };
    }
    primitive_part_x(t, &r0)
}

/// Pseudo-remainder of a by b in y: lc_y(b)^(da-db+1) * a mod b.
fn pseudo_rem_y(t: &Tower, a: &BiPoly, b: &BiPoly) -> Result<BiPoly> {
    let da = a.deg_y();
    let db = b.deg_y();
    if da < db {
        return Ok(a.clone());
    }
    let b_coeffs = b.y_coefficients();
    let lc_b = b_coeffs.last().unwrap().clone();
    let mut rem = a.clone();
    for _ in 0..=(da - db) {
        let dr = rem.deg_y();
        if rem.is_zero() || dr < db {
            break;
        }
        let r_coeffs = rem.y_coefficients();
        let lead = r_coeffs.last().unwrap().clone();
        // rem = lc_b * rem - lead * y^(dr-db) * b
        let shifted = shift_y_up(&b.mul(t, &lead), dr - db);
        rem = rem.mul(t, &lc_b).sub(t, &shifted);
    }
    Ok(rem)
}

fn shift_y_up(f: &BiPoly, k: u32) -> BiPoly {
    BiPoly::from_terms(f.terms().map(|(&(i, j), c)| ((i, j + k), c.clone())))
}

/// Remove the gcd of the x-polynomial coefficients (content) of f viewed
/// in y. Coefficients must decide cleanly; base-field inputs always do.
fn primitive_part_x(t: &Tower, f: &BiPoly) -> Result<BiPoly> {
    if f.is_zero() {
        return Ok(BiPoly::zero());
    }
    let coeffs = f.y_coefficients();
    let mut content: Option<UniPoly> = None;
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        let u = bipoly_to_x_poly(c);
        content = Some(match content {
            None => u,
            Some(g) => g.gcd(t, &u)?,
        });
        if content.as_ref().is_some_and(|g| g.degree() == 0) {
            break;
        }
    }
    let content = content.unwrap();
    if content.degree() == 0 {
        // still normalize by the constant so results are reproducible
        let inv = t.invert(content.leading())?;
        return Ok(f.scale(t, &inv));
    }
    let mut out = BiPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let u = bipoly_to_x_poly(c);
        let (q, r) = u.divrem(t, &content)?;
        if !r.is_zero() {
            return Err(Error::Internal("content does not divide a coefficient".into()));
        }
        for (i, cc) in q.coeffs.iter().enumerate() {
            out.insert_add(t, (i as u32, j as u32), cc.clone());
        }
    }
    Ok(out)
}

fn bipoly_to_x_poly(f: &BiPoly) -> UniPoly {
    let mut coeffs = vec![Elem::zero(); f.deg_x() as usize + 1];
    for (&(i, _), c) in f.terms() {
        coeffs[i as usize] = c.clone();
    }
    UniPoly::new(coeffs)
}

/// Exact division in y (used after a gcd); fails loudly otherwise.
fn bi_div_exact_y(t: &Tower, a: &BiPoly, b: &BiPoly) -> Result<BiPoly> {
    // long division over the rational function field in x, clearing
    // denominators at the end. Desk-scale inputs keep this cheap: do it
    // with exact UniPoly arithmetic per y-coefficient.
    let da = a.deg_y();
    let db = b.deg_y();
    assert!(da >= db);
    let a_c: Vec<UniPoly> = a.y_coefficients().iter().map(bipoly_to_x_poly).collect();
    let b_c: Vec<UniPoly> = b.y_coefficients().iter().map(bipoly_to_x_poly).collect();
    // Synthetic division with rational-function quotients represented as
    // (num, shared denominator) pairs: multiply through by lc_b^k instead.
    // Because the division is exact, repeated pseudo-division by b with
    // its leading coefficient works: a * lc_b^(da-db+1) = q' * b, then
    // q = q' / lc_b^(da-db+1) must divide exactly coefficient-wise.
    let lc_b = b_c.last().unwrap().clone();
    let steps = (da - db + 1) as usize;
    let mut rem = a_c;
    let mut quot: Vec<UniPoly> = vec![UniPoly::zero(); steps];
    for k in (0..steps).rev() {
        let lead = rem[k + db as usize].clone();
        // rem <- lc_b * rem - lead * y^k * b, so the top term cancels
        for c in rem.iter_mut() {
            *c = c.mul(t, &lc_b);
        }
        for c in quot.iter_mut() {
            *c = c.mul(t, &lc_b);
        }
        quot[k] = quot[k].add(t, &lead);
        for j in 0..=db as usize {
            let s = lead.mul(t, &b_c[j]);
            rem[k + j] = rem[k + j].sub(t, &s);
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("inexact bivariate division".into()));
    }
    // divide each quotient coefficient by lc_b^steps
    let mut lc_pow = UniPoly::one();
    for _ in 0..steps {
        lc_pow = lc_pow.mul(t, &lc_b);
    }
    let mut out = BiPoly::zero();
    for (j, c) in quot.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.divrem(t, &lc_pow)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact bivariate division (denominator)".into()));
        }
        for (i, cc) in q.coeffs.iter().enumerate() {
            out.insert_add(t, (i as u32, j as u32), cc.clone());
        }
    }
    Ok(out)
}

/// Resultant of f and g with respect to y, as a univariate polynomial in
/// x. The Sylvester-style determinant is evaluated at enough rational
/// sample points and recovered by exact Lagrange interpolation; the matrix
/// dimensions are fixed by the nominal y-degrees, so sample points where a
/// leading coefficient vanishes are still valid evaluations of the same
/// polynomial.
pub fn resultant_y(t: &Tower, f: &BiPoly, g: &BiPoly) -> Result<UniPoly> {
    let df = f.deg_y() as usize;
    let dg = g.deg_y() as usize;
    if df == 0 || dg == 0 {
        return Err(Error::InvalidInput("resultant_y needs positive y-degrees".into()));
    }
    let bound = (f.deg_x() as usize) * dg + (g.deg_x() as usize) * df;
    let f_cols: Vec<BiPoly> = f.y_coefficients();
    let g_cols: Vec<BiPoly> = g.y_coefficients();
    let mut points: Vec<(Elem, Elem)> = Vec::new();
    for candidate in 1..=(bound as i64 + 1) {
        let x0 = Elem::from_int(candidate);
        let fv: Vec<Elem> = f_cols.iter().map(|c| c.eval_x(t, &x0).coeff(0)).collect();
        let gv: Vec<Elem> = g_cols.iter().map(|c| c.eval_x(t, &x0).coeff(0)).collect();
        let dim = df + dg;
        let mut mat = vec![vec![Elem::zero(); dim]; dim];
        for col in 0..dg {
            for (k, c) in fv.iter().enumerate() {
                mat[col][k + col] = c.clone();
            }
        }
        for col in 0..df {
            for (k, c) in gv.iter().enumerate() {
                mat[dg + col][k + col] = c.clone();
            }
        }
        let r = crate::upoly::determinant(t, mat)?;
        points.push((x0, r));
    }
    interpolate(t, &points)
}

/// Newton divided-difference interpolation: quadratic in the number of
/// points rather than cubic, which matters for resultant recovery.
fn interpolate(t: &Tower, points: &[(Elem, Elem)]) -> Result<UniPoly> {
    let n = points.len();
    // divided differences in place
    let mut coef: Vec<Elem> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = t.sub(&coef[i], &coef[i - 1]);
            let den = t.sub(&points[i].0, &points[i - level].0);
            coef[i] = t.mul(&num, &t.invert(&den)?);
        }
    }
    // Horner assembly of the Newton form
    let mut acc = UniPoly::zero();
    for i in (0..n).rev() {
        let shift = UniPoly::new(vec![t.neg(&points[i].0), Elem::one()]);
        acc = acc.mul(t, &shift);
        acc = acc.add(t, &UniPoly::new(vec![coef[i].clone()]));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_terms(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Elem::from_int(c))))
    }

    #[test]
    fn squarefree_reduction_detects_square() {
        let t = Tower::base();
        // (y - x)^2 = y^2 - 2xy + x^2
        let f = parse_terms(&[(0, 2, 1), (1, 1, -2), (2, 0, 1)]);
        let (red, changed) = squarefree_reduce_y(&t, &f).unwrap();
        assert!(changed);
        assert_eq!(red.deg_y(), 1);
        // y^2 - x^3 is already reduced
        let f = parse_terms(&[(0, 2, 1), (3, 0, -1)]);
        let (_, changed) = squarefree_reduce_y(&t, &f).unwrap();
        assert!(!changed);
    }

    #[test]
    fn resultant_in_y_of_cusp_pair() {
        let t = Tower::base();
        // f = x^2 - y^3, g = x^2 - y^5: ord_x Res_y = 6 matches the
        // intersection number of the two cusps.
        let f = parse_terms(&[(2, 0, 1), (0, 3, -1)]);
        let g = parse_terms(&[(2, 0, 1), (0, 5, -1)]);
        let r = resultant_y(&t, &f, &g).unwrap();
        assert!(!r.is_zero());
        let ord = r.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        assert_eq!(ord, 6);
    }

    #[test]
    fn series_substitution() {
        let t = Tower::base();
        // f = x^2 - y^3 at (t^3, t^2) vanishes identically
        let f = parse_terms(&[(2, 0, 1), (0, 3, -1)]);
        let x: BTreeMap<u32, Elem> = [(3u32, Elem::one())].into_iter().collect();
        let y: BTreeMap<u32, Elem> = [(2u32, Elem::one())].into_iter().collect();
        let s = f.eval_series(&t, &x, &y, 40);
        assert!(s.is_empty());
        // at (t^3, t^2 + t^4): x^2 - y^3 = -3t^8 - 3t^10 - t^12
        let y: BTreeMap<u32, Elem> =
            [(2u32, Elem::one()), (4u32, Elem::one())].into_iter().collect();
        let s = f.eval_series(&t, &x, &y, 40);
        assert_eq!(s.keys().copied().collect::<Vec<_>>(), vec![8, 10, 12]);
        assert_eq!(s[&8], Elem::from_int(-3));
    }
}
