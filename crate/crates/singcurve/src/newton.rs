//! The fractional power series expansion of a plane curve germ: Newton
//! polygon, edge polynomials, the substitution step, the full expansion
//! driver with its branching over edges and roots, conjugacy grouping,
//! branch decomposition of a curve, and implicitization back to a
//! defining polynomial.

use crate::bipoly::{squarefree_reduce_y, BiPoly};
use crate::branch::{characteristic, Branch, Curve};
use crate::error::{Error, Result};
use crate::semigroup::semigroup_of;
use crate::series::{PuiseuxExpansion, SeriesMap, Trunc};
use crate::tower::{Decide, Elem, Session, Tower};
use crate::upoly::{squarefree_decomposition, UniPoly};
use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::Ratio;
use num_traits::Zero;

/// A compact edge of the Newton polygon: endpoints (r0, s0) and
/// (r0 + k a, s0 - k b) with a, b coprime positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub r0: u32,
    pub s0: u32,
    pub a: u32,
    pub b: u32,
    pub k: u32,
}

/// Support and ordered compact edges (by increasing b/a) of the Newton
/// polygon of f.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    pub support: Vec<(u32, u32)>,
    pub edges: Vec<NewtonEdge>,
}

/// Newton polygon of f. Preconditions: f nonzero, f(0,0) = 0 and x does
/// not divide f. Every support coefficient is decided against the tower,
/// so a zero divisor splits the computation instead of producing a
/// polygon that is wrong in one component.
pub fn newton_polygon(t: &Tower, f: &BiPoly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::InvalidInput("Newton polygon of the zero polynomial".into()));
    }
    if !f.coeff(0, 0).is_zero() {
        match t.decide(&f.coeff(0, 0))? {
            Decide::Zero => unreachable!("stored coefficients are nonzero"),
            Decide::Unit(_) => {
                return Err(Error::InvalidInput("the curve must pass through the origin".into()))
            }
        }
    }
    if f.x_valuation() > 0 {
        return Err(Error::InvalidInput("strip powers of x before the polygon".into()));
    }
    let mut support = Vec::new();
    for (&(i, j), c) in f.terms() {
        // uniformize: zero divisors split here
        t.decide(c)?;
        support.push((i, j));
    }
    // minimal s for each r
    let mut min_s: std::collections::BTreeMap<u32, u32> = Default::default();
    for &(r, s) in &support {
        min_s.entry(r).and_modify(|v| *v = (*v).min(s)).or_insert(s);
    }
    // lower-left convex hull from (0, m0) to the lowest point
    let pts: Vec<(i64, i64)> = min_s.iter().map(|(&r, &s)| (r as i64, s as i64)).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        // only points that strictly lower s can sit on the compact boundary
        if let Some(&last) = hull.last() {
            if p.1 >= last.1 {
                continue;
            }
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // pop b when it lies on or above the segment a -> p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut edges = Vec::new();
    for w in hull.windows(2) {
        let (r0, s0) = (w[0].0 as u32, w[0].1 as u32);
        let (r1, s1) = (w[1].0 as u32, w[1].1 as u32);
        let dr = r1 - r0;
        let ds = s0 - s1;
        let g = gcd(dr, ds);
        edges.push(NewtonEdge { r0, s0, a: dr / g, b: ds / g, k: g });
    }
    // natural hull order has decreasing slope b/a; report increasing
    edges.reverse();
    Ok(NewtonPolygon { support, edges })
}

/// The edge polynomial phi(T) = sum_l u_l T^(k-l) with u_l the coefficient
/// at (r0 + l a, s0 - l b).
pub fn edge_polynomial(f: &BiPoly, edge: &NewtonEdge) -> UniPoly {
    let k = edge.k;
    let mut coeffs = vec![Elem::zero(); k as usize + 1];
    for l in 0..=k {
        let c = f.coeff(edge.r0 + l * edge.a, edge.s0 - l * edge.b);
        coeffs[(k - l) as usize] = c;
    }
    UniPoly::new(coeffs)
}

/// One substitution step: f1(x, y) = f(x^b, x^a (c0 + y)) / x^(b r0 + a s0).
/// The division must be exact; anything else indicates wrong edge data.
pub fn newton_step(t: &Tower, f: &BiPoly, edge: &NewtonEdge, c0: &Elem) -> Result<BiPoly> {
    let mut out = BiPoly::zero();
    for (&(r, s), coeff) in f.terms() {
        let base = edge.b * r + edge.a * s;
        // (c0 + y)^s expanded binomially
        let mut binom = BigInt::from(1);
        let mut c0_pow = t.pow(c0, s as u64);
        let c0_inv = if s > 0 { Some(t.invert(c0)?) } else { None };
        for j in 0..=s {
            let factor = Elem::from_rational(num_rational::BigRational::from_integer(binom.clone()));
            let term = t.mul(coeff, &t.mul(&factor, &c0_pow));
            out.insert_add(t, (base, j), term);
            if j < s {
                // update binomial C(s, j+1) and c0^(s-j-1)
                binom = binom * BigInt::from((s - j) as i64) / BigInt::from((j + 1) as i64);
                c0_pow = t.mul(&c0_pow, c0_inv.as_ref().unwrap());
            }
        }
    }
    let shift = edge.b * edge.r0 + edge.a * edge.s0;
    if out.x_valuation() < shift {
        return Err(Error::Internal(format!(
            "substitution step not divisible by x^{shift} (edge data inconsistent)"
        )));
    }
    Ok(out.shift_x_down(shift))
}

/// Raw expansion output: the fractional power series solutions plus the
/// multiplicity of a vertical-line component x = 0 when x divides f.
#[derive(Clone, Debug)]
pub struct ExpandOutput {
    pub solutions: Vec<PuiseuxExpansion>,
    pub vertical_multiplicity: u32,
}

/// All Newton-Puiseux solutions of f(x, y) = 0 around the origin, each
/// complete up to x-order `order` (t-order `order * m`) unless it
/// terminates exactly earlier. Solutions of the same curve branch related
/// by t -> zeta t are NOT merged here; see [`branches_of`].
pub fn expand(session: &mut Session, f: &BiPoly, order: u32) -> Result<ExpandOutput> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot expand the zero polynomial".into()));
    }
    if !f.coeff(0, 0).is_zero() {
        match session.tower.decide(&f.coeff(0, 0))? {
            Decide::Zero => unreachable!(),
            Decide::Unit(_) => {
                return Err(Error::InvalidInput("the curve must pass through the origin".into()))
            }
        }
    }
    let xv = f.x_valuation();
    let f = if xv > 0 { f.shift_x_down(xv) } else { f.clone() };
    let mut solutions = Vec::new();
    if !f.coeff(0, 0).is_zero() && session.tower.is_unit(&f.coeff(0, 0))? {
        // f was a pure power of x times a unit: only the vertical line
        return Ok(ExpandOutput { solutions, vertical_multiplicity: xv });
    }
    let nu = Ratio::from_integer(order as i64);
    let raw = solve(session, &f, nu)?;
    for r in raw {
        let trunc = if r.exact { Trunc::Exact } else { Trunc::Order(order.saturating_mul(r.m)) };
        solutions.push(PuiseuxExpansion {
            ram_index: r.m,
            terms: r.terms,
            trunc,
            multiplicity: r.mult,
        });
    }
    Ok(ExpandOutput { solutions, vertical_multiplicity: xv })
}

struct RawSol {
    m: u32,
    terms: SeriesMap,
    exact: bool,
    mult: u32,
}

/// Recursive driver of the expansion. `nu` is the remaining depth target
/// in x-order units of the current variable.
fn solve(session: &mut Session, f: &BiPoly, nu: Ratio<i64>) -> Result<Vec<RawSol>> {
    let mut out: Vec<RawSol> = Vec::new();
    let mut f = f.clone();
    // y | f: the solution y = 0, exactly
    let yv = f.y_valuation();
    if yv > 0 {
        out.push(RawSol { m: 1, terms: SeriesMap::new(), exact: true, mult: yv });
        f = f.shift_y_down(yv);
    }
    if f.num_terms() == 0 {
        return Ok(out);
    }
    {
        let c00 = f.coeff(0, 0);
        if !c00.is_zero() && session.tower.is_unit(&c00)? {
            // unit at the origin: no further series through 0
            return Ok(out);
        }
    }
    if nu < Ratio::zero() {
        // depth exhausted before classifying this subtree
        let m0 = decided_order(&session.tower, &f.section_x0())?.unwrap_or(0);
        out.push(RawSol { m: 1, terms: SeriesMap::new(), exact: false, mult: m0 });
        return Ok(out);
    }
    let m0 = decided_order(&session.tower, &f.section_x0())?
        .ok_or_else(|| Error::Internal("x divides a reduced expansion step".into()))?;
    let polygon = newton_polygon(&session.tower, &f)?;
    for edge in &polygon.edges {
        let alpha = Ratio::new(edge.a as i64, edge.b as i64);
        if alpha > nu {
            // everything on this edge starts beyond the depth target
            out.push(RawSol {
                m: 1,
                terms: SeriesMap::new(),
                exact: false,
                mult: edge.k * edge.b,
            });
            continue;
        }
        let phi = edge_polynomial(&f, edge);
        let parts = squarefree_decomposition(&session.tower, &phi)?;
        for (multiplicity, part) in parts {
            if part.degree() == 0 {
                continue;
            }
            // enumerate the roots of this squarefree factor one by one
            let mut q = part.clone();
            while !q.is_zero() && q.degree() >= 1 {
                let root = session.adjoin_root(&q.coeffs)?;
                let lin = UniPoly::new(vec![session.tower.neg(&root), Elem::one()]);
                let (qq, rr) = q.divrem(&session.tower, &lin)?;
                if !rr.is_zero() {
                    return Err(Error::Internal("deflation by an adjoined root failed".into()));
                }
                q = qq;
                let c0 = if edge.b == 1 {
                    root.clone()
                } else {
                    // a b-th root of the edge root
                    let mut p = vec![session.tower.neg(&root)];
                    p.extend(std::iter::repeat_n(Elem::zero(), edge.b as usize - 1));
                    p.push(Elem::one());
                    session.adjoin_root(&p)?
                };
                let f1 = newton_step(&session.tower, &f, edge, &c0)?;
                // monotone decrease of the regularity order along b > 1 steps
                if edge.b > 1 {
                    let m1 = decided_order(&session.tower, &f1.section_x0())?
                        .unwrap_or(u32::MAX);
                    if m1 >= m0 {
                        return Err(Error::Internal(
                            "regularity order failed to decrease across a ramified step".into(),
                        ));
                    }
                }
                let nu1 = nu * Ratio::from_integer(edge.b as i64)
                    - Ratio::from_integer(edge.a as i64);
                if nu1 < Ratio::zero() {
                    // keep the leading term; the tail is beyond the target
                    let mut terms = SeriesMap::new();
                    terms.insert(edge.a, c0.clone());
                    out.push(RawSol {
                        m: edge.b,
                        terms,
                        exact: false,
                        mult: multiplicity as u32,
                    });
                    continue;
                }
                let subs = solve(session, &f1, nu1)?;
                for sub in subs {
                    let m = edge.b * sub.m;
                    let mut terms = SeriesMap::new();
                    terms.insert(edge.a * sub.m, c0.clone());
                    for (&rho, c) in &sub.terms {
                        terms.insert(edge.a * sub.m + rho, c.clone());
                    }
                    out.push(RawSol { m, terms, exact: sub.exact, mult: sub.mult });
                }
            }
        }
    }
    Ok(out)
}

/// Order of a polynomial with every coefficient decided against the
/// tower: the index of the first coefficient that is invertible in every
/// component; zero divisors split instead of lying in one component.
fn decided_order(t: &Tower, p: &UniPoly) -> Result<Option<u32>> {
    for (idx, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match t.decide(c)? {
            crate::tower::Decide::Zero => continue,
            crate::tower::Decide::Unit(_) => return Ok(Some(idx as u32)),
        }
    }
    Ok(None)
}

/// Merge Newton-Puiseux solutions that parametrize the same branch, i.e.
/// that differ by a reparametrization t -> zeta t with zeta^m = 1.
/// Ambiguities caused by truncation surface as `NeedDepth`. `tie_bound`
/// (in t-units) certifies equality when two truncated expansions agree at
/// least that deep; pass the separation bound of the defining polynomial.
pub fn group_conjugates(
    session: &mut Session,
    sols: Vec<PuiseuxExpansion>,
    tie_bound: Option<u32>,
) -> Result<Vec<PuiseuxExpansion>> {
    let mut classes: Vec<PuiseuxExpansion> = Vec::new();
    'next: for sol in sols {
        for rep in &classes {
            if expansions_conjugate(session, rep, &sol, tie_bound)?.is_some() {
                continue 'next;
            }
        }
        classes.push(sol);
    }
    Ok(classes)
}

/// Separation bound of a defining polynomial, in t-units: two distinct
/// branches of f must have every pro-branch pair differ at an x-exponent
/// at most deg_x(resultant of f with its y-derivative), so agreement of
/// expansions beyond m times that certifies equality.
pub fn separation_bound(f: &BiPoly) -> u32 {
    let dx = f.deg_x().max(1);
    let dy = f.deg_y().max(1);
    dy.saturating_mul(dx.saturating_mul(2 * dy)) + dy + 2
}

/// Combined tie bound for comparing branches of two polynomial-defined
/// curves: past this depth (t-units), agreeing expansions are equal germs.
pub fn pair_tie_bound(f1: &BiPoly, f2: &BiPoly) -> u32 {
    let r = f1.deg_x() * f2.deg_y() + f2.deg_x() * f1.deg_y();
    (f1.deg_y().max(f2.deg_y()).max(1)) * (r + 1) + 2
}

/// Decide whether two expansions with the same ramification index are
/// related by t -> zeta t; returns the witness zeta. Truncated pairs that
/// agree on their whole known range are certified equal only past
/// `tie_bound`; otherwise they raise `NeedDepth`.
pub fn expansions_conjugate(
    session: &mut Session,
    e1: &PuiseuxExpansion,
    e2: &PuiseuxExpansion,
    tie_bound: Option<u32>,
) -> Result<Option<Elem>> {
    if e1.ram_index != e2.ram_index {
        return Ok(None);
    }
    let m = e1.ram_index;
    let valid = match (e1.trunc, e2.trunc) {
        (Trunc::Exact, Trunc::Exact) => None,
        (a, b) => a.min(b).valid_to(),
    };
    let cut = |e: &PuiseuxExpansion| -> Vec<u32> {
        e.support()
            .into_iter()
            .filter(|&r| valid.is_none_or(|v| r <= v))
            .collect()
    };
    let s1 = cut(e1);
    let s2 = cut(e2);
    if s1 != s2 {
        return Ok(None);
    }
    // a verdict reached only within a truncated window needs either the
    // tie bound or more depth
    let undecided = |what: &str| -> Error {
        let v = valid.unwrap_or(0);
        Error::NeedDepth {
            suggested: (v / m.max(1)) * 2 + 8,
            what: what.into(),
        }
    };
    let window_certified =
        valid.is_none_or(|v| tie_bound.is_some_and(|b| v >= b));
    if valid.is_some() && s1.iter().fold(m, |g, &r| gcd(g, r)) != 1 && !window_certified {
        // cannot pin down zeta before the supports are rich enough
        return Err(undecided("pinning a conjugacy witness on a short expansion"));
    }
    if s1.is_empty() {
        if m == 1 && (valid.is_none() || window_certified) {
            return Ok(Some(Elem::one()));
        }
        return Err(undecided("comparing term-free truncated expansions"));
    }
    // zeta is pinned down by 1 = lambda_0 m + sum lambda_j r_j:
    // zeta = prod (b_j / a_j)^(lambda_j); exponents matter only mod m.
    let coeffs = bezout_chain_mod(m as i64, &s1.iter().map(|&r| r as i64).collect::<Vec<_>>());
    let t = session.tower.clone();
    let mut zeta = Elem::one();
    for (idx, &r) in s1.iter().enumerate() {
        let lambda = coeffs[idx];
        if lambda == 0 {
            continue;
        }
        let a = &e1.terms[&r];
        let b = &e2.terms[&r];
        let ratio = t.mul(b, &t.invert(a)?);
        zeta = t.mul(&zeta, &t.pow(&ratio, lambda as u64));
    }
    // verify zeta^m = 1 and coefficient-wise conjugacy
    if !t.pow(&zeta, m as u64).is_one() {
        return Ok(None);
    }
    for &r in &s1 {
        let diff = t.sub(&t.mul(&e1.terms[&r], &t.pow(&zeta, r as u64)), &e2.terms[&r]);
        if diff.is_zero() {
            continue;
        }
        match t.decide(&diff)? {
            Decide::Zero => continue,
            Decide::Unit(_) => return Ok(None),
        }
    }
    if !window_certified {
        return Err(undecided("expansions agree to the whole known depth"));
    }
    Ok(Some(zeta))
}

/// Nonnegative Bezout coefficients modulo m: lambda_j with
/// gcd(m, r_1..r_s) = lambda_0 m + sum lambda_j r_j for some lambda_0.
fn bezout_chain_mod(m: i64, rs: &[i64]) -> Vec<i64> {
    let mut g = m;
    let mut coeffs: Vec<i128> = Vec::new();
    for &r in rs {
        if g == 1 {
            coeffs.push(0);
            continue;
        }
        let (ng, u, v) = ext_gcd(g, r);
        for c in coeffs.iter_mut() {
            *c = (*c * u as i128).rem_euclid(m as i128);
        }
        coeffs.push((v as i128).rem_euclid(m as i128));
        g = ng;
    }
    coeffs.into_iter().map(|c| c as i64).collect()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Decompose a reduced curve into branches: one normalized branch per
/// conjugacy class, with the characteristic complete and the expansion at
/// least conductor-deep. The caller drives depth through `order`; this
/// function raises `NeedDepth` when the order is insufficient.
pub fn branches_of(session: &mut Session, f: &BiPoly, order: u32) -> Result<Curve> {
    // reduction checks: repeated x factors and repeated y-factors through
    // the origin are rejected (reduce first)
    if f.x_valuation() >= 2 {
        return Err(Error::NotReduced("x^2 divides f; strip repeated factors first".into()));
    }
    if has_repeated_factor_through_origin(session, f)? {
        return Err(Error::NotReduced(
            "f has a repeated factor through the origin; apply squarefree reduction first".into(),
        ));
    }
    let expanded = expand(session, f, order)?;
    let mut sols = expanded.solutions;
    for s in &sols {
        if s.multiplicity > 1 {
            return Err(Error::NeedDepth {
                suggested: order * 2,
                what: "resolving coincident expansions of a reduced curve".into(),
            });
        }
    }
    // degree accounting: the sum of ramification indices must reach the
    // y-order of the x-stripped polynomial
    let weier_order = {
        let g = if f.x_valuation() > 0 { f.shift_x_down(f.x_valuation()) } else { f.clone() };
        if g.coeff(0, 0).is_zero() && !g.is_zero() {
            decided_order(&session.tower, &g.section_x0())?.unwrap_or(0)
        } else {
            0
        }
    };
    let total: u32 = sols.iter().map(|s| s.ram_index * s.multiplicity).sum();
    if total != weier_order {
        return Err(Error::Internal(format!(
            "degree accounting failed: expansions sum to {total}, expected {weier_order}"
        )));
    }
    // normalize before conjugacy grouping so the witness root of unity is
    // pinned down by the exponents
    let mut normd = Vec::with_capacity(sols.len());
    for s in sols.drain(..) {
        normd.push(crate::branch::normalize_expansion(&s)?);
    }
    normd.sort_by_key(|s| (s.ord_y().unwrap_or(u32::MAX), s.ram_index, s.support()));
    let classes = group_conjugates(session, normd.clone(), Some(separation_bound(f)))?;
    if classes.len() != normd.len() {
        return Err(Error::Internal(
            "conjugate expansions emitted twice for a reduced curve".into(),
        ));
    }
    let mut branches = Vec::new();
    if expanded.vertical_multiplicity >= 1 {
        let mut v = Branch::vertical_line();
        v.source = Some(f.clone());
        branches.push(v);
    }
    for class in classes {
        let cap = (order * class.ram_index).max(24);
        let mut b = Branch::from_expansion(session, &class, cap)?;
        b.source = Some(f.clone());
        // the characteristic must be complete, and the expansion at least
        // conductor-deep, before the branch is usable downstream
        let ch = characteristic(&b)?;
        let cond = semigroup_of(&ch).conductor;
        if let Some(v) = b.expansion.trunc.valid_to() {
            if (v as u64) < cond + 1 {
                return Err(Error::NeedDepth {
                    suggested: order * 2 + (cond as u32 / b.expansion.ram_index.max(1)) + 2,
                    what: "reaching conductor depth".into(),
                });
            }
        }
        branches.push(b);
    }
    Ok(Curve { branches, defining_poly: Some(f.clone()), order_used: order })
}

/// True when gcd(f, df/dy) has a factor vanishing at the origin, i.e. the
/// germ of f is not reduced.
pub fn has_repeated_factor_through_origin(session: &mut Session, f: &BiPoly) -> Result<bool> {
    let t = &session.tower;
    let fy = f.partial_y(t);
    if fy.is_zero() {
        // f depends on x alone; reduced iff x-valuation <= 1 (checked by
        // the caller)
        return Ok(false);
    }
    let g = crate::bipoly::bi_gcd_y(t, f, &fy)?;
    if g.deg_y() == 0 {
        return Ok(false);
    }
    match t.decide(&g.coeff(0, 0))? {
        Decide::Zero => Ok(true),
        Decide::Unit(_) => Ok(g.coeff(0, 0).is_zero()),
    }
}

/// Reduce a defining polynomial: strip repeated x powers and divide out
/// the y-gcd with the derivative. Returns the reduced polynomial and
/// whether anything changed.
pub fn reduce_defining_poly(session: &mut Session, f: &BiPoly) -> Result<(BiPoly, bool)> {
    let mut changed = false;
    let mut g = f.clone();
    let xv = g.x_valuation();
    if xv >= 2 {
        g = g.shift_x_down(xv - 1);
        changed = true;
    }
    let (h, ch) = squarefree_reduce_y(&session.tower, &g)?;
    if ch {
        changed = true;
        g = h;
    }
    Ok((g, changed))
}

/// Implicitization: the determinant of the m x m homogeneous system built
/// from the parametrization, an irreducible defining polynomial of the
/// branch, monic of degree m in y. Swapped branches yield the polynomial
/// in the input frame by exchanging the variables afterwards.
pub fn implicitize(t: &Tower, b: &Branch) -> Result<BiPoly> {
    if b.is_vertical_line() {
        return Ok(BiPoly::monomial(1, 0, Elem::one()));
    }
    let d = implicitize_expansion(t, &b.expansion)?;
    if b.swapped {
        Ok(d.swap_xy())
    } else {
        Ok(d)
    }
}

/// The determinant construction for an expansion (t^m, phi(t)) with a
/// polynomial (finite) y-part: rows express t^a y in the basis
/// 1, t, ..., t^(m-1) over polynomials in x.
#[allow(clippy::needless_range_loop)] // the homogeneous system is index arithmetic
pub fn implicitize_expansion(t: &Tower, exp: &PuiseuxExpansion) -> Result<BiPoly> {
    if exp.exponent_gcd() > 1 && !exp.terms.is_empty() {
        return Err(Error::InvalidInput(
            "implicitization requires an injective parametrization; normalize first".into(),
        ));
    }
    let m = exp.ram_index;
    // phi_s(x) = sum over r = m q + s of a_r x^q
    let mut phi: Vec<BiPoly> = vec![BiPoly::zero(); m as usize];
    for (&r, c) in &exp.terms {
        let s = (r % m) as usize;
        let q = r / m;
        phi[s] = phi[s].add(t, &BiPoly::monomial(q, 0, c.clone()));
    }
    let n = m as usize;
    let mut mat = vec![vec![BiPoly::zero(); n]; n];
    for a in 0..n {
        mat[a][a] = mat[a][a].add(t, &BiPoly::monomial(0, 1, Elem::one()));
        for s in 0..n {
            if phi[s].is_zero() {
                continue;
            }
            let col = (a + s) % n;
            let mut contrib = phi[s].clone();
            if a + s >= n {
                contrib = contrib.mul(t, &BiPoly::monomial(1, 0, Elem::one()));
            }
            mat[a][col] = mat[a][col].sub(t, &contrib);
        }
    }
    Ok(bipoly_determinant(t, &mat))
}

/// Determinant of a small matrix of bivariate polynomials by Laplace
/// expansion with memoization on column subsets.
fn bipoly_determinant(t: &Tower, mat: &[Vec<BiPoly>]) -> BiPoly {
    let n = mat.len();
    if n == 0 {
        return BiPoly::monomial(0, 0, Elem::one());
    }
    let mut memo: std::collections::HashMap<u64, BiPoly> = Default::default();
    fn rec(
        t: &Tower,
        mat: &[Vec<BiPoly>],
        row: usize,
        cols: u64,
        memo: &mut std::collections::HashMap<u64, BiPoly>,
    ) -> BiPoly {
        let n = mat.len();
        if row == n {
            return BiPoly::monomial(0, 0, Elem::one());
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = BiPoly::zero();
        let mut sign_neg = false;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            if !mat[row][c].is_zero() {
                let sub = rec(t, mat, row + 1, cols | (1 << c), memo);
                let term = mat[row][c].mul(t, &sub);
                acc = if sign_neg { acc.sub(t, &term) } else { acc.add(t, &term) };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(t, mat, 0, 0, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::resolve_splits;

    fn poly(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Elem::from_int(c))))
    }

    #[test]
    fn polygon_worked_example() {
        // f = x^4 + 3x^2 y + x^2 - y^3: single edge (0,3)-(2,0), (a,b,k) = (2,3,1)
        let t = Tower::base();
        let f = poly(&[(4, 0, 1), (2, 1, 3), (2, 0, 1), (0, 3, -1)]);
        let p = newton_polygon(&t, &f).unwrap();
        assert_eq!(p.edges, vec![NewtonEdge { r0: 0, s0: 3, a: 2, b: 3, k: 1 }]);
        // its edge polynomial: phi(T) = -T + 1
        let phi = edge_polynomial(&f, &p.edges[0]);
        assert_eq!(phi, UniPoly::from_ints(&[1, -1]));
    }

    #[test]
    fn polygon_cusp_and_line() {
        let t = Tower::base();
        // y^2 - x^3: edge (0,2)-(3,0) with (a,b,k) = (3,2,1)
        let f = poly(&[(0, 2, 1), (3, 0, -1)]);
        let p = newton_polygon(&t, &f).unwrap();
        assert_eq!(p.edges, vec![NewtonEdge { r0: 0, s0: 2, a: 3, b: 2, k: 1 }]);
        let phi = edge_polynomial(&f, &p.edges[0]);
        assert_eq!(phi, UniPoly::from_ints(&[-1, 1])); // T - 1
        // y - x: edge (0,1)-(1,0), (1,1,1)
        let f = poly(&[(0, 1, 1), (1, 0, -1)]);
        let p = newton_polygon(&t, &f).unwrap();
        assert_eq!(p.edges, vec![NewtonEdge { r0: 0, s0: 1, a: 1, b: 1, k: 1 }]);
        // y^2 + x^2: the edge (0,2)-(2,0) has coprime direction (1,1) and
        // k = 2, so phi(T) = T^2 + 1 with roots +-i (the same two smooth
        // branches y = +-ix either way)
        let f = poly(&[(0, 2, 1), (2, 0, 1)]);
        let p = newton_polygon(&t, &f).unwrap();
        assert_eq!(p.edges, vec![NewtonEdge { r0: 0, s0: 2, a: 1, b: 1, k: 2 }]);
        let phi = edge_polynomial(&f, &p.edges[0]);
        assert_eq!(phi, UniPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn newton_step_worked_example() {
        // c0 = 1 on the single edge of the worked example gives
        // f1 = x^6 + 3x^2 + 3x^2 y - 3y - 3y^2 - y^3
        let t = Tower::base();
        let f = poly(&[(4, 0, 1), (2, 1, 3), (2, 0, 1), (0, 3, -1)]);
        let edge = NewtonEdge { r0: 0, s0: 3, a: 2, b: 3, k: 1 };
        let f1 = newton_step(&t, &f, &edge, &Elem::one()).unwrap();
        let expect = poly(&[(6, 0, 1), (2, 0, 3), (2, 1, 3), (0, 1, -3), (0, 2, -3), (0, 3, -1)]);
        assert_eq!(f1, expect);
        // y^2 - x^3 with c0 = 1: 2y + y^2
        let f = poly(&[(0, 2, 1), (3, 0, -1)]);
        let edge = NewtonEdge { r0: 0, s0: 2, a: 3, b: 2, k: 1 };
        let f1 = newton_step(&t, &f, &edge, &Elem::one()).unwrap();
        assert_eq!(f1, poly(&[(0, 1, 2), (0, 2, 1)]));
        // y - x with c0 = 1: y
        let f = poly(&[(0, 1, 1), (1, 0, -1)]);
        let edge = NewtonEdge { r0: 0, s0: 1, a: 1, b: 1, k: 1 };
        let f1 = newton_step(&t, &f, &edge, &Elem::one()).unwrap();
        assert_eq!(f1, poly(&[(0, 1, 1)]));
    }

    #[test]
    fn expand_terminates_exactly_on_worked_example() {
        // x = t^3, y = t^2 + t^4 exactly
        resolve_splits(|s| {
            let f = poly(&[(4, 0, 1), (2, 1, 3), (2, 0, 1), (0, 3, -1)]);
            let out = expand(s, &f, 12)?;
            assert_eq!(out.vertical_multiplicity, 0);
            assert_eq!(out.solutions.len(), 1);
            let sol = &out.solutions[0];
            assert!(sol.is_exact());
            assert_eq!(sol.ram_index, 3);
            assert_eq!(sol.support(), vec![2, 4]);
            assert!(sol.terms[&2].is_one());
            assert!(sol.terms[&4].is_one());
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn expand_cusp() {
        resolve_splits(|s| {
            let f = poly(&[(2, 0, 1), (0, 3, -1)]); // x^2 - y^3
            let out = expand(s, &f, 12)?;
            assert_eq!(out.solutions.len(), 1);
            let sol = &out.solutions[0];
            assert!(sol.is_exact());
            assert_eq!(sol.ram_index, 3);
            assert_eq!(sol.support(), vec![2]);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn expand_vertical_line() {
        resolve_splits(|s| {
            let f = poly(&[(1, 0, 1)]); // f = x
            let out = expand(s, &f, 8)?;
            assert_eq!(out.vertical_multiplicity, 1);
            assert!(out.solutions.is_empty());
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn vanishing_to_truncation() {
        // substituting each expansion back into f leaves nothing at or
        // below the truncation order
        resolve_splits(|s| {
            let f = poly(&[(0, 4, 1), (1, 2, -2), (3, 1, 1), (2, 0, 1)]);
            let order = 8;
            let out = expand(s, &f, order)?;
            assert!(!out.solutions.is_empty());
            for sol in &out.solutions {
                let x: SeriesMap = [(sol.ram_index, Elem::one())].into_iter().collect();
                let cap = order * sol.ram_index;
                let val = f.eval_series(&s.tower, &x, &sol.terms, cap);
                assert!(
                    val.keys().next().is_none_or(|&k| k > cap.saturating_sub(sol.ram_index)),
                    "expansion fails to cancel f deeply enough: {val:?}"
                );
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn branches_of_three_branch_example() {
        // f = -4x^4 - x^2 y^2 + 4 x^2 y^3 + y^5: the cusp branch of
        // x^2 - y^3 plus the two smooth branches y = 2ix and y = -2ix
        resolve_splits(|s| {
            let f = poly(&[(4, 0, -4), (2, 2, -1), (2, 3, 4), (0, 5, 1)]);
            let curve = branches_of(s, &f, 12)?;
            assert_eq!(curve.branches.len(), 3);
            let mut mults: Vec<u32> = curve.branches.iter().map(|b| b.multiplicity()).collect();
            mults.sort();
            assert_eq!(mults, vec![1, 1, 2]);
            let swapped: Vec<bool> = curve.branches.iter().map(|b| b.swapped).collect();
            assert_eq!(swapped.iter().filter(|&&x| x).count(), 1);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn branches_of_cube_example() {
        // y^3 + x^6 = (y + x^2)(y - w x^2)(y - conj(w) x^2)
        resolve_splits(|s| {
            let f = poly(&[(0, 3, 1), (6, 0, 1)]);
            let curve = branches_of(s, &f, 12)?;
            assert_eq!(curve.branches.len(), 3);
            for b in &curve.branches {
                assert_eq!(b.multiplicity(), 1);
                assert_eq!(b.expansion.support(), vec![2]);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn branches_rejects_non_reduced() {
        resolve_splits(|s| {
            // (y - x)^2
            let f = poly(&[(0, 2, 1), (1, 1, -2), (2, 0, 1)]);
            match branches_of(s, &f, 8) {
                Err(Error::NotReduced(_)) => Ok(()),
                other => panic!("expected NotReduced, got {other:?}"),
            }
        })
        .unwrap();
    }

    #[test]
    fn implicitize_golden() {
        let t = Tower::base();
        // (t^3, t^2 + t^4) -> y^3 - 3x^2 y - x^4 - x^2 (up to sign)
        let terms: SeriesMap =
            [(2u32, Elem::one()), (4u32, Elem::one())].into_iter().collect();
        let exp = PuiseuxExpansion::new(3, terms, Trunc::Exact);
        let d = implicitize_expansion(&t, &exp).unwrap();
        let expect = poly(&[(0, 3, 1), (2, 1, -3), (4, 0, -1), (2, 0, -1)]);
        assert!(d == expect || d == expect.neg(&t), "got {d:?}");
        // (t^2, t^3) -> y^2 - x^3 up to sign
        let terms: SeriesMap = [(3u32, Elem::one())].into_iter().collect();
        let exp = PuiseuxExpansion::new(2, terms, Trunc::Exact);
        let d = implicitize_expansion(&t, &exp).unwrap();
        let expect = poly(&[(0, 2, 1), (3, 0, -1)]);
        assert!(d == expect || d == expect.neg(&t), "got {d:?}");
        // (t, ct) -> y - cx
        let terms: SeriesMap = [(1u32, Elem::from_int(5))].into_iter().collect();
        let exp = PuiseuxExpansion::new(1, terms, Trunc::Exact);
        let d = implicitize_expansion(&t, &exp).unwrap();
        let expect = poly(&[(0, 1, 1), (1, 0, -5)]);
        assert!(d == expect || d == expect.neg(&t), "got {d:?}");
    }

    #[test]
    fn implicitize_order_law() {
        // ord D = min(m, ord phi)
        let t = Tower::base();
        for (m, terms) in [
            (3u32, vec![(2u32, 1i64), (4, 1)]),
            (2, vec![(3, 1)]),
            (2, vec![(5, 2), (7, 1)]),
            (4, vec![(6, 1), (7, 1)]),
        ] {
            let map: SeriesMap =
                terms.iter().map(|&(r, c)| (r, Elem::from_int(c))).collect();
            let exp = PuiseuxExpansion::new(m, map, Trunc::Exact);
            let d = implicitize_expansion(&t, &exp).unwrap();
            let expect = m.min(exp.ord_y().unwrap());
            assert_eq!(d.order(), Some(expect), "order law for m={m}");
        }
    }

    #[test]
    fn monotone_regularity_trace_holds() {
        // exercised implicitly: a ramified step must drop the regularity
        // order, else solve() errors. Run a couple of branched curves.
        resolve_splits(|s| {
            for f in [
                poly(&[(0, 4, 1), (6, 0, 1)]),              // y^4 + x^6
                poly(&[(0, 2, 1), (3, 0, -1)]),             // cusp
                poly(&[(5, 0, 1), (3, 3, -1), (2, 4, -1), (0, 7, 1)]),
            ] {
                let _ = expand(s, &f, 10)?;
            }
            Ok(())
        })
        .unwrap();
    }
}
