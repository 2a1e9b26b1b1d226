//! Truncated power-series utilities and the Puiseux expansion type.
//!
//! Expansions are sparse maps t-exponent -> coefficient together with a
//! truncation marker. `Trunc::Exact` means the stored terms are the whole
//! series (it terminates); `Trunc::Order(v)` means every term with
//! exponent <= v is present and correct, nothing is known beyond.

use crate::error::{Error, Result};
use crate::tower::{Elem, Session, Tower};
use std::collections::BTreeMap;

pub type SeriesMap = BTreeMap<u32, Elem>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trunc {
    Exact,
    Order(u32),
}

impl Trunc {
    pub fn valid_to(self) -> Option<u32> {
        match self {
            Trunc::Exact => None,
            Trunc::Order(v) => Some(v),
        }
    }

    pub fn min(self, other: Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Exact, o) => o,
            (s, Trunc::Exact) => s,
            (Trunc::Order(a), Trunc::Order(b)) => Trunc::Order(a.min(b)),
        }
    }
}

/// One Newton-Puiseux solution: x = t^m, y = sum of `terms`.
#[derive(Clone, Debug)]
pub struct PuiseuxExpansion {
    pub ram_index: u32,
    pub terms: SeriesMap,
    pub trunc: Trunc,
    /// Multiplicity of this solution in the input (1 for reduced input).
    pub multiplicity: u32,
}

impl PuiseuxExpansion {
    pub fn new(ram_index: u32, terms: SeriesMap, trunc: Trunc) -> Self {
        PuiseuxExpansion { ram_index, terms, trunc, multiplicity: 1 }
    }

    /// Order of the y-part in t; `None` when the y-part is zero (within
    /// the known range).
    pub fn ord_y(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn support(&self) -> Vec<u32> {
        self.terms.keys().copied().collect()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.trunc, Trunc::Exact)
    }

    /// gcd of the ramification index and all exponents; 1 for injective
    /// parametrizations.
    pub fn exponent_gcd(&self) -> u32 {
        let mut g = self.ram_index;
        for &r in self.terms.keys() {
            g = num_integer::gcd(g, r);
        }
        g
    }

    /// Reparametrize t -> t^(1/d) where d divides every exponent.
    pub fn divide_exponents(&self, d: u32) -> PuiseuxExpansion {
        assert!(d >= 1 && self.ram_index.is_multiple_of(d));
        let terms: SeriesMap =
            self.terms.iter().map(|(&r, c)| (r / d, c.clone())).collect();
        let trunc = match self.trunc {
            Trunc::Exact => Trunc::Exact,
            Trunc::Order(v) => Trunc::Order(v / d),
        };
        PuiseuxExpansion {
            ram_index: self.ram_index / d,
            terms,
            trunc,
            multiplicity: self.multiplicity,
        }
    }

    /// The conjugate expansion t -> zeta * t for a given root of unity.
    pub fn conjugate(&self, t: &Tower, zeta: &Elem) -> PuiseuxExpansion {
        let terms: SeriesMap = self
            .terms
            .iter()
            .map(|(&r, c)| (r, t.mul(c, &t.pow(zeta, r as u64))))
            .collect();
        PuiseuxExpansion { terms, ..self.clone() }
    }
}

/// Truncated product of sparse series (exponents kept while <= cap).
pub fn series_mul(t: &Tower, a: &SeriesMap, b: &SeriesMap, cap: u32) -> SeriesMap {
    let mut out: SeriesMap = BTreeMap::new();
    for (&ea, ca) in a {
        if ea > cap {
            break;
        }
        for (&eb, cb) in b {
            if ea + eb > cap {
                break;
            }
            let v = t.mul(ca, cb);
            if v.is_zero() {
                continue;
            }
            let entry = out.entry(ea + eb).or_insert_with(Elem::zero);
            *entry = t.add(entry, &v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn series_add(t: &Tower, a: &SeriesMap, b: &SeriesMap) -> SeriesMap {
    let mut out = a.clone();
    for (&e, c) in b {
        let entry = out.entry(e).or_insert_with(Elem::zero);
        *entry = t.add(entry, c);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn series_neg(t: &Tower, a: &SeriesMap) -> SeriesMap {
    a.iter().map(|(&e, c)| (e, t.neg(c))).collect()
}

pub fn series_pow(t: &Tower, a: &SeriesMap, mut k: u32, cap: u32) -> SeriesMap {
    let mut acc: SeriesMap = [(0u32, Elem::one())].into_iter().collect();
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = series_mul(t, &acc, &base, cap);
        }
        k >>= 1;
        if k > 0 {
            base = series_mul(t, &base, &base, cap);
        }
    }
    acc
}

/// Reciprocal of a series with invertible constant term, to order cap.
pub fn series_inv(t: &Tower, a: &SeriesMap, cap: u32) -> Result<SeriesMap> {
    let a0 = a.get(&0).cloned().unwrap_or_else(Elem::zero);
    let inv0 = t.invert(&a0)?;
    let mut out: SeriesMap = [(0u32, inv0.clone())].into_iter().collect();
    for k in 1..=cap {
        // coefficient of t^k in a * out must vanish
        let mut s = Elem::zero();
        for (&j, aj) in a.range(1..=k) {
            if let Some(oc) = out.get(&(k - j)) {
                s = t.add(&s, &t.mul(aj, oc));
            }
        }
        if s.is_zero() {
            continue;
        }
        let c = t.neg(&t.mul(&inv0, &s));
        out.insert(k, c);
    }
    Ok(out)
}

/// (1 + e)^(1/n) for a series e of positive order, to order cap.
///
/// Coefficient recurrence obtained from n (1+e) g' = e' g; all divisions
/// are by nonzero integers, so this never splits.
pub fn nth_root_one_plus(t: &Tower, e: &SeriesMap, n: u32, cap: u32) -> SeriesMap {
    assert!(e.keys().next().is_none_or(|&k| k >= 1));
    let mut g: SeriesMap = [(0u32, Elem::one())].into_iter().collect();
    if n == 1 {
        let mut out = g;
        for (&k, c) in e {
            if k <= cap {
                out.insert(k, c.clone());
            }
        }
        return out;
    }
    for k in 1..=cap {
        let mut s = Elem::zero();
        for (&j, ej) in e.range(1..=k) {
            let gkj = match g.get(&(k - j)) {
                Some(v) => v.clone(),
                None => continue,
            };
            // weight j - n (k - j)
            let w = Elem::from_int(j as i64 - (n as i64) * ((k - j) as i64));
            s = t.add(&s, &t.mul(&t.mul(ej, &gkj), &w));
        }
        if s.is_zero() {
            continue;
        }
        let denom = Elem::from_int((n as i64) * (k as i64));
        let gk = t.mul(&s, &t.invert(&denom).expect("integer inverse"));
        g.insert(k, gk);
    }
    g
}

/// Compose outer(inner) for a series `inner` of order >= 1, to order cap.
/// Sparse Horner: walk the outer exponents from the top, raising by the
/// exponent gaps.
pub fn series_compose(t: &Tower, outer: &SeriesMap, inner: &SeriesMap, cap: u32) -> SeriesMap {
    assert!(inner.keys().next().is_none_or(|&k| k >= 1));
    let exps: Vec<u32> = outer.keys().copied().collect();
    let mut acc: SeriesMap = BTreeMap::new();
    let mut prev_exp: Option<u32> = None;
    for &e in exps.iter().rev() {
        if let Some(p) = prev_exp {
            let gap = p - e;
            let step = series_pow(t, inner, gap, cap);
            acc = series_mul(t, &acc, &step, cap);
        }
        let c = outer[&e].clone();
        let entry = acc.entry(0).or_insert_with(Elem::zero);
        *entry = t.add(entry, &c);
        if entry.is_zero() {
            acc.remove(&0);
        }
        prev_exp = Some(e);
    }
    if let Some(p) = prev_exp {
        if p > 0 {
            let step = series_pow(t, inner, p, cap);
            acc = series_mul(t, &acc, &step, cap);
        }
    }
    acc
}

/// Compositional inverse of a series of order exactly 1 with invertible
/// linear coefficient, to order cap: returns tau with eta(tau(u)) = u.
pub fn series_revert(t: &Tower, eta: &SeriesMap, cap: u32) -> Result<SeriesMap> {
    let d = eta.get(&1).cloned().unwrap_or_else(Elem::zero);
    assert!(
        eta.keys().next() == Some(&1),
        "reversion requires a series of order exactly 1"
    );
    let d_inv = t.invert(&d)?;
    let mut tau: SeriesMap = [(1u32, d_inv.clone())].into_iter().collect();
    let mut known = 1u32;
    while known < cap {
        let target = (known * 2).min(cap);
        // Newton step: tau <- tau - (eta(tau) - u) / eta'(tau)
        let comp = series_compose(t, eta, &tau, target);
        let mut resid = comp;
        if let Some(entry) = resid.get_mut(&1) {
            let newv = t.sub(entry, &Elem::one());
            if newv.is_zero() {
                resid.remove(&1);
            } else {
                *entry = newv;
            }
        } else {
            resid.insert(1, Elem::from_int(-1));
        }
        if resid.is_empty() {
            known = target;
            continue;
        }
        let eta_d: SeriesMap = eta
            .iter()
            .filter(|(&k, _)| k >= 1)
            .map(|(&k, c)| (k - 1, t.mul(c, &Elem::from_int(k as i64))))
            .collect();
        let dcomp = series_compose(t, &eta_d, &tau, target);
        let dinv = series_inv(t, &dcomp, target)?;
        let corr = series_mul(t, &resid, &dinv, target);
        tau = series_add(t, &tau, &series_neg(t, &corr));
        known = target;
    }
    Ok(tau)
}

/// Re-express the germ of (t^m, phi(t)) in swapped coordinates, producing
/// the parametrization (u^n, psi(u)) of the same set with the roles of x
/// and y exchanged. Requires a nonzero y-part. Adjoins an n-th root of the
/// leading coefficient when necessary.
pub fn swapped_expansion(
    session: &mut Session,
    exp: &PuiseuxExpansion,
    cap: u32,
) -> Result<PuiseuxExpansion> {
    let m = exp.ram_index;
    let (&n, lead) = exp
        .terms
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidInput("cannot swap a zero y-part".into()))?;
    let lead = lead.clone();
    // d with d^n = leading coefficient
    let mut p = vec![session.tower.neg(&lead)];
    p.extend(std::iter::repeat_n(Elem::zero(), n as usize - 1));
    p.push(Elem::one());
    let d = session.adjoin_root(&p)?;
    let t = &session.tower;
    // e(t) = phi / (lead * t^n) - 1, of positive order
    let lead_inv = t.invert(&lead)?;
    let mut e: SeriesMap = BTreeMap::new();
    for (&r, c) in exp.terms.iter().skip(1) {
        e.insert(r - n, t.mul(c, &lead_inv));
    }
    let g = nth_root_one_plus(t, &e, n, cap);
    // eta(t) = d * t * g(t), so eta^n = phi
    let mut eta: SeriesMap = BTreeMap::new();
    for (&k, c) in &g {
        if k + 1 > cap + 1 {
            continue;
        }
        let v = t.mul(c, &d);
        if !v.is_zero() {
            eta.insert(k + 1, v);
        }
    }
    let tau = series_revert(t, &eta, cap)?;
    let psi = series_pow(t, &tau, m, cap);
    let trunc = match exp.trunc {
        Trunc::Exact => Trunc::Order(cap),
        Trunc::Order(v) => Trunc::Order(cap.min(v.saturating_sub(n).max(1))),
    };
    Ok(PuiseuxExpansion {
        ram_index: n,
        terms: psi,
        trunc,
        multiplicity: exp.multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::resolve_splits;

    fn sm(pairs: &[(u32, i64)]) -> SeriesMap {
        pairs.iter().map(|&(e, c)| (e, Elem::from_int(c))).collect()
    }

    #[test]
    fn nth_root_squares_back() {
        let t = Tower::base();
        // (1 + t)^(1/2): square it and compare
        let e = sm(&[(1, 1)]);
        let g = nth_root_one_plus(&t, &e, 2, 12);
        let sq = series_mul(&t, &g, &g, 12);
        let mut expect = sm(&[(0, 1), (1, 1)]);
        expect.retain(|_, v| !v.is_zero());
        assert_eq!(sq, expect);
    }

    #[test]
    fn reversion_inverts() {
        let t = Tower::base();
        // eta = t + t^2: tau with eta(tau) = u
        let eta = sm(&[(1, 1), (2, 1)]);
        let tau = series_revert(&t, &eta, 10).unwrap();
        let comp = series_compose(&t, &eta, &tau, 10);
        assert_eq!(comp, sm(&[(1, 1)]));
    }

    #[test]
    fn swap_cusp_parametrization() {
        // (t^3, t^2) swaps to (u^2, u^3)
        resolve_splits(|s| {
            let exp = PuiseuxExpansion::new(3, sm(&[(2, 1)]), Trunc::Exact);
            let sw = swapped_expansion(s, &exp, 20)?;
            assert_eq!(sw.ram_index, 2);
            assert_eq!(sw.terms.len(), 1);
            let c = &sw.terms[&3];
            // the coefficient cubes/squares consistently: psi = tau^3 with
            // tau = u / d, d^2 = 1, so psi = d u^3 with d^2 = 1
            let c2 = s.tower.mul(c, c);
            assert!(c2.is_one());
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn swap_matches_golden_pair() {
        // (t^3, t^2 + t^4) describes the same germ as the swapped frame
        // expansion x = u^2, y = u^3 + ... ; check the swapped series
        // solves the swapped implicit equation y^3 - 3 x^2 y - x^4 - x^2
        // with x and y exchanged, up to the computed order.
        use crate::bipoly::BiPoly;
        resolve_splits(|s| {
            let exp = PuiseuxExpansion::new(
                3,
                sm(&[(2, 1), (4, 1)]),
                Trunc::Exact,
            );
            let sw = swapped_expansion(s, &exp, 24)?;
            assert_eq!(sw.ram_index, 2);
            // f = -x^4 - 3x^2 y - x^2 + y^3 vanishes on (t^3, t^2+t^4);
            // the swapped germ satisfies f(y, x) = 0.
            let f = BiPoly::from_terms([
                ((4u32, 0u32), Elem::from_int(-1)),
                ((2, 1), Elem::from_int(-3)),
                ((2, 0), Elem::from_int(-1)),
                ((0, 3), Elem::from_int(1)),
            ]);
            let fsw = f.swap_xy();
            let xpart: SeriesMap = [(sw.ram_index, Elem::one())].into_iter().collect();
            let val = fsw.eval_series(&s.tower, &xpart, &sw.terms, 20);
            assert!(
                val.keys().next().is_none_or(|&k| k > 18),
                "swapped expansion should satisfy the swapped equation to depth: got {val:?}"
            );
            Ok(())
        })
        .unwrap();
    }
}
