//! Link-side invariants of a branch: cabling invariants of the iterated
//! torus knot, the symbol calculus for Alexander polynomials, cyclotomic
//! factorization, and recovery of the Puiseux characteristic from the
//! Alexander polynomial.

use crate::branch::PuiseuxChar;
use crate::error::{Error, Result};
use crate::intpoly::{cyclotomic, divisors, IntPoly};
use crate::semigroup::char_from_beta_bars;
use num_integer::gcd;
use std::collections::BTreeMap;
use std::fmt;

/// Formal integer combination sum a_n S(n) standing for the product of
/// (t^n - 1)^(a_n). The empty symbol is the constant polynomial 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbol {
    terms: BTreeMap<u64, i64>,
}

impl Symbol {
    pub fn empty() -> Symbol {
        Symbol::default()
    }

    pub fn single(n: u64, mult: i64) -> Symbol {
        let mut s = Symbol::default();
        s.add_term(n, mult);
        s
    }

    pub fn add_term(&mut self, n: u64, mult: i64) {
        assert!(n >= 1, "symbol index must be positive");
        let e = self.terms.entry(n).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.terms.remove(&n);
        }
    }

    pub fn merged(&self, other: &Symbol) -> Symbol {
        let mut out = self.clone();
        for (&n, &a) in &other.terms {
            out.add_term(n, a);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&n, &a)| (n, a))
    }

    pub fn multiplicity(&self, n: u64) -> i64 {
        self.terms.get(&n).copied().unwrap_or(0)
    }

    /// The indices carried with negative multiplicity, ascending.
    pub fn negative_indices(&self) -> Vec<u64> {
        self.terms.iter().filter(|(_, &a)| a < 0).map(|(&n, _)| n).collect()
    }

    /// Substitute t -> t^k: every S(n) becomes S(k n).
    pub fn substitute(&self, k: u64) -> Symbol {
        assert!(k >= 1);
        Symbol {
            terms: self.terms.iter().map(|(&n, &a)| (n * k, a)).collect(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // positive terms first, descending index, then negative ones
        let mut first = true;
        let mut write_term = |f: &mut fmt::Formatter<'_>, n: u64, a: i64| -> fmt::Result {
            let mag = a.abs();
            if first {
                first = false;
                if a < 0 {
                    write!(f, "-")?;
                }
            } else if a < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "S({n})")
        };
        for (&n, &a) in self.terms.iter().rev().filter(|(_, &a)| a > 0) {
            write_term(f, n, a)?;
        }
        for (&n, &a) in self.terms.iter().rev().filter(|(_, &a)| a < 0) {
            write_term(f, n, a)?;
        }
        Ok(())
    }
}

/// The cabling invariants (p_q, q_q) of the iterated torus knot of a
/// branch, one pair per characteristic exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CablingSequence {
    pub pairs: Vec<(u64, u64)>,
}

/// Cabling invariants from the characteristic: p_q = e_{q-1}/e_q and
/// q_q = beta-bar_q / e_q.
pub fn cabling_invariants(c: &PuiseuxChar) -> CablingSequence {
    let mut pairs = Vec::new();
    for q in 1..=c.genus() {
        let p = c.es[q - 1] / c.es[q];
        let l = c.beta_bars[q] / c.es[q];
        debug_assert!(p >= 2);
        debug_assert_eq!(gcd(p, l), 1);
        pairs.push((p, l));
    }
    CablingSequence { pairs }
}

/// Symbol of the Alexander polynomial of the (p, q) torus knot:
/// S(pq) + S(1) - S(p) - S(q); empty (the unknot) when p or q is 1.
pub fn torus_symbol(p: u64, q: u64) -> Result<Symbol> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidInput(format!(
            "({p}, {q}) is not a torus knot: the parameters must be coprime and positive"
        )));
    }
    if p == 1 || q == 1 {
        return Ok(Symbol::empty());
    }
    let mut s = Symbol::empty();
    s.add_term(p * q, 1);
    s.add_term(1, 1);
    s.add_term(p, -1);
    s.add_term(q, -1);
    Ok(s)
}

/// Symbol of a (p, q) cable about a knot with symbol `s`: the symbol of
/// Delta(t^p) times the torus factor, with cancellations carried out.
pub fn cable_symbol(s: &Symbol, p: u64, q: u64) -> Result<Symbol> {
    if p == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidInput("cabling invariants must be coprime".into()));
    }
    Ok(s.substitute(p).merged(&torus_symbol(p, q)?))
}

/// Closed-form symbol of the Alexander polynomial of the knot of a
/// branch: sum S(e_{i-1} bb_i / e_i) - sum S(bb_i) - S(m) + S(1).
pub fn alexander_symbol(c: &PuiseuxChar) -> Symbol {
    let mut s = Symbol::empty();
    for i in 1..=c.genus() {
        s.add_term(c.es[i - 1] * c.beta_bars[i] / c.es[i], 1);
        s.add_term(c.beta_bars[i], -1);
    }
    if c.genus() > 0 {
        s.add_term(c.m, -1);
        s.add_term(1, 1);
    }
    s
}

/// Fold the cable recursion over the cabling invariants, starting from
/// the unknot. Must coincide with [`alexander_symbol`].
pub fn alexander_symbol_by_cabling(c: &PuiseuxChar) -> Result<Symbol> {
    let mut s = Symbol::empty();
    for &(p, q) in &cabling_invariants(c).pairs {
        s = cable_symbol(&s, p, q)?;
    }
    Ok(s)
}

/// Cyclotomic multiplicities of the expansion of a symbol: the index d
/// appears with multiplicity sum over n divisible by d of a_n. All
/// multiplicities must come out nonnegative for the symbol to expand to a
/// polynomial.
pub fn cyclotomic_form(s: &Symbol) -> Result<Vec<(u64, u64)>> {
    let mut mult: BTreeMap<u64, i64> = BTreeMap::new();
    for (n, a) in s.terms() {
        for d in divisors(n) {
            *mult.entry(d).or_insert(0) += a;
        }
    }
    let mut out = Vec::new();
    for (d, m) in mult {
        if m < 0 {
            return Err(Error::InvalidInput(format!(
                "symbol does not expand to a polynomial: cyclotomic factor {d} has multiplicity {m}"
            )));
        }
        if m > 0 {
            out.push((d, m as u64));
        }
    }
    Ok(out)
}

/// Expand a symbol into its integer polynomial, in canonical form (no
/// power of t, positive lowest coefficient). Errors when the denominator
/// does not divide, identifying the offending cyclotomic factor.
pub fn expand_symbol(s: &Symbol) -> Result<IntPoly> {
    let form = cyclotomic_form(s)?;
    let mut acc = IntPoly::one();
    for (d, m) in form {
        let phi = cyclotomic(d)?;
        for _ in 0..m {
            acc = acc.mul(&phi);
        }
    }
    Ok(acc.canonical())
}

/// Recover the Puiseux characteristic from the Alexander symbol of an
/// algebraic knot: the negative indices are the beta-bar generators in
/// increasing order. The result is validated by a full round trip.
pub fn char_from_alexander(s: &Symbol) -> Result<PuiseuxChar> {
    if s.is_empty() {
        return PuiseuxChar::new(1, vec![]);
    }
    let negatives = s.negative_indices();
    if negatives.is_empty() || s.terms().any(|(_, a)| a.abs() != 1) {
        return Err(Error::InvalidInput(
            "not an algebraic-knot Alexander symbol (multiplicities)".into(),
        ));
    }
    // negative indices are beta-bar_1..g plus m in front; the smallest is m
    let c = char_from_beta_bars(&negatives)
        .map_err(|_| Error::InvalidInput("negative terms are not a beta-bar sequence".into()))?;
    let back = alexander_symbol(&c);
    if &back != s {
        return Err(Error::InvalidInput(
            "not the Alexander symbol of a plane branch (round trip failed)".into(),
        ));
    }
    Ok(c)
}
