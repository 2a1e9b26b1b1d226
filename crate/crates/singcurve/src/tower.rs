//! Dynamically split algebraic extension towers over Q(i).
//!
//! A `Tower` is a stack of quotient rings
//! `Q(i)[g0]/(m0)[g1]/(m1)...` where every modulus is monic and
//! squarefree but *not* required to be irreducible. Arithmetic proceeds
//! modulo the defining polynomials; when an inversion runs into a zero
//! divisor, the offending level is factored through a gcd and the
//! computation is offered two refined towers (`Error::Split`). Drivers
//! re-run the computation in a component; see [`resolve_splits`].
//!
//! Towers are persistent: splitting and adjoining build new towers and
//! never mutate existing ones, so values can be shared freely across
//! threads.
//!
//! Replay: a tower remembers levels beyond its active `height`. When a
//! computation is restarted after a split, `adjoin_root` consumes the
//! stored levels one by one instead of re-deriving them, which keeps the
//! rerun on the same extension path. Every `adjoin_root` call creates or
//! consumes exactly one level.

use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use std::sync::Arc;

/// Element of a tower: either a base Gaussian rational or a polynomial in
/// the generator of some level, with coefficients strictly below it.
///
/// Canonical form: `Ext` coefficient vectors have length >= 2, no trailing
/// structural zeros, and each coefficient is itself canonical at a lower
/// level. Equality of canonical forms is equality in every component of
/// the (possibly reducible) tower.
#[derive(Clone, PartialEq, Eq)]
pub enum Elem {
    Base(GaussQ),
    Ext { level: usize, coeffs: Vec<Elem> },
}

impl Elem {
    pub fn zero() -> Elem {
        Elem::Base(GaussQ::zero())
    }

    pub fn one() -> Elem {
        Elem::Base(GaussQ::one())
    }

    pub fn imaginary_unit() -> Elem {
        Elem::Base(GaussQ::i())
    }

    pub fn from_int(n: i64) -> Elem {
        Elem::Base(GaussQ::from_int(n))
    }

    pub fn from_gauss(q: GaussQ) -> Elem {
        Elem::Base(q)
    }

    pub fn from_rational(r: BigRational) -> Elem {
        Elem::Base(GaussQ::from_rational(r))
    }

    /// Structural zero test. Canonical forms make this exact: an element
    /// is structurally zero iff it vanishes in every component.
    pub fn is_zero(&self) -> bool {
        matches!(self, Elem::Base(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Elem::Base(q) if q.is_one())
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Elem::Base(_) => None,
            Elem::Ext { level, .. } => Some(*level),
        }
    }

    pub fn as_base(&self) -> Option<&GaussQ> {
        match self {
            Elem::Base(q) => Some(q),
            Elem::Ext { .. } => None,
        }
    }
}

/// One level of a tower: a monic squarefree defining polynomial whose
/// coefficients live strictly below this level. Dense, lowest degree
/// first.
#[derive(Clone)]
pub struct Level {
    pub modulus: Vec<Elem>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Outcome of a zero test on a canonical element.
pub enum Decide {
    Zero,
    Unit(Elem),
}

/// Outcome of the public inversion operation.
pub enum TryInvert {
    /// The element is identically zero.
    ZeroElement,
    /// The element is invertible in every component; its inverse.
    Inverse(Elem),
    /// The element is a zero divisor: it vanishes modulo the first tower
    /// and is invertible modulo the second.
    Split { zero_part: Tower, unit_part: Tower },
}

#[derive(Clone)]
pub struct Tower {
    levels: Arc<Vec<Level>>,
    height: usize,
}

impl Tower {
    /// The bare base field Q(i).
    pub fn base() -> Tower {
        Tower { levels: Arc::new(Vec::new()), height: 0 }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    /// Number of stored levels, including replay levels not yet consumed.
    pub fn stored_levels(&self) -> usize {
        self.levels.len()
    }

    /// Forget the active height so a rerun consumes the stored levels
    /// again from the bottom.
    pub fn reset_for_replay(&self) -> Tower {
        Tower { levels: self.levels.clone(), height: 0 }
    }

    /// Keep only the first `n` stored levels.
    pub fn truncated(&self, n: usize) -> Tower {
        Tower {
            levels: Arc::new(self.levels[..n.min(self.levels.len())].to_vec()),
            height: self.height.min(n),
        }
    }

    /// Same stored levels with the active height forced to `h`.
    pub fn activated(&self, h: usize) -> Tower {
        assert!(h <= self.levels.len());
        Tower { levels: self.levels.clone(), height: h }
    }

    /// Structural equality of the first `n` level moduli.
    pub fn prefix_matches(&self, other: &Tower, n: usize) -> bool {
        if self.levels.len() < n || other.levels.len() < n {
            return false;
        }
        (0..n).all(|i| self.levels[i].modulus == other.levels[i].modulus)
    }

    fn with_pushed(&self, level: Level) -> Tower {
        debug_assert_eq!(self.height, self.levels.len());
        let mut levels = (*self.levels).clone();
        levels.push(level);
        Tower { levels: Arc::new(levels), height: self.height + 1 }
    }

    /// The canonical generator of a level (collapses if the level is
    /// linear).
    pub fn level_generator(&self, lvl: usize) -> Elem {
        self.canon_vec_at(lvl, vec![Elem::zero(), Elem::one()])
    }

    // ---- canonicalization ----

    /// Reduce a raw coefficient vector at `level` modulo the level's
    /// monic defining polynomial and collapse constants.
    fn canon_vec_at(&self, level: usize, mut v: Vec<Elem>) -> Elem {
        let dm = self.levels[level].degree();
        while v.len() > dm {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = v.len() - dm;
            for j in 0..dm {
                let t = self.mul(&top, &self.levels[level].modulus[j].clone());
                v[k + j] = self.sub(&v[k + j], &t);
            }
        }
        let v = ep_trim(v);
        match v.len() {
            0 => Elem::zero(),
            1 => v.into_iter().next().unwrap(),
            _ => Elem::Ext { level, coeffs: v },
        }
    }

    /// Re-canonicalize an element against this tower's moduli. Used when
    /// carrying values into a refined (split) tower.
    pub fn project_elem(&self, e: &Elem) -> Elem {
        match e {
            Elem::Base(_) => e.clone(),
            Elem::Ext { level, coeffs } => {
                let cs: Vec<Elem> = coeffs.iter().map(|c| self.project_elem(c)).collect();
                self.canon_vec_at(*level, cs)
            }
        }
    }

    fn as_vec_at(&self, e: &Elem, level: usize) -> Vec<Elem> {
        match e {
            Elem::Ext { level: l, coeffs } if *l == level => coeffs.clone(),
            _ => vec![e.clone()],
        }
    }

    // ---- ring operations ----

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(x + y),
            _ => {
                let l = a.level().into_iter().chain(b.level()).max().unwrap();
                let va = self.as_vec_at(a, l);
                let vb = self.as_vec_at(b, l);
                let n = va.len().max(vb.len());
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let x = va.get(k).cloned().unwrap_or_else(Elem::zero);
                    let y = vb.get(k).cloned().unwrap_or_else(Elem::zero);
                    out.push(self.add(&x, &y));
                }
                self.canon_vec_at(l, out)
            }
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base(-x),
            Elem::Ext { level, coeffs } => Elem::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| self.neg(c)).collect(),
            },
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::zero();
        }
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(x * y),
            _ => {
                let l = a.level().into_iter().chain(b.level()).max().unwrap();
                let va = self.as_vec_at(a, l);
                let vb = self.as_vec_at(b, l);
                let mut out = vec![Elem::zero(); va.len() + vb.len() - 1];
                for (i, x) in va.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in vb.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let t = self.mul(x, y);
                        out[i + j] = self.add(&out[i + j], &t);
                    }
                }
                self.canon_vec_at(l, out)
            }
        }
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = Elem::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Zero / unit decision. A structurally nonzero element that is
    /// invertible in every component yields `Unit` with its inverse; a
    /// zero divisor surfaces as `Error::Split`.
    pub fn decide(&self, e: &Elem) -> Result<Decide> {
        if e.is_zero() {
            return Ok(Decide::Zero);
        }
        Ok(Decide::Unit(self.invert(e)?))
    }

    /// True if the element is invertible, Err(Split) on a zero divisor.
    pub fn is_unit(&self, e: &Elem) -> Result<bool> {
        match self.decide(e)? {
            Decide::Zero => Ok(false),
            Decide::Unit(_) => Ok(true),
        }
    }

    /// Inverse of a structurally nonzero element; `Error::Split` when it
    /// is a zero divisor.
    pub fn invert(&self, e: &Elem) -> Result<Elem> {
        match e {
            Elem::Base(q) => q
                .inv()
                .map(Elem::Base)
                .ok_or_else(|| Error::Internal("inversion of zero element".into())),
            Elem::Ext { level, coeffs } => {
                let lvl = *level;
                let m = self.levels[lvl].modulus.clone();
                // Extended Euclid between the modulus and the element,
                // tracking the Bezout coefficient of the element.
                let mut r0 = m.clone();
                let mut s0: Vec<Elem> = Vec::new();
                let mut r1 = coeffs.clone();
                let mut s1 = vec![Elem::one()];
                while !r1.is_empty() {
                    let lead = r1.last().unwrap().clone();
                    let inv = match self.decide(&lead)? {
                        Decide::Unit(u) => u,
                        Decide::Zero => {
                            return Err(Error::Internal("unnormalized remainder in invert".into()))
                        }
                    };
                    let r1m = self.ep_scale(&r1, &inv);
                    let s1m = self.ep_scale(&s1, &inv);
                    let (q, r) = self.ep_divrem_monic(&r0, &r1m);
                    let qs = self.ep_mul(&q, &s1m);
                    let s2 = self.ep_sub(&s0, &qs);
                    r0 = r1m;
                    s0 = s1m;
                    r1 = r;
                    s1 = s2;
                }
                let g = r0;
                if g.len() == 1 {
                    // monic constant gcd: the element is a unit
                    return Ok(self.canon_vec_at(lvl, s0));
                }
                if g.len() >= m.len() {
                    return Err(Error::Internal("gcd with modulus has full degree".into()));
                }
                let (zero_part, unit_part) = self.split_level(lvl, &g)?;
                Err(Error::Split { zero_part, unit_part })
            }
        }
    }

    /// Public inversion with the zero / inverse / split trichotomy.
    pub fn try_invert(&self, e: &Elem) -> Result<TryInvert> {
        if e.is_zero() {
            return Ok(TryInvert::ZeroElement);
        }
        match self.invert(e) {
            Ok(inv) => Ok(TryInvert::Inverse(inv)),
            Err(Error::Split { zero_part, unit_part }) => {
                Ok(TryInvert::Split { zero_part, unit_part })
            }
            Err(e) => Err(e),
        }
    }

    /// Build the two towers refining level `lvl` by a proper monic factor
    /// `g` of its modulus. Levels above are reduced into the new towers.
    fn split_level(&self, lvl: usize, g: &[Elem]) -> Result<(Tower, Tower)> {
        let m = &self.levels[lvl].modulus;
        let (q, r) = self.ep_divrem_monic(m, g);
        if !r.is_empty() {
            return Err(Error::Internal("split factor does not divide the modulus".into()));
        }
        Ok((self.rebuilt_with(lvl, g.to_vec()), self.rebuilt_with(lvl, q)))
    }

    fn rebuilt_with(&self, lvl: usize, new_modulus: Vec<Elem>) -> Tower {
        let mut acc: Vec<Level> = self.levels[..lvl].to_vec();
        acc.push(Level { modulus: new_modulus });
        for j in lvl + 1..self.levels.len() {
            let partial = Tower { levels: Arc::new(acc.clone()), height: j };
            let projected: Vec<Elem> = self.levels[j]
                .modulus
                .iter()
                .map(|c| partial.project_elem(c))
                .collect();
            acc.push(Level { modulus: projected });
        }
        Tower { levels: Arc::new(acc), height: self.height }
    }

    /// Adjoin a root of a nonconstant polynomial `p` (dense, lowest degree
    /// first, coefficients in this tower). The modulus actually stored is
    /// the squarefree part of `p`, or a linear factor of it when a root
    /// already exists in reach. Returns the extended tower and the root.
    ///
    /// The modulus is not required to be irreducible; later zero-divisor
    /// hits refine it on demand.
    pub fn adjoin_root(&self, p: &[Elem]) -> Result<(Tower, Elem)> {
        let p = ep_trim(p.to_vec());
        if p.len() < 2 {
            return Err(Error::InvalidInput(
                "adjoin_root requires a nonconstant polynomial".into(),
            ));
        }
        if self.height < self.levels.len() {
            // Replay a stored level from an earlier run of the same
            // computation.
            let lvl = self.height;
            let nt = Tower { levels: self.levels.clone(), height: self.height + 1 };
            let gen = nt.level_generator(lvl);
            let val = nt.ep_eval(&p, &gen);
            if !val.is_zero() {
                return Err(Error::Internal("extension replay mismatch".into()));
            }
            return Ok((nt, gen));
        }
        let pm = self.ep_monicize(&p)?;
        let dp = self.ep_derivative(&pm);
        let g = self.ep_gcd(&pm, &dp)?;
        let sf = if g.len() <= 1 {
            pm
        } else {
            let (q, r) = self.ep_divrem_monic(&pm, &g);
            debug_assert!(r.is_empty());
            q
        };
        let modulus = match probe_base_root(&sf) {
            Some(root) => vec![Elem::Base(-&root), Elem::one()],
            None => sf,
        };
        let nt = self.with_pushed(Level { modulus });
        let gen = nt.level_generator(self.height);
        let val = nt.ep_eval(&p, &gen);
        if !val.is_zero() {
            return Err(Error::Internal("adjoined root fails its polynomial".into()));
        }
        Ok((nt, gen))
    }

    // ---- dense polynomial helpers over tower elements ----

    pub(crate) fn ep_add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let x = a.get(k).cloned().unwrap_or_else(Elem::zero);
            let y = b.get(k).cloned().unwrap_or_else(Elem::zero);
            out.push(self.add(&x, &y));
        }
        ep_trim(out)
    }

    pub(crate) fn ep_sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let nb: Vec<Elem> = b.iter().map(|c| self.neg(c)).collect();
        self.ep_add(a, &nb)
    }

    pub(crate) fn ep_mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Elem::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        ep_trim(out)
    }

    pub(crate) fn ep_scale(&self, a: &[Elem], c: &Elem) -> Vec<Elem> {
        ep_trim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    /// Division by a monic divisor: returns (quotient, remainder).
    pub(crate) fn ep_divrem_monic(&self, num: &[Elem], den: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        debug_assert!(den.last().is_some_and(|c| c.is_one()), "divisor must be monic");
        let dd = den.len() - 1;
        if num.len() <= dd {
            return (Vec::new(), num.to_vec());
        }
        let mut rem = num.to_vec();
        let mut quot = vec![Elem::zero(); num.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            quot[k] = top.clone();
            for j in 0..=dd {
                let t = self.mul(&top, &den[j]);
                rem[k + j] = self.sub(&rem[k + j], &t);
            }
        }
        rem.truncate(dd);
        (ep_trim(quot), ep_trim(rem))
    }

    /// Scale a nonzero polynomial monic; splits if the leading
    /// coefficient is a zero divisor.
    pub(crate) fn ep_monicize(&self, a: &[Elem]) -> Result<Vec<Elem>> {
        let a = ep_trim(a.to_vec());
        let lead = a
            .last()
            .ok_or_else(|| Error::Internal("monicize of zero polynomial".into()))?;
        if lead.is_one() {
            return Ok(a);
        }
        let inv = self.invert(lead)?;
        Ok(self.ep_scale(&a, &inv))
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub(crate) fn ep_gcd(&self, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
        let mut r0 = ep_trim(a.to_vec());
        let mut r1 = ep_trim(b.to_vec());
        if r0.is_empty() {
            std::mem::swap(&mut r0, &mut r1);
        }
        if r0.is_empty() {
            return Ok(Vec::new());
        }
        while !r1.is_empty() {
            let r1m = self.ep_monicize(&r1)?;
            let (_, r) = self.ep_divrem_monic(&r0, &r1m);
            r0 = r1m;
            r1 = r;
        }
        self.ep_monicize(&r0)
    }

    pub(crate) fn ep_derivative(&self, a: &[Elem]) -> Vec<Elem> {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(a.len() - 1);
        for (k, c) in a.iter().enumerate().skip(1) {
            let f = Elem::from_int(k as i64);
            out.push(self.mul(c, &f));
        }
        ep_trim(out)
    }

    pub(crate) fn ep_eval(&self, a: &[Elem], x: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for c in a.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, c);
        }
        acc
    }

    // ---- display ----

    /// Display names for the nontrivial levels: `g1`, `g2`, ... in order
    /// of adjunction. Linear levels collapse and never print.
    pub fn generator_name(&self, lvl: usize) -> String {
        let mut n = 0;
        for j in 0..=lvl {
            if self.levels[j].degree() >= 2 {
                n += 1;
            }
        }
        format!("g{n}")
    }

    /// `(name, defining polynomial)` pairs for the nontrivial levels in
    /// reach of the active height.
    pub fn describe_generators(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for lvl in 0..self.height {
            if self.levels[lvl].degree() >= 2 {
                let name = self.generator_name(lvl);
                let poly = self.display_poly_in(&self.levels[lvl].modulus, &name);
                out.push((name, poly));
            }
        }
        out
    }

    pub fn display_elem(&self, e: &Elem) -> String {
        match e {
            Elem::Base(q) => q.to_string(),
            Elem::Ext { level, coeffs } => {
                self.display_poly_in(coeffs, &self.generator_name(*level))
            }
        }
    }

    fn display_poly_in(&self, coeffs: &[Elem], var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = self.display_elem(c);
            let needs_parens = cs.contains('+') || (cs.rfind('-').unwrap_or(0) > 0);
            let body = if k == 0 {
                cs
            } else {
                let var_pow = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                if c.is_one() {
                    var_pow
                } else if cs == "-1" {
                    format!("-{var_pow}")
                } else if needs_parens {
                    format!("({cs})*{var_pow}")
                } else {
                    format!("{cs}*{var_pow}")
                }
            };
            if parts.is_empty() {
                parts.push(body);
            } else if let Some(stripped) = body.strip_prefix('-') {
                parts.push(format!(" - {stripped}"));
            } else {
                parts.push(format!(" + {body}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(height={}", self.height)?;
        for lvl in 0..self.levels.len() {
            let m = &self.levels[lvl].modulus;
            write!(f, ", L{}: deg {}", lvl, m.len() - 1)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Base(q) => write!(f, "{q}"),
            Elem::Ext { level, coeffs } => {
                write!(f, "<L{level}:")?;
                for c in coeffs {
                    write!(f, " {c:?}")?;
                }
                write!(f, ">")
            }
        }
    }
}

/// Strip trailing structural zeros.
pub(crate) fn ep_trim(mut v: Vec<Elem>) -> Vec<Elem> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Look for a root of a monic squarefree polynomial with base
/// coefficients without extending the tower: quadratic formula when the
/// discriminant is a square in Q(i), otherwise a fixed set of small
/// candidates. Purely a representation nicety; failures just mean the
/// root stays symbolic.
fn probe_base_root(sf: &[Elem]) -> Option<GaussQ> {
    let base: Option<Vec<&GaussQ>> = sf.iter().map(|c| c.as_base()).collect();
    let base = base?;
    let deg = base.len() - 1;
    if deg == 2 {
        let c0 = base[0];
        let c1 = base[1];
        let four = GaussQ::from_int(4);
        let disc = &(c1 * c1) - &(&four * c0);
        let s = disc.sqrt()?;
        let half = GaussQ::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let root = &(&(-c1) + &s) * &half;
        return Some(root);
    }
    if deg >= 3 {
        let mut candidates = vec![GaussQ::zero()];
        for (re, im) in [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (2, 0),
            (-2, 0),
            (0, 2),
            (0, -2),
            (3, 0),
            (-3, 0),
            (0, 3),
            (0, -3),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ] {
            candidates.push(GaussQ::new(
                BigRational::from_integer(BigInt::from(re)),
                BigRational::from_integer(BigInt::from(im)),
            ));
        }
        for cand in candidates {
            let mut acc = GaussQ::zero();
            for c in base.iter().rev() {
                acc = &(&acc * &cand) + c;
            }
            if acc.is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// A mutable computation context: the current tower plus the adjoin
/// convenience. Splitting errors bubble out of the closure given to
/// [`resolve_splits`], which reruns it over a refined tower.
pub struct Session {
    pub tower: Tower,
}

impl Session {
    pub fn new() -> Session {
        Session { tower: Tower::base() }
    }

    pub fn with_tower(tower: Tower) -> Session {
        Session { tower }
    }

    pub fn adjoin_root(&mut self, p: &[Elem]) -> Result<Elem> {
        let (t, root) = self.tower.adjoin_root(p)?;
        self.tower = t;
        Ok(root)
    }
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

/// Run a computation, restarting it over the zero component whenever a
/// zero-divisor split surfaces. All components of a split are conjugate
/// views of the same data, so finishing in any one of them is a complete
/// answer; taking the first keeps the output deterministic.
pub fn resolve_splits<T>(mut run: impl FnMut(&mut Session) -> Result<T>) -> Result<T> {
    resolve_splits_from(Tower::base(), move |s| run(s))
}

/// Same as [`resolve_splits`] but starting from a given replay context.
pub fn resolve_splits_from<T>(
    start: Tower,
    mut run: impl FnMut(&mut Session) -> Result<T>,
) -> Result<T> {
    let mut ctx = start;
    for _ in 0..512 {
        let mut session = Session::with_tower(ctx.reset_for_replay());
        match run(&mut session) {
            Err(Error::Split { zero_part, .. }) => ctx = zero_part,
            other => return other,
        }
    }
    Err(Error::Internal("split resolution did not terminate".into()))
}

/// Run a side computation on top of a shared tower without leaking its
/// adjunctions back. Splits that only refine levels created inside the
/// computation are resolved locally; splits touching the shared prefix
/// propagate (with the local levels stripped) so the owner of the shared
/// tower can rerun everything consistently.
pub fn run_isolated<T>(shared: &Tower, mut run: impl FnMut(&mut Session) -> Result<T>) -> Result<T> {
    let n = shared.height();
    let mut ctx = shared.truncated(n);
    for _ in 0..256 {
        let mut session = Session::with_tower(ctx.activated(n));
        match run(&mut session) {
            Err(Error::Split { zero_part, unit_part }) => {
                if zero_part.prefix_matches(shared, n) {
                    ctx = zero_part;
                } else {
                    return Err(Error::Split {
                        zero_part: zero_part.truncated(n),
                        unit_part: unit_part.truncated(n),
                    });
                }
            }
            other => return other,
        }
    }
    Err(Error::Internal("isolated split resolution did not terminate".into()))
}
