//! Shared helpers for the integration suites: a small deterministic PRNG
//! (so expected values never drift with external crates), random branch
//! generation, and the characteristic-range enumerator.
#![allow(dead_code)] // each test binary uses a different subset

use singcurve::branch::{Branch, PuiseuxChar};
use singcurve::series::{PuiseuxExpansion, SeriesMap, Trunc};
use singcurve::tower::{Elem, Session};

/// xorshift64*; fixed seeds keep every run identical.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }
}

/// Small nonzero Gaussian-integer coefficients.
pub fn random_coeff(rng: &mut Rng) -> Elem {
    let pool: [(i64, i64); 10] = [
        (1, 0),
        (-1, 0),
        (2, 0),
        (-2, 0),
        (3, 0),
        (0, 1),
        (0, -1),
        (1, 1),
        (-1, 1),
        (0, 2),
    ];
    let (re, im) = pool[rng.below(pool.len() as u64) as usize];
    let t = singcurve::tower::Tower::base();
    let i = Elem::imaginary_unit();
    let re_part = Elem::from_int(re);
    let im_part = t.mul(&Elem::from_int(im), &i);
    t.add(&re_part, &im_part)
}

/// A random exact normalized parametrization with ramification index at
/// most `max_m`, not tangent to x = 0.
pub fn random_expansion(rng: &mut Rng, max_m: u32) -> PuiseuxExpansion {
    random_expansion_with(rng, max_m, 5, 3)
}

/// Same with explicit exponent spread: at most `max_terms` terms with
/// exponent steps below `max_step` (smaller keeps downstream resultant
/// degrees tame).
pub fn random_expansion_with(
    rng: &mut Rng,
    max_m: u32,
    max_step: u64,
    max_terms: u64,
) -> PuiseuxExpansion {
    loop {
        let m = rng.range(1, max_m as u64) as u32;
        let n_terms = rng.range(1, max_terms) as usize;
        let mut terms = SeriesMap::new();
        let mut e = m + rng.below(3) as u32;
        for _ in 0..n_terms {
            e += rng.below(max_step) as u32 + if terms.is_empty() { 0 } else { 1 };
            terms.insert(e, random_coeff(rng));
        }
        let exp = PuiseuxExpansion::new(m, terms, Trunc::Exact);
        if exp.exponent_gcd() == 1 && exp.ord_y().is_some() {
            return exp;
        }
        // force injectivity by adding a coprime exponent
        let mut terms = exp.terms.clone();
        let extra = exp.support().last().copied().unwrap_or(m) + 1;
        terms.insert(extra, random_coeff(rng));
        let exp = PuiseuxExpansion::new(m, terms, Trunc::Exact);
        if exp.exponent_gcd() == 1 {
            return exp;
        }
    }
}

pub fn random_branch(session: &mut Session, rng: &mut Rng, max_m: u32) -> Branch {
    let exp = random_expansion(rng, max_m);
    Branch::from_expansion(session, &exp, 160).expect("random branch construction")
}

/// All Puiseux characteristics with multiplicity at most `max_m` and last
/// exponent at most `max_beta`.
pub fn enumerate_characteristics(max_m: u64, max_beta: u64) -> Vec<PuiseuxChar> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        if m == 1 {
            out.push(PuiseuxChar::new(1, vec![]).unwrap());
            continue;
        }
        let mut stack: Vec<(Vec<u64>, u64)> = vec![(vec![], m)];
        while let Some((betas, e)) = stack.pop() {
            if e == 1 {
                out.push(PuiseuxChar::new(m, betas).unwrap());
                continue;
            }
            let lo = betas.last().copied().unwrap_or(m) + 1;
            for b in lo..=max_beta {
                if b % e == 0 {
                    continue;
                }
                let mut next = betas.clone();
                next.push(b);
                stack.push((next, num_integer::gcd(e, b)));
            }
        }
    }
    out
}
