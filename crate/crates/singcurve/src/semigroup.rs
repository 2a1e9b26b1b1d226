//! The numerical semigroup of a branch: membership, conductor, gap count,
//! and the inverse map back to the Puiseux characteristic.

use crate::branch::PuiseuxChar;
use crate::error::{Error, Result};
use num_integer::gcd;

/// Semigroup data of a branch. `conductor` is N(S) + 1: every integer
/// >= conductor is a member; `delta` counts the gaps below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    pub generators: Vec<u64>,
    pub conductor: u64,
    pub delta: u64,
    pub membership: Vec<bool>,
}

impl Semigroup {
    pub fn contains(&self, n: u64) -> bool {
        if n >= self.conductor {
            true
        } else {
            self.membership[n as usize]
        }
    }

    /// Greatest integer not in the semigroup; -1 for the full semigroup.
    pub fn frobenius(&self) -> i64 {
        self.conductor as i64 - 1
    }

    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&n| !self.membership[n as usize]).collect()
    }
}

/// Membership table of the semigroup generated by `gens`, up to `bound`
/// inclusive.
pub fn membership_table(gens: &[u64], bound: u64) -> Vec<bool> {
    let mut dp = vec![false; bound as usize + 1];
    dp[0] = true;
    for &g in gens {
        if g == 0 {
            continue;
        }
        for i in g as usize..dp.len() {
            if dp[i - g as usize] {
                dp[i] = true;
            }
        }
    }
    dp
}

/// Semigroup of a branch from its characteristic: generated by the
/// beta-bar sequence, with the conductor from the closed formula
/// N(S) = sum (e_{q-1} - e_q)(beta_q - 1) - 1.
pub fn semigroup_of(c: &PuiseuxChar) -> Semigroup {
    let mut n: i64 = -1;
    for (q, &b) in c.betas.iter().enumerate() {
        n += ((c.es[q] - c.es[q + 1]) * (b - 1)) as i64;
    }
    let conductor = (n + 1) as u64;
    let membership = membership_table(&c.beta_bars, conductor.max(1));
    let delta = (0..conductor).filter(|&k| !membership[k as usize]).count() as u64;
    Semigroup { generators: c.beta_bars.clone(), conductor, delta, membership }
}

/// Recover the characteristic from a semigroup given by generators.
///
/// beta-bar_0 is the least nonzero member and each later beta-bar_q is the
/// least member not divisible by e_{q-1}; the characteristic exponents
/// come back through the beta-bar recurrence. The result is validated by
/// regenerating the semigroup.
pub fn char_from_semigroup(generators: &[u64]) -> Result<PuiseuxChar> {
    if generators.is_empty() || generators.contains(&0) {
        return Err(Error::InvalidInput(
            "semigroup generators must be positive and nonempty".into(),
        ));
    }
    let overall = generators.iter().fold(0u64, |a, &b| gcd(a, b));
    if overall != 1 {
        return Err(Error::InvalidInput(format!(
            "not a branch semigroup: generators have gcd {overall}"
        )));
    }
    let max_gen = *generators.iter().max().unwrap();
    let bound = max_gen * max_gen + 2 * max_gen + 2;
    let table = membership_table(generators, bound);
    // least nonzero member
    let bb0 = (1..table.len()).find(|&i| table[i]).unwrap() as u64;
    let mut bbs = vec![bb0];
    let mut e = bb0;
    while e != 1 {
        let next = (1..table.len())
            .find(|&i| table[i] && !(i as u64).is_multiple_of(e))
            .ok_or_else(|| Error::InvalidInput("generators never reach gcd 1 in range".into()))?
            as u64;
        bbs.push(next);
        e = gcd(e, next);
    }
    let c = char_from_beta_bars(&bbs)?;
    // round-trip validation: the generated semigroup must agree
    let regen = semigroup_of(&c);
    let common = bound.min(regen.conductor.max(1) + max_gen);
    let regen_table = membership_table(&regen.generators, common);
    let input_table = membership_table(generators, common);
    if regen_table != input_table {
        return Err(Error::InvalidInput(
            "not the semigroup of a plane branch (membership mismatch)".into(),
        ));
    }
    Ok(c)
}

/// Characteristic from the beta-bar sequence via the inverse recurrence
/// beta_{q+1} = bb_{q+1} - (e_{q-1}/e_q) bb_q + beta_q.
pub fn char_from_beta_bars(bbs: &[u64]) -> Result<PuiseuxChar> {
    if bbs.is_empty() {
        return Err(Error::InvalidInput("empty beta-bar sequence".into()));
    }
    let m = bbs[0];
    if m == 1 {
        if bbs.len() > 1 {
            return Err(Error::InvalidInput("smooth branch admits no further generators".into()));
        }
        return PuiseuxChar::new(1, vec![]);
    }
    let mut es = vec![m];
    let mut betas: Vec<u64> = Vec::new();
    for (i, &bb) in bbs.iter().enumerate().skip(1) {
        let e_prev = *es.last().unwrap();
        let e = gcd(e_prev, bb);
        if e >= e_prev {
            return Err(Error::InvalidInput(
                "beta-bar sequence does not strictly drop the gcd chain".into(),
            ));
        }
        let beta = if i == 1 {
            bb
        } else {
            let factor = es[i - 2] / es[i - 1];
            let sub = factor * bbs[i - 1];
            let prev_beta = *betas.last().unwrap();
            (bb + prev_beta)
                .checked_sub(sub)
                .ok_or_else(|| Error::InvalidInput("beta recurrence went negative".into()))?
        };
        betas.push(beta);
        es.push(e);
    }
    if *es.last().unwrap() != 1 {
        return Err(Error::InvalidInput("gcd chain does not reach 1".into()));
    }
    let c = PuiseuxChar::new(m, betas)?;
    if c.beta_bars != bbs {
        return Err(Error::InvalidInput(
            "beta-bar sequence fails the defining recurrence".into(),
        ));
    }
    Ok(c)
}
