//! Pro-branches, exponents of contact, intersection numbers computed
//! along three independent routes that must agree, and the
//! equisingularity decision for curves.
//!
//! The exponent of contact of two branches is implemented as the maximum
//! of the pro-branch contact values with one side fixed. With the
//! maximum, the contact-formula route reproduces the substitution route
//! on every test pair; the minimum reading is reported alongside in
//! verbose output but plays no computational role.

use crate::branch::{gcd_chain, Branch, Curve, PuiseuxChar};
use crate::error::{Error, Result};
use crate::intpoly::cyclotomic;
use crate::newton::{expansions_conjugate, implicitize_expansion, pair_tie_bound};
use crate::series::{swapped_expansion, PuiseuxExpansion, SeriesMap, Trunc};
use crate::tower::{Decide, Elem, Session};
use num_integer::lcm;
use num_rational::Ratio;

/// Exponent of contact between branches or pro-branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactValue {
    Finite(Ratio<i64>),
    Infinite,
}

/// Intersection number between branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IntersectionValue {
    Finite(u64),
    Infinite,
}

/// One single-valued fractional power series of a branch: exponents are
/// `key / denom` in the frame the series was built in.
#[derive(Clone, Debug)]
pub struct ProBranch {
    pub denom: u32,
    pub terms: SeriesMap,
    pub trunc: Trunc,
}

impl ProBranch {
    fn from_expansion(exp: &PuiseuxExpansion) -> ProBranch {
        ProBranch { denom: exp.ram_index, terms: exp.terms.clone(), trunc: exp.trunc }
    }
}

/// All pro-branches of an expansion: the twists by the m-th roots of
/// unity. Adjoins a primitive root when the tower lacks one.
pub fn pro_branches(session: &mut Session, exp: &PuiseuxExpansion) -> Result<Vec<ProBranch>> {
    let m = exp.ram_index;
    if m == 1 {
        return Ok(vec![ProBranch::from_expansion(exp)]);
    }
    let zeta = primitive_root_of_unity(session, m)?;
    let t = session.tower.clone();
    let mut out = Vec::with_capacity(m as usize);
    for k in 0..m {
        let twist = t.pow(&zeta, k as u64);
        let terms: SeriesMap = exp
            .terms
            .iter()
            .map(|(&r, c)| (r, t.mul(c, &t.pow(&twist, r as u64))))
            .collect();
        out.push(ProBranch { denom: m, terms, trunc: exp.trunc });
    }
    Ok(out)
}

/// A primitive m-th root of unity in the session tower.
pub fn primitive_root_of_unity(session: &mut Session, m: u32) -> Result<Elem> {
    if m == 1 {
        return Ok(Elem::one());
    }
    if m == 2 {
        return Ok(Elem::from_int(-1));
    }
    if m == 4 {
        return Ok(Elem::imaginary_unit());
    }
    let phi = cyclotomic(m as u64)?;
    let coeffs: Vec<Elem> = phi
        .coeffs()
        .iter()
        .map(|c| Elem::from_rational(num_rational::BigRational::from_integer(c.clone())))
        .collect();
    session.adjoin_root(&coeffs)
}

/// Result of comparing two pro-branches term by term.
enum ProCmp {
    DifferAt(Ratio<i64>),
    EqualForever,
    /// Equal as far as both series are known (x-exponent window).
    EqualTo(Ratio<i64>),
}

fn pro_compare(session: &Session, g: &ProBranch, h: &ProBranch) -> Result<ProCmp> {
    let t = &session.tower;
    let l = lcm(g.denom as u64, h.denom as u64) as i64;
    let sg = (l as u32) / g.denom;
    let sh = (l as u32) / h.denom;
    // window in common-denominator units
    let win_g = g.trunc.valid_to().map(|v| v * sg);
    let win_h = h.trunc.valid_to().map(|v| v * sh);
    let window = match (win_g, win_h) {
        (None, None) => None,
        (a, b) => Some(a.into_iter().chain(b).min().unwrap()),
    };
    let mut keys: Vec<u32> = g
        .terms
        .keys()
        .map(|&r| r * sg)
        .chain(h.terms.keys().map(|&r| r * sh))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for e in keys {
        if let Some(w) = window {
            if e > w {
                break;
            }
        }
        let cg = if e % sg == 0 {
            g.terms.get(&(e / sg)).cloned().unwrap_or_else(Elem::zero)
        } else {
            Elem::zero()
        };
        let ch = if e % sh == 0 {
            h.terms.get(&(e / sh)).cloned().unwrap_or_else(Elem::zero)
        } else {
            Elem::zero()
        };
        let diff = t.sub(&cg, &ch);
        if diff.is_zero() {
            continue;
        }
        match t.decide(&diff)? {
            Decide::Zero => continue,
            Decide::Unit(_) => return Ok(ProCmp::DifferAt(Ratio::new(e as i64, l))),
        }
    }
    match window {
        None => Ok(ProCmp::EqualForever),
        Some(w) => Ok(ProCmp::EqualTo(Ratio::new(w as i64, l))),
    }
}

/// Exponent of contact of two pro-branches: the least exponent at which
/// their coefficients differ, infinite when they coincide.
pub fn pro_contact(session: &Session, g: &ProBranch, h: &ProBranch) -> Result<ContactValue> {
    match pro_compare(session, g, h)? {
        ProCmp::DifferAt(q) => Ok(ContactValue::Finite(q)),
        ProCmp::EqualForever => Ok(ContactValue::Infinite),
        ProCmp::EqualTo(w) => Err(Error::NeedDepth {
            suggested: (2 * w.ceil().to_integer().max(1)) as u32 + 8,
            what: "deciding a pro-branch contact".into(),
        }),
    }
}

/// The contact multiset of a branch expansion against a fixed pro-branch:
/// the contact values of all twists, as exact rationals.
pub fn contact_multiset_of_expansion(
    session: &mut Session,
    exp: &PuiseuxExpansion,
    fixed: &ProBranch,
) -> Result<Vec<Ratio<i64>>> {
    let twists = pro_branches(session, exp)?;
    let mut out = Vec::with_capacity(twists.len());
    for g in &twists {
        match pro_contact(session, g, fixed)? {
            ContactValue::Finite(q) => out.push(q),
            ContactValue::Infinite => {
                return Err(Error::Internal(
                    "distinct branches share a pro-branch".into(),
                ))
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The self contact multiset of a branch: contacts of all twists distinct
/// from the untwisted pro-branch.
pub fn self_contact_multiset(
    session: &mut Session,
    b: &Branch,
) -> Result<Vec<Ratio<i64>>> {
    let exp = &b.expansion;
    let fixed = ProBranch::from_expansion(exp);
    let twists = pro_branches(session, exp)?;
    let mut out = Vec::new();
    for g in twists.iter().skip(1) {
        match pro_contact(session, g, &fixed)? {
            ContactValue::Finite(q) => out.push(q),
            ContactValue::Infinite => {
                // a twist equal to the identity only happens for
                // non-injective data
                return Err(Error::Internal("twist of a normalized branch collapsed".into()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Expansions of a branch pair placed in a common frame where neither is
/// the vertical line. `swapped_frame` records whether that frame is the
/// (y, x) one (for report annotations).
pub struct FramedPair {
    pub e1: PuiseuxExpansion,
    pub e2: PuiseuxExpansion,
    pub swapped_frame: bool,
}

/// Place both branches in a common frame. The pair {x = 0, y = 0} has no
/// frame in which both are graphs; callers special-case it first.
pub fn common_frame(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<FramedPair> {
    let vertical = |b: &Branch| b.is_vertical_line();
    if vertical(b1) || vertical(b2) {
        // use the swapped frame; the vertical line becomes y = 0 there.
        // The computed view is deliberately shallow: comparisons that run
        // off its end raise NeedDepth and the driver reruns deeper.
        let view = |session: &mut Session, b: &Branch| -> Result<PuiseuxExpansion> {
            if b.swapped {
                Ok(b.expansion.clone())
            } else if b.expansion.terms.is_empty() {
                Err(Error::Internal("the pair {x = 0, y = 0} must be special-cased".into()))
            } else {
                let cap = depth.max(16);
                swapped_expansion(session, &b.expansion, cap)
            }
        };
        let e1 = view(session, b1)?;
        let e2 = view(session, b2)?;
        return Ok(FramedPair { e1, e2, swapped_frame: true });
    }
    if b1.swapped == b2.swapped {
        return Ok(FramedPair {
            e1: b1.expansion.clone(),
            e2: b2.expansion.clone(),
            swapped_frame: b1.swapped,
        });
    }
    // mixed: compare in the input frame, where the tangent-to-x=0 side
    // keeps its original expansion with y-order below m
    let inp = |b: &Branch| -> PuiseuxExpansion {
        if b.swapped {
            b.input_frame.clone().expect("non-vertical swapped branch keeps its input frame")
        } else {
            b.expansion.clone()
        }
    };
    Ok(FramedPair { e1: inp(b1), e2: inp(b2), swapped_frame: false })
}

/// Germ equality of two branches (same curve or different curves).
pub fn branches_equal(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<bool> {
    match (b1.is_vertical_line(), b2.is_vertical_line()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    let pair = common_frame(session, b1, b2, depth)?;
    let tie = match (&b1.source, &b2.source) {
        (Some(f1), Some(f2)) => Some(pair_tie_bound(f1, f2)),
        _ => None,
    };
    Ok(expansions_conjugate(session, &pair.e1, &pair.e2, tie)?.is_some())
}

/// Exponent of contact of two branches: infinite iff they are the same
/// germ, otherwise the maximum pro-branch contact with one side fixed.
pub fn contact(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<ContactValue> {
    if special_line_pair(b1, b2).is_some() {
        // distinct coordinate axes meet transversally
        return Ok(if branches_equal(session, b1, b2, depth)? {
            ContactValue::Infinite
        } else {
            ContactValue::Finite(Ratio::from_integer(1))
        });
    }
    if branches_equal(session, b1, b2, depth)? {
        return Ok(ContactValue::Infinite);
    }
    let pair = common_frame(session, b1, b2, depth)?;
    let fixed = ProBranch::from_expansion(&pair.e2);
    let multiset = contact_multiset_of_expansion(session, &pair.e1, &fixed)?;
    Ok(ContactValue::Finite(*multiset.last().expect("nonempty contact multiset")))
}

/// The minimum-based reading of the same contact multiset, surfaced in
/// verbose reports next to the maximum actually used.
pub fn contact_min_reading(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<Option<Ratio<i64>>> {
    if special_line_pair(b1, b2).is_some() || branches_equal(session, b1, b2, depth)? {
        return Ok(None);
    }
    let pair = common_frame(session, b1, b2, depth)?;
    let fixed = ProBranch::from_expansion(&pair.e2);
    let multiset = contact_multiset_of_expansion(session, &pair.e1, &fixed)?;
    Ok(multiset.first().copied())
}

/// Detects the pair {x = 0, y = 0} (in either order), which admits no
/// common graph frame.
fn special_line_pair(b1: &Branch, b2: &Branch) -> Option<()> {
    if b1.is_vertical_line() && b2.is_y_equals_zero()
        || b2.is_vertical_line() && b1.is_y_equals_zero()
    {
        return Some(());
    }
    None
}

/// Public view of the coordinate-axes special case, for report code that
/// must not ask for pro-branch data of the pair {x = 0, y = 0}.
pub fn special_line_pair_public(b1: &Branch, b2: &Branch) -> Option<()> {
    special_line_pair(b1, b2)
}

/// Everything the three intersection routes produced, for verbose
/// reports.
#[derive(Clone, Debug)]
pub struct IntersectionBreakdown {
    pub value: IntersectionValue,
    pub by_substitution: Option<u64>,
    pub by_contact_formula: Option<u64>,
    pub by_pro_branch_sum: Option<u64>,
    pub contact: Option<ContactValue>,
}

/// Intersection number of two branches: the order of one branch's
/// defining polynomial along the other's parametrization, cross-checked
/// against the contact formula and the pro-branch contact sum. A
/// disagreement between the routes is an internal error.
pub fn intersection(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<IntersectionValue> {
    Ok(intersection_breakdown(session, b1, b2, depth)?.value)
}

pub fn intersection_breakdown(
    session: &mut Session,
    b1: &Branch,
    b2: &Branch,
    depth: u32,
) -> Result<IntersectionBreakdown> {
    if branches_equal(session, b1, b2, depth)? {
        return Ok(IntersectionBreakdown {
            value: IntersectionValue::Infinite,
            by_substitution: None,
            by_contact_formula: None,
            by_pro_branch_sum: None,
            contact: Some(ContactValue::Infinite),
        });
    }
    if special_line_pair(b1, b2).is_some() {
        // x = 0 against y = 0: all routes give 1
        return Ok(IntersectionBreakdown {
            value: IntersectionValue::Finite(1),
            by_substitution: Some(1),
            by_contact_formula: Some(1),
            by_pro_branch_sum: Some(1),
            contact: Some(ContactValue::Finite(Ratio::from_integer(1))),
        });
    }
    let pair = common_frame(session, b1, b2, depth)?;
    let m1 = pair.e1.ram_index as u64;
    let m2 = pair.e2.ram_index as u64;
    // contact multiset of e1's twists against a fixed pro-branch of e2
    let fixed = ProBranch::from_expansion(&pair.e2);
    let multiset = contact_multiset_of_expansion(session, &pair.e1, &fixed)?;
    let kappa = *multiset.last().unwrap();

    // route 3: m2 times the multiset sum
    let sum: Ratio<i64> = multiset.iter().sum();
    let total = sum * Ratio::from_integer(m2 as i64);
    if !total.is_integer() {
        return Err(Error::Internal(format!(
            "pro-branch contact sum is not an integer: {total}"
        )));
    }
    let v3 = total.to_integer() as u64;

    // route 2: the contact formula on e1's frame-local characteristic data
    let v2 = contact_formula_value(&pair.e1, kappa, m2)?;

    // route 1: substitute e2 into the implicitization of e1
    let cap_needed = (v2 as u32).saturating_add((m1 * m2) as u32).saturating_add(4);
    for e in [&pair.e1, &pair.e2] {
        if let Some(v) = e.trunc.valid_to() {
            if v < cap_needed {
                return Err(Error::NeedDepth {
                    suggested: cap_needed / e.ram_index.max(1) + 2,
                    what: "substitution route of the intersection number".into(),
                });
            }
        }
    }
    let t = session.tower.clone();
    let d = implicitize_expansion(&t, &pair.e1)?;
    let x_part: SeriesMap = [(pair.e2.ram_index, Elem::one())].into_iter().collect();
    let series = d.eval_series(&t, &x_part, &pair.e2.terms, cap_needed);
    // the order must be decided, not just structural: a zero-divisor
    // leading coefficient would make it differ between tower components
    let mut v1 = None;
    for (&k, c) in &series {
        match t.decide(c)? {
            Decide::Zero => continue,
            Decide::Unit(_) => {
                v1 = Some(k as u64);
                break;
            }
        }
    }
    let Some(v1) = v1 else {
        return Err(Error::Internal(
            "substitution of a distinct branch vanished to working depth".into(),
        ));
    };

    if v1 != v2 || v2 != v3 {
        return Err(Error::Internal(format!(
            "intersection routes disagree: substitution {v1}, contact formula {v2}, pro-branch sum {v3} \
             (branches {:?} and {:?}, contact {kappa})",
            pair.e1.support(),
            pair.e2.support()
        )));
    }
    Ok(IntersectionBreakdown {
        value: IntersectionValue::Finite(v1),
        by_substitution: Some(v1),
        by_contact_formula: Some(v2),
        by_pro_branch_sum: Some(v3),
        contact: Some(ContactValue::Finite(kappa)),
    })
}

/// The contact-formula route: with kappa the (maximum) contact and q the
/// index with alpha_q < kappa <= alpha_{q+1} computed from the frame-local
/// gcd chain of e1,
/// B1.B2 = (m2/m1) (sum_{r<=q} beta_r (e_{r-1} - e_r) + kappa e_q m1).
fn contact_formula_value(e1: &PuiseuxExpansion, kappa: Ratio<i64>, m2: u64) -> Result<u64> {
    let m1 = e1.ram_index as u64;
    let support: Vec<u64> = e1.support().iter().map(|&r| r as u64).collect();
    let (betas, es) = gcd_chain(m1, &support).ok_or_else(|| Error::NeedDepth {
        suggested: e1.trunc.valid_to().unwrap_or(16) * 2 / e1.ram_index.max(1) + 8,
        what: "frame-local characteristic for the contact formula".into(),
    })?;
    // q with alpha_q < kappa <= alpha_{q+1}
    let mut q = 0usize;
    while q < betas.len() {
        let alpha = Ratio::new(betas[q] as i64, m1 as i64);
        if alpha < kappa {
            q += 1;
        } else {
            break;
        }
    }
    let mut acc = Ratio::from_integer(0i64);
    for r in 0..q {
        let drop = (es[r] - es[r + 1]) as i64;
        acc += Ratio::from_integer(betas[r] as i64 * drop);
    }
    acc += kappa * Ratio::from_integer((es[q] * m1) as i64);
    let val = acc * Ratio::new(m2 as i64, m1 as i64);
    if !val.is_integer() || val < Ratio::from_integer(0) {
        return Err(Error::Internal(format!("contact formula value is not a positive integer: {val}")));
    }
    Ok(val.to_integer() as u64)
}

/// Pairwise intersection matrix of a curve's branches; the diagonal is
/// infinite by convention. Cells are computed in isolated sessions so the
/// result is identical whether or not the fill runs in parallel.
pub fn linking_matrix(
    session: &mut Session,
    curve: &Curve,
    depth: u32,
) -> Result<Vec<Vec<IntersectionValue>>> {
    let n = curve.branches.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let shared = session.tower.clone();
    let cells: Vec<Result<IntersectionValue>> = crate::par::map_slice(&pairs, |&(i, j)| {
        crate::tower::run_isolated(&shared, |s| {
            intersection(s, &curve.branches[i], &curve.branches[j], depth)
        })
    });
    let mut matrix = vec![vec![IntersectionValue::Infinite; n]; n];
    for (idx, cell) in cells.into_iter().enumerate() {
        let (i, j) = pairs[idx];
        let v = cell?;
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    Ok(matrix)
}

/// Sequential variant used as the benchmark baseline.
#[allow(clippy::needless_range_loop)] // symmetric fill reads more naturally with indices
pub fn linking_matrix_sequential(
    session: &mut Session,
    curve: &Curve,
    depth: u32,
) -> Result<Vec<Vec<IntersectionValue>>> {
    let n = curve.branches.len();
    let shared = session.tower.clone();
    let mut matrix = vec![vec![IntersectionValue::Infinite; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = crate::tower::run_isolated(&shared, |s| {
                intersection(s, &curve.branches[i], &curve.branches[j], depth)
            })?;
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    Ok(matrix)
}

/// Outcome of the equisingularity decision.
#[derive(Clone, Debug)]
pub enum Equisingularity {
    /// Curves are equisingular; the witness pairs branch i of the first
    /// curve with branch `sigma[i]` of the second.
    Yes { witness: Vec<usize> },
    /// Not equisingular, with the distinguishing invariant.
    No { reason: String },
}

/// Decide equisingularity: a bijection of branches preserving the
/// characteristic and all pairwise intersection numbers.
pub fn equisingular(
    session: &mut Session,
    c1: &Curve,
    c2: &Curve,
    depth: u32,
) -> Result<Equisingularity> {
    if c1.branches.len() != c2.branches.len() {
        return Ok(Equisingularity::No {
            reason: format!(
                "branch counts differ: {} vs {}",
                c1.branches.len(),
                c2.branches.len()
            ),
        });
    }
    let chars1 = curve_characteristics(c1)?;
    let chars2 = curve_characteristics(c2)?;
    let mut sorted1 = chars1.clone();
    let mut sorted2 = chars2.clone();
    sorted1.sort_by_key(char_key);
    sorted2.sort_by_key(char_key);
    if sorted1 != sorted2 {
        let fmt = |cs: &[PuiseuxChar]| {
            cs.iter().map(format_char).collect::<Vec<_>>().join(", ")
        };
        return Ok(Equisingularity::No {
            reason: format!(
                "characteristic multisets differ: [{}] vs [{}]",
                fmt(&sorted1),
                fmt(&sorted2)
            ),
        });
    }
    let m1 = linking_matrix(session, c1, depth)?;
    let m2 = linking_matrix(session, c2, depth)?;
    let n = c1.branches.len();
    // backtracking search for sigma with matching characteristics and
    // intersection rows
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    if assign(0, n, &chars1, &chars2, &m1, &m2, &mut sigma, &mut used) {
        let witness: Vec<usize> = sigma.into_iter().map(|x| x.unwrap()).collect();
        Ok(Equisingularity::Yes { witness })
    } else {
        Ok(Equisingularity::No {
            reason: "no branch bijection preserves the intersection matrix".into(),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    i: usize,
    n: usize,
    chars1: &[PuiseuxChar],
    chars2: &[PuiseuxChar],
    m1: &[Vec<IntersectionValue>],
    m2: &[Vec<IntersectionValue>],
    sigma: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if i == n {
        return true;
    }
    for j in 0..n {
        if used[j] || chars1[i] != chars2[j] {
            continue;
        }
        let ok = (0..i).all(|k| m1[i][k] == m2[j][sigma[k].unwrap()]);
        if !ok {
            continue;
        }
        sigma[i] = Some(j);
        used[j] = true;
        if assign(i + 1, n, chars1, chars2, m1, m2, sigma, used) {
            return true;
        }
        sigma[i] = None;
        used[j] = false;
    }
    false
}

pub fn curve_characteristics(c: &Curve) -> Result<Vec<PuiseuxChar>> {
    c.branches.iter().map(crate::branch::characteristic).collect()
}

fn char_key(c: &PuiseuxChar) -> (u64, Vec<u64>) {
    (c.m, c.betas.clone())
}

pub fn format_char(c: &PuiseuxChar) -> String {
    if c.betas.is_empty() {
        format!("({})", c.m)
    } else {
        format!(
            "({}; {})",
            c.m,
            c.betas.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// Contact between a line (y = a x or x = 0) and a branch, used by the
/// tangency criterion L.B > m(B).
pub fn line_branch_intersection(
    session: &mut Session,
    line: &crate::branch::TangentLine,
    b: &Branch,
    depth: u32,
) -> Result<IntersectionValue> {
    let line_branch = match line {
        crate::branch::TangentLine::Vertical => Branch::vertical_line(),
        crate::branch::TangentLine::Slope(a) => {
            let mut terms = SeriesMap::new();
            if !a.is_zero() {
                terms.insert(1, a.clone());
            }
            Branch {
                expansion: PuiseuxExpansion::new(1, terms, Trunc::Exact),
                swapped: false,
                input_frame: None,
                source: None,
            }
        }
    };
    intersection(session, &line_branch, b, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::TangentLine;
    use crate::tower::resolve_splits;

    fn exp_of(m: u32, terms: &[(u32, i64)]) -> PuiseuxExpansion {
        let map: SeriesMap = terms.iter().map(|&(r, c)| (r, Elem::from_int(c))).collect();
        PuiseuxExpansion::new(m, map, Trunc::Exact)
    }

    fn branch_of(session: &mut Session, m: u32, terms: &[(u32, i64)]) -> Branch {
        Branch::from_expansion(session, &exp_of(m, terms), 64).unwrap()
    }

    fn q(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn pro_contact_basics() {
        resolve_splits(|s| {
            // x^(3/2) vs -x^(3/2): differ at 3/2
            let g = ProBranch { denom: 2, terms: [(3u32, Elem::one())].into_iter().collect(), trunc: Trunc::Exact };
            let h = ProBranch {
                denom: 2,
                terms: [(3u32, Elem::from_int(-1))].into_iter().collect(),
                trunc: Trunc::Exact,
            };
            assert_eq!(pro_contact(s, &g, &g.clone())?, ContactValue::Infinite);
            assert_eq!(pro_contact(s, &g, &h)?, ContactValue::Finite(q(3, 2)));
            // x^(3/2) vs x^(3/2) + x^(7/4): differ at 7/4
            let h = ProBranch {
                denom: 4,
                terms: [(6u32, Elem::one()), (7, Elem::one())].into_iter().collect(),
                trunc: Trunc::Exact,
            };
            assert_eq!(pro_contact(s, &g, &h)?, ContactValue::Finite(q(7, 4)));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn contact_multiset_golden() {
        // branch (t^4, t^6 + t^7) against the pro-branch x^(3/2) of
        // (t^2, t^3): multiset {3/2, 3/2, 7/4, 7/4}
        resolve_splits(|s| {
            let b = exp_of(4, &[(6, 1), (7, 1)]);
            let fixed = ProBranch {
                denom: 2,
                terms: [(3u32, Elem::one())].into_iter().collect(),
                trunc: Trunc::Exact,
            };
            let ms = contact_multiset_of_expansion(s, &b, &fixed)?;
            assert_eq!(ms, vec![q(3, 2), q(3, 2), q(7, 4), q(7, 4)]);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn self_multiset_golden() {
        // self multiset of (t^4, t^6+t^7): {3/2, 3/2, 7/4}
        resolve_splits(|s| {
            let b = branch_of(s, 4, &[(6, 1), (7, 1)]);
            let ms = self_contact_multiset(s, &b)?;
            assert_eq!(ms, vec![q(3, 2), q(3, 2), q(7, 4)]);
            // smooth branch: empty
            let b = branch_of(s, 1, &[(1, 1)]);
            assert!(self_contact_multiset(s, &b)?.is_empty());
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn contact_golden_pair() {
        resolve_splits(|s| {
            let b1 = branch_of(s, 2, &[(3, 1)]);
            let b2 = branch_of(s, 4, &[(6, 1), (7, 1)]);
            // the maximum convention gives 7/4
            assert_eq!(contact(s, &b1, &b2, 32)?, ContactValue::Finite(q(7, 4)));
            // the min reading of the same multiset is 3/2
            assert_eq!(contact_min_reading(s, &b1, &b2, 32)?, Some(q(3, 2)));
            // self contact is infinite
            assert_eq!(contact(s, &b1, &b1.clone(), 32)?, ContactValue::Infinite);
            // transversal smooth branches: contact 1
            let y_eq_x = branch_of(s, 1, &[(1, 1)]);
            let y_eq_neg_x = branch_of(s, 1, &[(1, -1)]);
            assert_eq!(contact(s, &y_eq_x, &y_eq_neg_x, 32)?, ContactValue::Finite(q(1, 1)));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn intersection_golden_13() {
        resolve_splits(|s| {
            let b1 = branch_of(s, 2, &[(3, 1)]);
            let b2 = branch_of(s, 4, &[(6, 1), (7, 1)]);
            let bd = intersection_breakdown(s, &b1, &b2, 32)?;
            assert_eq!(bd.value, IntersectionValue::Finite(13));
            assert_eq!(bd.by_substitution, Some(13));
            assert_eq!(bd.by_contact_formula, Some(13));
            assert_eq!(bd.by_pro_branch_sum, Some(13));
            // symmetry
            let sym = intersection(s, &b2, &b1, 32)?;
            assert_eq!(sym, IntersectionValue::Finite(13));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn intersection_of_equal_branches_is_infinite() {
        resolve_splits(|s| {
            let b1 = branch_of(s, 2, &[(3, 1)]);
            assert_eq!(intersection(s, &b1, &b1.clone(), 32)?, IntersectionValue::Infinite);
            // conjugate parametrizations are the same germ
            let b2 = branch_of(s, 2, &[(3, -1)]);
            assert_eq!(intersection(s, &b1, &b2, 32)?, IntersectionValue::Infinite);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn line_pairs() {
        resolve_splits(|s| {
            let x0 = Branch::vertical_line();
            let y0 = branch_of(s, 1, &[]);
            assert_eq!(intersection(s, &x0, &y0, 16)?, IntersectionValue::Finite(1));
            assert_eq!(intersection(s, &x0, &x0.clone(), 16)?, IntersectionValue::Infinite);
            // x = 0 against the cusp branch (t^3, t^2) (tangent x = 0):
            // order of x along the parametrization is 3
            let cusp = branch_of(s, 3, &[(2, 1)]);
            assert!(cusp.swapped);
            assert_eq!(intersection(s, &x0, &cusp, 32)?, IntersectionValue::Finite(3));
            // y = 0 against the same branch: order of y = 2
            assert_eq!(intersection(s, &y0, &cusp, 32)?, IntersectionValue::Finite(2));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn tangency_criterion() {
        // L.B > m(B) iff L is the tangent line
        resolve_splits(|s| {
            let b = branch_of(s, 3, &[(2, 1), (4, 1)]); // tangent x=0, m(B)=2
            let tangent = b.tangent();
            assert_eq!(tangent, TangentLine::Vertical);
            let m = b.multiplicity() as u64;
            for line in [
                TangentLine::Vertical,
                TangentLine::Slope(Elem::zero()),
                TangentLine::Slope(Elem::one()),
                TangentLine::Slope(Elem::from_int(-2)),
                TangentLine::Slope(Elem::imaginary_unit()),
            ] {
                let v = line_branch_intersection(s, &line, &b, 32)?;
                let above = match v {
                    IntersectionValue::Finite(k) => k > m,
                    IntersectionValue::Infinite => true,
                };
                assert_eq!(above, line == tangent, "criterion failed for {line:?}");
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn curve_is_equisingular_to_itself_with_identity_witness() {
        resolve_splits(|s| {
            let f = crate::bipoly::BiPoly::from_terms([
                ((0u32, 3u32), Elem::one()),
                ((6, 0), Elem::one()),
            ]);
            let c = crate::newton::branches_of(s, &f, 24)?;
            match equisingular(s, &c, &c.clone(), 24)? {
                Equisingularity::Yes { witness } => {
                    assert_eq!(witness, vec![0, 1, 2]);
                }
                Equisingularity::No { reason } => panic!("self comparison failed: {reason}"),
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn product_curve_linking_matrix() {
        // the two cusps analyzed as one curve: off-diagonal entries 6
        resolve_splits(|s| {
            let t = &s.tower.clone();
            let c1 = crate::bipoly::BiPoly::from_terms([
                ((2u32, 0u32), Elem::one()),
                ((0, 3), Elem::from_int(-1)),
            ]);
            let c2 = crate::bipoly::BiPoly::from_terms([
                ((2u32, 0u32), Elem::one()),
                ((0, 5), Elem::from_int(-1)),
            ]);
            let f = c1.mul(t, &c2);
            let curve = crate::newton::branches_of(s, &f, 30)?;
            assert_eq!(curve.branches.len(), 2);
            let m = linking_matrix(s, &curve, 30)?;
            assert_eq!(m[0][1], IntersectionValue::Finite(6));
            assert_eq!(m[1][0], IntersectionValue::Finite(6));
            assert_eq!(m[0][0], IntersectionValue::Infinite);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn braided_cusp_pair() {
        // y^4 - 2x^3 y^2 + x^6 - x^7 = (y^2 - x^3)^2 - x^7: two branches
        // y = +-x^(3/2) (1 +- x^(1/2))^(1/2), both of type (2;3), whose
        // pro-branches agree through 3/2 and part at exponent 2, giving
        // intersection 1 * (2/2) * (3 + 2*2) = 7
        resolve_splits(|s| {
            let f = crate::bipoly::BiPoly::from_terms([
                ((0u32, 4u32), Elem::one()),
                ((3, 2), Elem::from_int(-2)),
                ((6, 0), Elem::one()),
                ((7, 0), Elem::from_int(-1)),
            ]);
            let curve = crate::newton::branches_of(s, &f, 28)?;
            assert_eq!(curve.branches.len(), 2);
            for b in &curve.branches {
                let c = crate::branch::characteristic(b)?;
                assert_eq!((c.m, c.betas.clone()), (2, vec![3]));
            }
            let v = intersection(s, &curve.branches[0], &curve.branches[1], 28)?;
            assert_eq!(v, IntersectionValue::Finite(7));
            let k = contact(s, &curve.branches[0], &curve.branches[1], 28)?;
            assert_eq!(k, ContactValue::Finite(q(2, 1)));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn semigroup_generators_realized_as_orders() {
        // for (t^4, t^6 + t^7): the images of x, y and x^3 - y^2 have
        // orders 4, 6, 13, matching the beta-bar generators; the first
        // two are intersections with the coordinate axes, the last with
        // the truncation-derived branch (t^2, t^3)
        resolve_splits(|s| {
            let b = branch_of(s, 4, &[(6, 1), (7, 1)]);
            let x0 = Branch::vertical_line();
            let y0 = branch_of(s, 1, &[]);
            assert_eq!(intersection(s, &x0, &b, 32)?, IntersectionValue::Finite(4));
            assert_eq!(intersection(s, &y0, &b, 32)?, IntersectionValue::Finite(6));
            // direct order of the image of x^3 - y^2
            let g = crate::bipoly::BiPoly::from_terms([
                ((3u32, 0u32), Elem::one()),
                ((0, 2), Elem::from_int(-1)),
            ]);
            let x: SeriesMap = [(4u32, Elem::one())].into_iter().collect();
            let val = g.eval_series(&s.tower, &x, &b.expansion.terms, 40);
            assert_eq!(val.keys().next(), Some(&13));
            // and as an intersection number with the truncated branch
            let trunc = branch_of(s, 2, &[(3, 1)]);
            assert_eq!(intersection(s, &trunc, &b, 32)?, IntersectionValue::Finite(13));
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn ultrametric_triples() {
        resolve_splits(|s| {
            let triples = [
                [
                    exp_of(2, &[(3, 1)]),
                    exp_of(2, &[(3, 1), (4, 1)]),
                    exp_of(2, &[(3, 1), (5, 1)]),
                ],
                [
                    exp_of(1, &[(1, 1)]),
                    exp_of(1, &[(1, 1), (2, 1)]),
                    exp_of(1, &[(1, -1)]),
                ],
                [
                    exp_of(4, &[(6, 1), (7, 1)]),
                    exp_of(2, &[(3, 1)]),
                    exp_of(4, &[(6, 1), (7, 2)]),
                ],
            ];
            for triple in &triples {
                let mut branches = Vec::new();
                for e in triple {
                    branches.push(Branch::from_expansion(s, e, 64)?);
                }
                let c01 = contact(s, &branches[0], &branches[1], 32)?;
                let c02 = contact(s, &branches[0], &branches[2], 32)?;
                let c12 = contact(s, &branches[1], &branches[2], 32)?;
                let vals: Vec<Ratio<i64>> = [c01, c02, c12]
                    .iter()
                    .map(|c| match c {
                        ContactValue::Finite(v) => *v,
                        ContactValue::Infinite => Ratio::from_integer(i64::MAX / 2),
                    })
                    .collect();
                let mut sorted = vals.clone();
                sorted.sort();
                // two smallest coincide
                assert_eq!(sorted[0], sorted[1], "ultrametric failed: {vals:?}");
            }
            Ok(())
        })
        .unwrap();
    }
}
