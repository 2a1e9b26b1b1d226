//! Branches, normalization, the Puiseux characteristic and the tangent
//! line / multiplicity data.

use crate::error::{Error, Result};
use crate::series::{swapped_expansion, PuiseuxExpansion, Trunc};
use crate::tower::{Elem, Session, Tower};
use num_integer::gcd;

/// A normalized branch. The expansion is stored in the frame where the
/// branch is not tangent to x = 0 (so ord_y >= ram_index); `swapped`
/// records that this frame is the (y, x) one. For swapped branches the
/// original-frame expansion is kept alongside when it exists (the line
/// x = 0 has none). `source` remembers the defining polynomial of the
/// curve the branch came from, which bounds how deep two truncated
/// expansions can agree without being the same germ.
#[derive(Clone, Debug)]
pub struct Branch {
    pub expansion: PuiseuxExpansion,
    pub swapped: bool,
    pub input_frame: Option<PuiseuxExpansion>,
    pub source: Option<crate::bipoly::BiPoly>,
}

/// The tangent line of a branch at the origin, in the input frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangentLine {
    /// y = a x
    Slope(Elem),
    /// x = 0
    Vertical,
}

/// A decomposed curve: its branches, the defining polynomial when one is
/// known, and the expansion order that was actually used.
#[derive(Clone, Debug)]
pub struct Curve {
    pub branches: Vec<Branch>,
    pub defining_poly: Option<crate::bipoly::BiPoly>,
    pub order_used: u32,
}

impl Branch {
    /// The branch x = 0 (stored in the swapped frame as y = 0).
    pub fn vertical_line() -> Branch {
        Branch {
            expansion: PuiseuxExpansion::new(1, Default::default(), Trunc::Exact),
            swapped: true,
            input_frame: None,
            source: None,
        }
    }

    pub fn is_vertical_line(&self) -> bool {
        self.swapped && self.expansion.terms.is_empty()
    }

    pub fn is_y_equals_zero(&self) -> bool {
        !self.swapped && self.expansion.terms.is_empty()
    }

    /// Multiplicity m(B) = min of the parametrization orders; equals the
    /// ramification index of the stored (non-tangent) frame. Unrelated to
    /// the expansion's own solution multiplicity.
    #[allow(clippy::misnamed_getters)]
    pub fn multiplicity(&self) -> u32 {
        self.expansion.ram_index
    }

    /// The unique tangent line, reported in the input frame.
    pub fn tangent(&self) -> TangentLine {
        if self.swapped {
            // stored frame has ord_y > m, so the stored-frame tangent is
            // y = 0, i.e. x = 0 in the input frame
            return TangentLine::Vertical;
        }
        let m = self.expansion.ram_index;
        match self.expansion.ord_y() {
            Some(r) if r == m => TangentLine::Slope(self.expansion.terms[&m].clone()),
            _ => TangentLine::Slope(Elem::zero()),
        }
    }

    /// Build a normalized branch from a raw expansion in the input frame,
    /// swapping coordinates when the branch is tangent to x = 0. `cap`
    /// bounds the t-order of a computed swapped view.
    pub fn from_expansion(
        session: &mut Session,
        exp: &PuiseuxExpansion,
        cap: u32,
    ) -> Result<Branch> {
        let exp = normalize_expansion(exp)?;
        let m = exp.ram_index;
        match exp.ord_y() {
            None => {
                // y-part zero within the known range
                if !exp.is_exact() {
                    return Err(Error::NeedDepth {
                        suggested: exp.trunc.valid_to().unwrap_or(0) * 2 + 8,
                        what: "classifying a branch with no terms yet".into(),
                    });
                }
                // the branch y = 0
                Ok(Branch { expansion: exp, swapped: false, input_frame: None, source: None })
            }
            Some(r) if r >= m => Ok(Branch { expansion: exp, swapped: false, input_frame: None, source: None }),
            Some(_) => {
                // tangent to x = 0: store the swapped frame
                let sw = swapped_expansion(session, &exp, cap)?;
                let sw = normalize_expansion(&sw)?;
                Ok(Branch { expansion: sw, swapped: true, input_frame: Some(exp), source: None })
            }
        }
    }
}

/// Reparametrize so the exponents have gcd 1 (injectivity). A zero y-part
/// with m > 1 collapses to the parametrization (t, 0) of y = 0.
pub fn normalize_expansion(exp: &PuiseuxExpansion) -> Result<PuiseuxExpansion> {
    if exp.terms.is_empty() {
        let mut out = exp.clone();
        out.ram_index = 1;
        return Ok(out);
    }
    let g = exp.exponent_gcd();
    if g <= 1 {
        return Ok(exp.clone());
    }
    if !exp.is_exact() {
        // dividing exponents of a truncated expansion is only sound once
        // the gcd is final, which needs e_g = 1 within the known range
        return Err(Error::NeedDepth {
            suggested: exp.trunc.valid_to().unwrap_or(0) * 2 + 8,
            what: "normalizing a truncated expansion".into(),
        });
    }
    Ok(exp.divide_exponents(g))
}

/// The Puiseux characteristic (m; beta_1..beta_g) with the auxiliary
/// gcd chain e_0..e_g and the derived semigroup generators beta-bar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxChar {
    pub m: u64,
    pub betas: Vec<u64>,
    pub es: Vec<u64>,
    pub beta_bars: Vec<u64>,
}

impl PuiseuxChar {
    /// Assemble and validate from m and the characteristic exponents.
    pub fn new(m: u64, betas: Vec<u64>) -> Result<PuiseuxChar> {
        if m == 0 {
            return Err(Error::InvalidInput("ramification index must be positive".into()));
        }
        let mut es = vec![m];
        let mut prev = 0u64;
        for &b in &betas {
            if b <= prev {
                return Err(Error::InvalidInput("characteristic exponents must increase".into()));
            }
            let e_prev = *es.last().unwrap();
            if b % e_prev == 0 {
                return Err(Error::InvalidInput(
                    "characteristic exponent divisible by the previous gcd".into(),
                ));
            }
            es.push(gcd(e_prev, b));
            prev = b;
        }
        if *es.last().unwrap() != 1 {
            return Err(Error::InvalidInput("gcd chain does not reach 1".into()));
        }
        let beta_bars = beta_bars_from(m, &betas, &es);
        Ok(PuiseuxChar { m, betas, es, beta_bars })
    }

    pub fn genus(&self) -> usize {
        self.betas.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.m == 1
    }
}

/// The beta-bar sequence of a characteristic (the minimal semigroup
/// generators).
pub fn beta_bars(c: &PuiseuxChar) -> Vec<u64> {
    c.beta_bars.clone()
}

/// beta-bar sequence from the linear recurrence
/// bb_{i+1} = beta_{i+1} - beta_i + (e_{i-1}/e_i) bb_i, with bb_0 = m and
/// bb_1 = beta_1.
pub fn beta_bars_from(m: u64, betas: &[u64], es: &[u64]) -> Vec<u64> {
    let mut bb = vec![m];
    for (i, &b) in betas.iter().enumerate() {
        if i == 0 {
            bb.push(b);
        } else {
            let prev = bb[i];
            let factor = es[i - 1] / es[i];
            bb.push(b - betas[i - 1] + factor * prev);
        }
    }
    bb
}

/// The gcd chain (betas, es) read off an exponent support for a given
/// ramification index; `None` when the chain does not reach 1 within the
/// support (truncation too shallow or non-injective data).
pub fn gcd_chain(m: u64, support: &[u64]) -> Option<(Vec<u64>, Vec<u64>)> {
    let mut es = vec![m];
    let mut betas = Vec::new();
    while *es.last().unwrap() != 1 {
        let e = *es.last().unwrap();
        let beta = support.iter().copied().find(|r| r % e != 0)?;
        betas.push(beta);
        es.push(gcd(e, beta));
    }
    Some((betas, es))
}

/// Puiseux characteristic of a branch, computed in its stored
/// (non-tangent) frame. Refuses to answer on insufficient truncation.
pub fn characteristic(b: &Branch) -> Result<PuiseuxChar> {
    let exp = &b.expansion;
    let m = exp.ram_index as u64;
    let support: Vec<u64> = exp.support().iter().map(|&r| r as u64).collect();
    match gcd_chain(m, &support) {
        Some((betas, _)) => PuiseuxChar::new(m, betas),
        None => {
            if exp.is_exact() {
                Err(Error::InvalidInput(
                    "parametrization is not injective (exponent gcd above 1)".into(),
                ))
            } else {
                Err(Error::NeedDepth {
                    suggested: exp.trunc.valid_to().unwrap_or(0) * 2 + 8,
                    what: "completing the Puiseux characteristic".into(),
                })
            }
        }
    }
}

/// Tangent line and multiplicity in the input frame, with the tangency
/// consistency L.B > m(B) available to tests through the contact module.
pub fn tangent_and_multiplicity(b: &Branch) -> (TangentLine, u32) {
    (b.tangent(), b.multiplicity())
}

/// Public normalization of a branch per the injectivity criterion.
pub fn normalize(session: &mut Session, b: &Branch, cap: u32) -> Result<Branch> {
    // the stored expansion is kept normalized; renormalize the input
    // frame if the caller assembled the branch by hand
    match &b.input_frame {
        Some(inp) => Branch::from_expansion(session, inp, cap),
        None => {
            let exp = normalize_expansion(&b.expansion)?;
            Ok(Branch { expansion: exp, ..b.clone() })
        }
    }
}

/// Display helper: the exponent/coefficient view of an expansion as
/// `x = t^m, y = c_1 t^{r_1} + ...`.
pub fn expansion_to_string(t: &Tower, exp: &PuiseuxExpansion) -> String {
    let mut parts = Vec::new();
    for (&r, c) in &exp.terms {
        let cs = t.display_elem(c);
        let pow = if r == 1 { "t".to_string() } else { format!("t^{r}") };
        if cs == "1" {
            parts.push(pow);
        } else if cs == "-1" {
            parts.push(format!("-{pow}"));
        } else if cs.contains('+') || cs.rfind('-').is_some_and(|p| p > 0) {
            parts.push(format!("({cs})*{pow}"));
        } else {
            parts.push(format!("{cs}*{pow}"));
        }
    }
    let y = if parts.is_empty() {
        "0".to_string()
    } else {
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    };
    let m = exp.ram_index;
    let x = if m == 1 { "t".to_string() } else { format!("t^{m}") };
    format!("x = {x}, y = {y}")
}
