//! Command orchestration: builds curves from parsed inputs, drives the
//! split-restart and depth-deepening loops, and assembles reports.

use crate::input::{parse_input, print_bipoly, InputSpec};
use crate::report::{self, Report};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use singcurve::branch::{characteristic, Branch, Curve};
use singcurve::contact::{
    self, contact, contact_min_reading, contact_multiset_of_expansion, equisingular,
    intersection_breakdown, linking_matrix, Equisingularity, IntersectionValue, ProBranch,
};
use singcurve::error::Error;
use singcurve::intpoly::{cyclotomic, totient, IntPoly};
use singcurve::knot::{
    alexander_symbol, cabling_invariants, char_from_alexander, cyclotomic_form, expand_symbol,
    Symbol,
};
use singcurve::newton::{branches_of, expand, reduce_defining_poly};
use singcurve::semigroup::semigroup_of;
use singcurve::series::{PuiseuxExpansion, Trunc};
use singcurve::tower::{Session, Tower};

pub struct Options {
    pub order: Option<u32>,
    pub verbose: bool,
    pub reduce: bool,
}

/// Exit-code classification of a failed run.
pub enum RunError {
    Parse(String),
    Math(String),
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => 2,
            RunError::Math(_) => 3,
            RunError::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Parse(m) | RunError::Math(m) | RunError::Internal(m) => m,
        }
    }
}

const ORDER_CAP: u32 = 4096;

/// Run one command over already-parsed inputs, restarting over refined
/// towers on zero-divisor splits and deepening the expansion order on
/// truncation shortfalls (unless the user pinned the order).
pub fn run_command(
    command: &str,
    raw_inputs: &[String],
    opts: &Options,
) -> Result<Report, RunError> {
    if command == "recover" {
        // the input is a symbol or an integer polynomial in t, not a curve
        let [raw] = raw_inputs else {
            return Err(RunError::Math("'recover' takes exactly one input".into()));
        };
        let mut report = Report::new("recover", vec![raw.clone()]);
        return match cmd_recover_text(raw, &mut report) {
            Ok(()) => Ok(report),
            Err(Error::InvalidInput(m)) => Err(RunError::Math(m)),
            Err(Error::Internal(m)) => Err(RunError::Internal(m)),
            Err(e) => Err(RunError::Math(e.to_string())),
        };
    }
    let mut inputs = Vec::new();
    for raw in raw_inputs {
        inputs.push(parse_input(raw).map_err(|e| RunError::Parse(e.to_string()))?);
    }
    let user_order = opts.order;
    let mut order = user_order.unwrap_or_else(|| initial_order(&inputs));
    let mut ctx = Tower::base();
    // splits strictly refine the tower and deepenings are capped, so this
    // terminates; the bound guards against driver bugs
    for _ in 0..4096 {
        let mut session = Session::with_tower(ctx.reset_for_replay());
        match dispatch(command, &inputs, &mut session, order, opts) {
            Ok(report) => return Ok(report),
            Err(Error::Split { zero_part, .. }) => {
                ctx = zero_part;
            }
            Err(Error::NeedDepth { suggested, what }) => {
                if user_order.is_some() {
                    return Err(RunError::Math(format!(
                        "--order {} is too shallow for {what}; try --order {}",
                        order,
                        suggested.max(order * 2)
                    )));
                }
                if order >= ORDER_CAP {
                    return Err(RunError::Math(format!(
                        "expansion order cap reached while {what}"
                    )));
                }
                order = (order * 2).max(suggested).min(ORDER_CAP);
                ctx = Tower::base();
            }
            Err(Error::InvalidInput(m)) => return Err(RunError::Math(m)),
            Err(Error::NotReduced(m)) => {
                return Err(RunError::Math(format!(
                    "{m} (rerun with --reduce to strip repeated factors)"
                )))
            }
            Err(Error::Internal(m)) => return Err(RunError::Internal(m)),
        }
    }
    Err(RunError::Internal("the analysis driver did not converge".into()))
}

fn initial_order(inputs: &[InputSpec]) -> u32 {
    let mut o = 8;
    for input in inputs {
        match input {
            InputSpec::Implicit { poly, .. } => {
                o = o.max(2 * (poly.deg_x() + poly.deg_y()).max(2));
            }
            InputSpec::Param { y_terms, .. } => {
                let top = y_terms.keys().next_back().copied().unwrap_or(1);
                o = o.max(top + 4);
            }
        }
    }
    o
}

/// Build a curve (branch list) from one parsed input.
fn curve_from_input(
    session: &mut Session,
    input: &InputSpec,
    order: u32,
    opts: &Options,
) -> Result<Curve, Error> {
    match input {
        InputSpec::Implicit { poly, .. } => {
            if poly.is_zero() {
                return Err(Error::InvalidInput("the zero polynomial defines no curve".into()));
            }
            if !poly.coeff(0, 0).is_zero() {
                return Err(Error::InvalidInput(
                    "the curve must pass through the origin (constant term present)".into(),
                ));
            }
            let f = if opts.reduce {
                reduce_defining_poly(session, poly)?.0
            } else {
                poly.clone()
            };
            branches_of(session, &f, order)
        }
        InputSpec::Param { ram_index, y_terms, .. } => {
            let branch = if *ram_index == 0 {
                Branch::vertical_line()
            } else {
                let exp = PuiseuxExpansion::new(*ram_index, y_terms.clone(), Trunc::Exact);
                let cap = order.saturating_mul(*ram_index).max(32);
                Branch::from_expansion(session, &exp, cap)?
            };
            Ok(Curve { branches: vec![branch], defining_poly: None, order_used: order })
        }
    }
}

fn dispatch(
    command: &str,
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
) -> Result<Report, Error> {
    let mut report = Report::new(command, inputs.iter().map(|i| i.text().to_string()).collect());
    report.order_used = order;
    match command {
        "expand" => cmd_expand(inputs, session, order, opts, &mut report)?,
        "branches" => cmd_branches(inputs, session, order, opts, &mut report)?,
        "char" => cmd_char(inputs, session, order, opts, &mut report)?,
        "semigroup" => cmd_semigroup(inputs, session, order, opts, &mut report)?,
        "implicitize" => cmd_implicitize(inputs, session, order, opts, &mut report)?,
        "intersect" => cmd_intersect(inputs, session, order, opts, &mut report)?,
        "contact" => cmd_contact(inputs, session, order, opts, &mut report)?,
        "equisingular" => cmd_equisingular(inputs, session, order, opts, &mut report)?,
        "cabling" => cmd_cabling(inputs, session, order, opts, &mut report)?,
        "alexander" => cmd_alexander(inputs, session, order, opts, &mut report)?,
        other => {
            return Err(Error::InvalidInput(format!("unknown command '{other}'")));
        }
    }
    Ok(report)
}

fn single<'a>(inputs: &'a [InputSpec], command: &str) -> Result<&'a InputSpec, Error> {
    match inputs {
        [one] => Ok(one),
        _ => Err(Error::InvalidInput(format!("'{command}' takes exactly one input"))),
    }
}

fn pair<'a>(inputs: &'a [InputSpec], command: &str) -> Result<(&'a InputSpec, &'a InputSpec), Error> {
    match inputs {
        [a, b] => Ok((a, b)),
        _ => Err(Error::InvalidInput(format!("'{command}' takes exactly two inputs"))),
    }
}

fn cmd_expand(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    _opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "expand")?;
    match input {
        InputSpec::Implicit { poly, .. } => {
            let out = expand(session, poly, order)?;
            let mut items = Vec::new();
            for sol in &out.solutions {
                items.push(report::expansion_entry(&session.tower, sol));
            }
            report.results = report::json!({
                "expansions": items,
                "vertical_line_multiplicity": out.vertical_multiplicity,
            });
            report.push_text(format!("{} expansion(s)", out.solutions.len()));
            if out.vertical_multiplicity > 0 {
                report.push_text(format!(
                    "vertical line x = 0 with multiplicity {}",
                    out.vertical_multiplicity
                ));
            }
            for sol in &out.solutions {
                report.push_text(report::expansion_line(&session.tower, sol));
            }
            report.note_generators(&session.tower);
        }
        InputSpec::Param { .. } => {
            let curve = curve_from_input(session, input, order, _opts)?;
            let b = &curve.branches[0];
            report.results = report::json!({
                "expansions": [report::branch_entry(&session.tower, b)],
                "vertical_line_multiplicity": if b.is_vertical_line() { 1 } else { 0 },
            });
            report.push_text(report::branch_line(&session.tower, b));
            report.note_frames(std::slice::from_ref(b));
        }
    }
    Ok(())
}

fn cmd_branches(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "branches")?;
    let curve = curve_from_input(session, input, order, opts)?;
    report.order_used = curve.order_used;
    let mut entries = Vec::new();
    for b in &curve.branches {
        let mut e = report::branch_entry(&session.tower, b);
        let ch = characteristic(b)?;
        e["characteristic"] = report::char_json(&ch);
        let (tangent, mult) = singcurve::branch::tangent_and_multiplicity(b);
        e["tangent"] = report::json!(report::tangent_string(&session.tower, &tangent));
        e["multiplicity"] = report::json!(mult);
        entries.push(e);
    }
    report.results = report::json!({ "branches": entries });
    report.push_text(format!("{} branch(es)", curve.branches.len()));
    for (i, b) in curve.branches.iter().enumerate() {
        let ch = characteristic(b)?;
        let (tangent, mult) = singcurve::branch::tangent_and_multiplicity(b);
        report.push_text(format!(
            "branch {}: {}  characteristic {}  tangent {}  multiplicity {}",
            i + 1,
            report::branch_line(&session.tower, b),
            contact::format_char(&ch),
            report::tangent_string(&session.tower, &tangent),
            mult
        ));
    }
    report.note_frames(&curve.branches);
    report.note_generators(&session.tower);
    if opts.verbose && curve.branches.len() > 1 {
        let matrix = linking_matrix(session, &curve, order)?;
        report.results["intersection_matrix"] = report::matrix_json(&matrix);
        report.push_text(report::matrix_text(&matrix));
    }
    Ok(())
}

fn cmd_char(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "char")?;
    let curve = curve_from_input(session, input, order, opts)?;
    let mut entries = Vec::new();
    for b in &curve.branches {
        let ch = characteristic(b)?;
        entries.push(report::char_json(&ch));
        report.push_text(format!(
            "characteristic {}  e = ({})  beta-bar = ({})",
            contact::format_char(&ch),
            ch.es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "),
            ch.beta_bars.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    report.results = report::json!({ "characteristics": entries });
    report.note_frames(&curve.branches);
    Ok(())
}

fn cmd_semigroup(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "semigroup")?;
    let curve = curve_from_input(session, input, order, opts)?;
    let mut entries = Vec::new();
    for b in &curve.branches {
        let ch = characteristic(b)?;
        let s = semigroup_of(&ch);
        let members: Vec<u64> = (0..s.conductor + 3).filter(|&n| s.contains(n)).collect();
        entries.push(report::json!({
            "generators": s.generators,
            "conductor": s.conductor,
            "frobenius": s.frobenius(),
            "delta": s.delta,
            "gaps": s.gaps(),
            "members_up_to_conductor": members,
        }));
        report.push_text(format!(
            "semigroup generated by ({}); N = {}, conductor = {}, delta = {}",
            s.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
            s.frobenius(),
            s.conductor,
            s.delta
        ));
        report.push_text(format!(
            "gaps: {{{}}}",
            s.gaps().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    report.results = report::json!({ "semigroups": entries });
    report.note_frames(&curve.branches);
    Ok(())
}

fn cmd_implicitize(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "implicitize")?;
    if !matches!(input, InputSpec::Param { .. }) {
        return Err(Error::InvalidInput("'implicitize' expects a parametrization input".into()));
    }
    let curve = curve_from_input(session, input, order, opts)?;
    let b = &curve.branches[0];
    let truncated = !b.expansion.is_exact();
    let d = singcurve::newton::implicitize(&session.tower, b)?;
    let printed = print_bipoly(&session.tower, &d);
    report.results = report::json!({
        "polynomial": printed,
        "truncated_parametrization": truncated,
    });
    report.push_text(format!("f(x, y) = {printed}"));
    if truncated {
        report.push_text(
            "note: the parametrization was truncated; the polynomial matches it to the stored order"
                .to_string(),
        );
    }
    report.note_frames(std::slice::from_ref(b));
    Ok(())
}

fn intersect_curves(
    session: &mut Session,
    c1: &Curve,
    c2: &Curve,
    order: u32,
) -> Result<Vec<Vec<IntersectionValue>>, Error> {
    let mut rows = Vec::new();
    for b1 in &c1.branches {
        let mut row = Vec::new();
        for b2 in &c2.branches {
            row.push(contact::intersection(session, b1, b2, order)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_intersect(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let (i1, i2) = pair(inputs, "intersect")?;
    let c1 = curve_from_input(session, i1, order, opts)?;
    let c2 = curve_from_input(session, i2, order, opts)?;
    let rows = intersect_curves(session, &c1, &c2, order)?;
    if rows.len() == 1 && rows[0].len() == 1 {
        report.results = report::json!({ "intersection": report::ival_json(&rows[0][0]) });
        report.push_text(format!("intersection number: {}", report::ival_text(&rows[0][0])));
        if opts.verbose {
            let bd = intersection_breakdown(session, &c1.branches[0], &c2.branches[0], order)?;
            report.results["routes"] = report::json!({
                "substitution": bd.by_substitution,
                "contact_formula": bd.by_contact_formula,
                "pro_branch_sum": bd.by_pro_branch_sum,
            });
            if let Some(c) = bd.contact {
                report.results["contact"] = report::cval_json(&c);
                report.push_text(format!("exponent of contact: {}", report::cval_text(&c)));
                report.note_erratum();
            }
        }
    } else {
        report.results = report::json!({
            "intersection_matrix": rows
                .iter()
                .map(|r| r.iter().map(report::ival_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        report.push_text(format!(
            "branch-pairwise intersection matrix ({} x {}):",
            rows.len(),
            rows[0].len()
        ));
        for row in &rows {
            report.push_text(
                row.iter().map(report::ival_text).collect::<Vec<_>>().join("  "),
            );
        }
    }
    report.note_frames(&c1.branches);
    report.note_frames(&c2.branches);
    Ok(())
}

fn cmd_contact(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let (i1, i2) = pair(inputs, "contact")?;
    let c1 = curve_from_input(session, i1, order, opts)?;
    let c2 = curve_from_input(session, i2, order, opts)?;
    let mut rows = Vec::new();
    let mut text_rows = Vec::new();
    for b1 in &c1.branches {
        let mut row = Vec::new();
        let mut tr = Vec::new();
        for b2 in &c2.branches {
            let v = contact(session, b1, b2, order)?;
            tr.push(report::cval_text(&v));
            row.push(report::cval_json(&v));
        }
        rows.push(row);
        text_rows.push(tr.join("  "));
    }
    report.results = report::json!({ "contact": rows });
    if rows.len() == 1 && rows[0].len() == 1 {
        report.push_text(format!("exponent of contact: {}", text_rows[0]));
    } else {
        report.push_text("branch-pairwise exponents of contact:".to_string());
        for r in text_rows {
            report.push_text(r);
        }
    }
    report.note_erratum();
    let scalar_finite = c1.branches.len() == 1
        && c2.branches.len() == 1
        && !contact::branches_equal(session, &c1.branches[0], &c2.branches[0], order)?
        && contact::special_line_pair_public(&c1.branches[0], &c2.branches[0]).is_none();
    if opts.verbose && scalar_finite {
        if let Some(minv) = contact_min_reading(session, &c1.branches[0], &c2.branches[0], order)? {
            report.results["contact_min_reading"] = report::json!(report::ratio_text(&minv));
            report.push_text(format!(
                "minimum reading of the same multiset: {}",
                report::ratio_text(&minv)
            ));
        }
        // the multiset itself
        let pairf = contact::common_frame(session, &c1.branches[0], &c2.branches[0], order)?;
        let fixed = ProBranch {
            denom: pairf.e2.ram_index,
            terms: pairf.e2.terms.clone(),
            trunc: pairf.e2.trunc,
        };
        let ms = contact_multiset_of_expansion(session, &pairf.e1, &fixed)?;
        let strs: Vec<String> = ms.iter().map(report::ratio_text).collect();
        report.results["contact_multiset"] = report::json!(strs);
        report.push_text(format!("contact multiset: {{{}}}", strs.join(", ")));
    }
    report.note_frames(&c1.branches);
    report.note_frames(&c2.branches);
    Ok(())
}

fn cmd_equisingular(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let (i1, i2) = pair(inputs, "equisingular")?;
    let c1 = curve_from_input(session, i1, order, opts)?;
    let c2 = curve_from_input(session, i2, order, opts)?;
    match equisingular(session, &c1, &c2, order)? {
        Equisingularity::Yes { witness } => {
            report.results = report::json!({
                "equisingular": true,
                "witness": witness.iter().map(|j| j + 1).collect::<Vec<_>>(),
            });
            report.push_text("equisingular: yes".to_string());
            report.push_text(format!(
                "witness: branch i of the first curve matches branch sigma(i) of the second, sigma = ({})",
                witness.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
        Equisingularity::No { reason } => {
            report.results = report::json!({
                "equisingular": false,
                "reason": reason,
            });
            report.push_text("equisingular: no".to_string());
            report.push_text(format!("distinguished by: {reason}"));
        }
    }
    report.note_frames(&c1.branches);
    report.note_frames(&c2.branches);
    Ok(())
}

fn cmd_cabling(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "cabling")?;
    let curve = curve_from_input(session, input, order, opts)?;
    let mut entries = Vec::new();
    for b in &curve.branches {
        let ch = characteristic(b)?;
        let seq = cabling_invariants(&ch);
        entries.push(report::json!({
            "characteristic": contact::format_char(&ch),
            "pairs": seq.pairs,
        }));
        let pairs_text = if seq.pairs.is_empty() {
            "none (unknot)".to_string()
        } else {
            seq.pairs
                .iter()
                .map(|(p, q)| format!("({p}, {q})"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        report.push_text(format!(
            "characteristic {}: cabling invariants {}",
            contact::format_char(&ch),
            pairs_text
        ));
    }
    report.results = report::json!({ "cabling": entries });
    report.note_frames(&curve.branches);
    Ok(())
}

fn cmd_alexander(
    inputs: &[InputSpec],
    session: &mut Session,
    order: u32,
    opts: &Options,
    report: &mut Report,
) -> Result<(), Error> {
    let input = single(inputs, "alexander")?;
    let curve = curve_from_input(session, input, order, opts)?;
    let mut entries = Vec::new();
    for b in &curve.branches {
        let ch = characteristic(b)?;
        let s = alexander_symbol(&ch);
        let form = cyclotomic_form(&s)?;
        let polynomial = expand_symbol(&s)?;
        entries.push(report::json!({
            "characteristic": contact::format_char(&ch),
            "symbol": s.to_string(),
            "cyclotomic_form": form,
            "polynomial": polynomial.to_string(),
            "degree": if polynomial.is_one() { 0 } else { polynomial.degree() },
        }));
        report.push_text(format!("characteristic {}", contact::format_char(&ch)));
        report.push_text(format!("symbol: {s}"));
        let form_text = if form.is_empty() {
            "1 (unknot)".to_string()
        } else {
            form.iter()
                .map(|&(d, m)| {
                    if m == 1 {
                        format!("Phi_{d}")
                    } else {
                        format!("Phi_{d}^{m}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" * ")
        };
        report.push_text(format!("cyclotomic form: {form_text}"));
        report.push_text(format!("polynomial: {polynomial}"));
    }
    report.results = report::json!({ "alexander": entries });
    if curve.branches.len() > 1 {
        let matrix = linking_matrix(session, &curve, order)?;
        report.results["linking_matrix"] = report::matrix_json(&matrix);
        report.push_text("linking matrix (diagonal entries are the branch itself):".to_string());
        report.push_text(report::matrix_text(&matrix));
    }
    report.note_frames(&curve.branches);
    Ok(())
}

fn cmd_recover_text(text: &str, report: &mut Report) -> Result<(), Error> {
    let symbol = if text.contains('S') {
        parse_symbol(text)?
    } else {
        let poly = parse_int_poly(text)?;
        symbol_from_polynomial(&poly)?
    };
    let ch = char_from_alexander(&symbol)?;
    report.results = report::json!({
        "characteristic": contact::format_char(&ch),
        "symbol": symbol.to_string(),
        "beta_bars": ch.beta_bars,
    });
    report.push_text(format!("symbol: {symbol}"));
    report.push_text(format!("characteristic: {}", contact::format_char(&ch)));
    Ok(())
}

/// Parse a symbol expression like `S(26)+S(12)+S(1)-S(13)-S(6)-S(4)`,
/// with optional integer multipliers `2*S(6)`.
pub fn parse_symbol(text: &str) -> Result<Symbol, Error> {
    let mut s = Symbol::empty();
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut sign = 1i64;
    let mut any = false;
    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        match bytes[pos] {
            b'+' => {
                sign = 1;
                pos += 1;
                continue;
            }
            b'-' => {
                sign = -1;
                pos += 1;
                continue;
            }
            _ => {}
        }
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        // optional integer multiplier
        let mut mult = 1i64;
        let num_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos > num_start {
            mult = text[num_start..pos]
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput("symbol multiplier too large".into()))?;
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'*') {
                pos += 1;
            }
        }
        if pos >= bytes.len() || bytes[pos] != b'S' {
            return Err(Error::InvalidInput(format!(
                "expected 'S(n)' at byte {pos} of the symbol expression"
            )));
        }
        pos += 1;
        if pos >= bytes.len() || bytes[pos] != b'(' {
            return Err(Error::InvalidInput("expected '(' after S".into()));
        }
        pos += 1;
        let n_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let n: u64 = text[n_start..pos]
            .parse()
            .map_err(|_| Error::InvalidInput("bad symbol index".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("symbol indices must be positive".into()));
        }
        if pos >= bytes.len() || bytes[pos] != b')' {
            return Err(Error::InvalidInput("expected ')' in symbol".into()));
        }
        pos += 1;
        s.add_term(n, sign * mult);
        sign = 1;
        any = true;
    }
    if !any {
        return Err(Error::InvalidInput("empty symbol expression".into()));
    }
    Ok(s)
}

/// Parse an integer polynomial in t (same grammar as curves, variable t,
/// integer coefficients only).
pub fn parse_int_poly(text: &str) -> Result<IntPoly, Error> {
    let replaced = text.replace('t', "x");
    let parsed = parse_input(&replaced).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let poly = match parsed {
        InputSpec::Implicit { poly, .. } => poly,
        _ => return Err(Error::InvalidInput("expected a polynomial in t".into())),
    };
    if poly.deg_y() > 0 {
        return Err(Error::InvalidInput("the polynomial must use only t".into()));
    }
    let mut coeffs: Vec<BigInt> = vec![BigInt::from(0); poly.deg_x() as usize + 1];
    for (&(e, _), c) in poly.terms() {
        let g = c
            .as_base()
            .ok_or_else(|| Error::InvalidInput("coefficients must be integers".into()))?;
        if !g.im.is_zero() || !g.re.denom().is_one() {
            return Err(Error::InvalidInput("coefficients must be integers".into()));
        }
        coeffs[e as usize] = g.re.numer().clone();
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

/// Express a polynomial as a symbol: divide out cyclotomic factors (the
/// search range is complete because phi(d) <= deg forces d <= 2 deg^2 + 6)
/// and invert the divisor-lattice sums.
pub fn symbol_from_polynomial(p: &IntPoly) -> Result<Symbol, Error> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial is not an Alexander polynomial".into()));
    }
    let p = p.canonical();
    if p.is_one() {
        return Ok(Symbol::empty());
    }
    let deg = p.degree() as u64;
    let dmax = 2 * deg * deg + 6;
    let mut remaining = p.clone();
    let mut mults: std::collections::BTreeMap<u64, i64> = Default::default();
    let mut d = 1u64;
    while !remaining.is_one() && d <= dmax {
        if totient(d) <= remaining.degree() as u64 {
            let phi = cyclotomic(d)?;
            while let Some(q) = remaining.div_exact(&phi) {
                *mults.entry(d).or_insert(0) += 1;
                remaining = q.canonical();
                if remaining.is_one() {
                    break;
                }
            }
        }
        d += 1;
    }
    if !remaining.is_one() {
        return Err(Error::InvalidInput(
            "the polynomial is not a product of cyclotomic polynomials".into(),
        ));
    }
    // invert m_d = sum over multiples: a_n = m_n - sum_{k > n, n | k} a_k
    let indices: Vec<u64> = mults.keys().copied().collect();
    let top = *indices.last().unwrap();
    let mut a: std::collections::BTreeMap<u64, i64> = Default::default();
    for n in (1..=top).rev() {
        let m_n = mults.get(&n).copied().unwrap_or(0);
        let mut acc = m_n;
        let mut k = 2 * n;
        while k <= top {
            acc -= a.get(&k).copied().unwrap_or(0);
            k += n;
        }
        if acc != 0 {
            a.insert(n, acc);
        }
    }
    let mut s = Symbol::empty();
    for (n, v) in a {
        s.add_term(n, v);
    }
    // round trip through the expansion to certify the reconstruction
    let back = expand_symbol(&s)?;
    if back != p {
        return Err(Error::Internal("symbol reconstruction failed its round trip".into()));
    }
    Ok(s)
}

/// Evaluate multiple batch lines; inputs separated by ';' on each line
/// for two-input commands. Lines are independent pipelines evaluated
/// (possibly) in parallel, results kept in input order.
pub fn run_batch(
    command: &str,
    lines: &[String],
    opts: &Options,
) -> Vec<Result<Report, RunError>> {
    let jobs: Vec<(usize, Vec<String>)> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i, l.split(';').map(|s| s.trim().to_string()).collect()))
        .collect();
    singcurve::par::map_slice(&jobs, |(_, inputs)| run_command(command, inputs, opts))
}

impl std::fmt::Debug for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message())
    }
}
