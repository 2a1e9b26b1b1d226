//! Deterministic report assembly: a structured JSON tree (keys sorted by
//! serde_json's BTreeMap backing) plus a plain-text rendering. Fractions
//! are printed exactly; infinite values appear as "inf" in JSON and the
//! infinity glyph in text.

pub use serde_json::json;
use serde_json::Value;
use singcurve::branch::{expansion_to_string, Branch, PuiseuxChar, TangentLine};
use singcurve::contact::{ContactValue, IntersectionValue};
use singcurve::series::{PuiseuxExpansion, Trunc};
use singcurve::tower::Tower;

pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub results: Value,
    pub frame_notes: Vec<String>,
    pub erratum_notes: Vec<String>,
    pub order_used: u32,
    text_lines: Vec<String>,
    generators: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<String>) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            results: json!({}),
            frame_notes: Vec::new(),
            erratum_notes: Vec::new(),
            order_used: 0,
            text_lines: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn push_text(&mut self, line: String) {
        self.text_lines.push(line);
    }

    /// Record the swapped-frame annotation for any branch stored in the
    /// (y, x) frame.
    pub fn note_frames(&mut self, branches: &[Branch]) {
        for (i, b) in branches.iter().enumerate() {
            if b.swapped {
                let what = if b.is_vertical_line() {
                    "the line x = 0".to_string()
                } else {
                    format!("branch {}", i + 1)
                };
                let note = format!("{what}: frame (x,y) swapped");
                if !self.frame_notes.contains(&note) {
                    self.frame_notes.push(note);
                }
            }
        }
    }

    /// The fixed annotation attached whenever a contact value is shown.
    pub fn note_erratum(&mut self) {
        let note = "exponents of contact are the maximum over pro-branch pairs with one \
                    side fixed; this is the convention under which the contact formula \
                    reproduces intersection numbers. The minimum reading of the same \
                    multiset is available in verbose output."
            .to_string();
        if !self.erratum_notes.contains(&note) {
            self.erratum_notes.push(note);
        }
    }

    pub fn note_generators(&mut self, tower: &Tower) {
        self.generators = tower.describe_generators();
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "frame_notes": self.frame_notes,
            "erratum_notes": self.erratum_notes,
            "order_used": self.order_used,
        });
        if !self.generators.is_empty() {
            v["results"]["generators"] = json!(self
                .generators
                .iter()
                .map(|(name, poly)| json!({ "name": name, "defined_by": format!("{poly} = 0") }))
                .collect::<Vec<_>>());
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (i, input) in self.inputs.iter().enumerate() {
            out.push_str(&format!("input {}: {}\n", i + 1, input));
        }
        for line in &self.text_lines {
            out.push_str(line);
            out.push('\n');
        }
        if !self.generators.is_empty() {
            for (name, poly) in &self.generators {
                out.push_str(&format!("where {name} satisfies {poly} = 0\n"));
            }
        }
        for n in &self.frame_notes {
            out.push_str(&format!("frame note: {n}\n"));
        }
        for n in &self.erratum_notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("order used: {}\n", self.order_used));
        out
    }
}

pub fn ratio_text(q: &num_rational::Ratio<i64>) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ival_text(v: &IntersectionValue) -> String {
    match v {
        IntersectionValue::Finite(k) => k.to_string(),
        IntersectionValue::Infinite => "\u{221e}".to_string(),
    }
}

pub fn ival_json(v: &IntersectionValue) -> Value {
    match v {
        IntersectionValue::Finite(k) => json!(k),
        IntersectionValue::Infinite => json!("inf"),
    }
}

pub fn cval_text(v: &ContactValue) -> String {
    match v {
        ContactValue::Finite(q) => ratio_text(q),
        ContactValue::Infinite => "\u{221e}".to_string(),
    }
}

pub fn cval_json(v: &ContactValue) -> Value {
    match v {
        ContactValue::Finite(q) => json!(ratio_text(q)),
        ContactValue::Infinite => json!("inf"),
    }
}

pub fn char_json(c: &PuiseuxChar) -> Value {
    json!({
        "m": c.m,
        "betas": c.betas,
        "es": c.es,
        "beta_bars": c.beta_bars,
        "display": singcurve::contact::format_char(c),
    })
}

pub fn tangent_string(t: &Tower, line: &TangentLine) -> String {
    match line {
        TangentLine::Vertical => "x = 0".to_string(),
        TangentLine::Slope(a) => {
            if a.is_zero() {
                "y = 0".to_string()
            } else {
                let s = t.display_elem(a);
                if s.contains('+') || s[1..].contains('-') {
                    format!("y = ({s})*x")
                } else {
                    format!("y = {s}*x")
                }
            }
        }
    }
}

pub fn expansion_line(t: &Tower, e: &PuiseuxExpansion) -> String {
    let mut s = expansion_to_string(t, e);
    match e.trunc {
        Trunc::Exact => s.push_str("  (exact)"),
        Trunc::Order(v) => s.push_str(&format!("  (terms complete through t^{v})")),
    }
    if e.multiplicity > 1 {
        s.push_str(&format!("  (multiplicity {})", e.multiplicity));
    }
    s
}

pub fn expansion_entry(t: &Tower, e: &PuiseuxExpansion) -> Value {
    json!({
        "ram_index": e.ram_index,
        "parametrization": expansion_to_string(t, e),
        "exact": e.is_exact(),
        "valid_to": match e.trunc { Trunc::Exact => json!("exact"), Trunc::Order(v) => json!(v) },
        "multiplicity": e.multiplicity,
    })
}

pub fn branch_entry(t: &Tower, b: &Branch) -> Value {
    let mut v = expansion_entry(t, &b.expansion);
    v["frame"] = json!(if b.swapped { "(x,y) swapped" } else { "(x,y)" });
    if b.is_vertical_line() {
        v["parametrization"] = json!("x = 0, y = t");
    }
    v
}

pub fn branch_line(t: &Tower, b: &Branch) -> String {
    if b.is_vertical_line() {
        return "x = 0, y = t".to_string();
    }
    let mut s = expansion_line(t, &b.expansion);
    if b.swapped {
        s.push_str("  [frame (x,y) swapped]");
    }
    s
}

pub fn matrix_json(m: &[Vec<IntersectionValue>]) -> Value {
    json!(m
        .iter()
        .map(|row| row.iter().map(ival_json).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn matrix_text(m: &[Vec<IntersectionValue>]) -> String {
    let mut out = String::new();
    for (i, row) in m.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, v)| if i == j { "\u{2014}".to_string() } else { ival_text(v) })
            .collect();
        out.push_str(&format!("  [{}]", cells.join("  ")));
        if i + 1 < m.len() {
            out.push('\n');
        }
    }
    out
}
