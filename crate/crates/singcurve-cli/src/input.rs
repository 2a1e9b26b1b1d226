//! Input grammar: integer and `i` coefficients, variables, `+ - * ^`,
//! parentheses, explicit `*`, nonnegative integer exponents. Implicit
//! curves are polynomials in x and y; parametrizations are written
//! `param: <poly in t>, <poly in t>`.

use num_bigint::BigInt;
use num_rational::BigRational;
use singcurve::bipoly::BiPoly;
use singcurve::gauss::GaussQ;
use singcurve::series::SeriesMap;
use singcurve::tower::Elem;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed input: either an implicit curve or a parametrization.
#[derive(Debug, Clone)]
pub enum InputSpec {
    Implicit { poly: BiPoly, text: String },
    /// x = t^m (m >= 1) with y a finite series, or the vertical line
    /// x = 0, y = t encoded as m = 0.
    Param { ram_index: u32, y_terms: SeriesMap, text: String },
}

impl InputSpec {
    pub fn text(&self) -> &str {
        match self {
            InputSpec::Implicit { text, .. } | InputSpec::Param { text, .. } => text,
        }
    }
}

/// Multivariate monomial exponents for the tiny expression evaluator:
/// coefficients by (x-exp, y-exp) (t shares the x slot for params).
type PolyMap = BTreeMap<(u32, u32), GaussQ>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'static [(&'static str, (u32, u32))],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<PolyMap, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.bump();
            neg(&self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = add(&acc, &self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = add(&acc, &neg(&self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyMap, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = mul(&acc, &self.factor()?);
                }
                // implicit products are not in the grammar: "2x" is a
                // syntax error, "2*x" is required
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PolyMap, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            return Ok(pow(&base, e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<PolyMap, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some(b'-') => {
                self.bump();
                Ok(neg(&self.factor()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                Ok(constant(GaussQ::from_rational(BigRational::from_integer(n))))
            }
            Some(b'i') => {
                self.bump();
                Ok(constant(GaussQ::i()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                for &(name, exps) in self.vars {
                    if self.src[self.pos..].starts_with(name.as_bytes()) {
                        self.pos += name.len();
                        let mut m = PolyMap::new();
                        m.insert(exps, GaussQ::one());
                        return Ok(m);
                    }
                }
                self.err(format!("unknown variable '{}'", c as char))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a nonnegative integer exponent");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| ParseError { position: start, message: "exponent too large".into() })
    }

    fn bigint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }
}

fn constant(c: GaussQ) -> PolyMap {
    let mut m = PolyMap::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

fn add(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(GaussQ::zero);
        *e = &*e + v;
        if e.is_zero() {
            out.remove(k);
        }
    }
    out
}

fn neg(a: &PolyMap) -> PolyMap {
    a.iter().map(|(k, v)| (*k, -v)).collect()
}

fn mul(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = PolyMap::new();
    for ((i1, j1), c1) in a {
        for ((i2, j2), c2) in b {
            let k = (i1 + i2, j1 + j2);
            let v = c1 * c2;
            let e = out.entry(k).or_insert_with(GaussQ::zero);
            *e = &*e + &v;
            if e.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

fn pow(a: &PolyMap, e: u32) -> PolyMap {
    let mut acc = constant(GaussQ::one());
    for _ in 0..e {
        acc = mul(&acc, a);
    }
    acc
}

fn parse_poly(
    text: &str,
    vars: &'static [(&'static str, (u32, u32))],
) -> Result<PolyMap, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let m = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(m)
}

/// Parse one documented-grammar input into an implicit polynomial or a
/// parametrization.
pub fn parse_input(text: &str) -> Result<InputSpec, ParseError> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("param:") {
        let parts: Vec<&str> = rest.splitn(2, ',').collect();
        if parts.len() != 2 {
            return Err(ParseError {
                position: 0,
                message: "a parametrization needs two comma-separated components".into(),
            });
        }
        let x_map = parse_poly(parts[0], &[("t", (1, 0))])?;
        let y_map = parse_poly(parts[1], &[("t", (1, 0))])?;
        let x_series: BTreeMap<u32, GaussQ> =
            x_map.into_iter().map(|((e, _), c)| (e, c)).collect();
        let y_series: BTreeMap<u32, GaussQ> =
            y_map.into_iter().map(|((e, _), c)| (e, c)).collect();
        // x-part must be t^m or 0
        let ram_index = if x_series.is_empty() {
            // vertical line: require y = t
            let ok = y_series.len() == 1
                && y_series.get(&1).is_some_and(|c| c.is_one());
            if !ok {
                return Err(ParseError {
                    position: 0,
                    message: "the vertical line must be given as 'param: 0, t'".into(),
                });
            }
            0
        } else {
            if x_series.len() != 1 {
                return Err(ParseError {
                    position: 0,
                    message: "the x-component must be a single power t^m".into(),
                });
            }
            let (&m, c) = x_series.iter().next().unwrap();
            if !c.is_one() || m == 0 {
                return Err(ParseError {
                    position: 0,
                    message: "the x-component must be t^m with coefficient 1 and m >= 1".into(),
                });
            }
            m
        };
        if y_series.contains_key(&0) {
            return Err(ParseError {
                position: 0,
                message: "parametrizations must pass through the origin (no constant term)"
                    .into(),
            });
        }
        let y_terms: SeriesMap = y_series
            .into_iter()
            .map(|(e, c)| (e, Elem::from_gauss(c)))
            .collect();
        Ok(InputSpec::Param { ram_index, y_terms, text: trimmed.to_string() })
    } else {
        let map = parse_poly(trimmed, &[("x", (1, 0)), ("y", (0, 1))])?;
        let poly = BiPoly::from_terms(
            map.into_iter().map(|(k, c)| (k, Elem::from_gauss(c))),
        );
        Ok(InputSpec::Implicit { poly, text: trimmed.to_string() })
    }
}

/// Canonical, re-parseable rendering of a base-coefficient polynomial:
/// terms by descending total degree, then descending y-degree.
pub fn print_bipoly(t: &singcurve::tower::Tower, f: &BiPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut keys: Vec<(u32, u32)> = f.terms().map(|(&k, _)| k).collect();
    keys.sort_by_key(|k| (std::cmp::Reverse(k.0 + k.1), std::cmp::Reverse(k.1)));
    let mut out = String::new();
    for (idx, &(i, j)) in keys.iter().enumerate() {
        let c = f.coeff(i, j);
        let cs = t.display_elem(&c);
        let (neg, mag) = match cs.strip_prefix('-') {
            Some(rest) if !rest.contains('+') && !rest.contains('-') => (true, rest.to_string()),
            _ => (false, cs),
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut parts: Vec<String> = Vec::new();
        let coeff_needed = mag != "1" || (i == 0 && j == 0);
        if coeff_needed {
            if mag.contains('+') || mag[1..].contains('-') {
                parts.push(format!("({mag})"));
            } else {
                parts.push(mag);
            }
        }
        if i > 0 {
            parts.push(if i == 1 { "x".into() } else { format!("x^{i}") });
        }
        if j > 0 {
            parts.push(if j == 1 { "y".into() } else { format!("y^{j}") });
        }
        out.push_str(&parts.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_implicit() {
        let s = parse_input("x^2 - y^3").unwrap();
        match s {
            InputSpec::Implicit { poly, .. } => {
                assert_eq!(poly.num_terms(), 2);
                assert_eq!(poly.coeff(2, 0), Elem::one());
                assert_eq!(poly.coeff(0, 3), Elem::from_int(-1));
            }
            _ => panic!("expected implicit"),
        }
        assert!(parse_input("y^3 + y*x^4").is_ok());
        assert!(parse_input("2x").is_err());
        assert!(parse_input("x + ").is_err());
    }

    #[test]
    fn parse_param() {
        let s = parse_input("param: t^4, t^6 + t^7").unwrap();
        match s {
            InputSpec::Param { ram_index, y_terms, .. } => {
                assert_eq!(ram_index, 4);
                assert_eq!(y_terms.len(), 2);
            }
            _ => panic!("expected parametrization"),
        }
        // vertical line
        match parse_input("param: 0, t").unwrap() {
            InputSpec::Param { ram_index, .. } => assert_eq!(ram_index, 0),
            _ => panic!(),
        }
        assert!(parse_input("param: 2*t^3, t").is_err());
        assert!(parse_input("param: t^2, 1 + t").is_err());
    }

    #[test]
    fn parse_gaussian_coefficients() {
        use num_traits::Zero;
        let s = parse_input("y^2 + 4*x^2 - 2*i*x*y").unwrap();
        match s {
            InputSpec::Implicit { poly, .. } => {
                let c = poly.coeff(1, 1);
                let g = c.as_base().unwrap();
                assert!(g.re.is_zero());
            }
            _ => panic!(),
        }
    }

    #[test]
    fn print_roundtrip() {
        let t = singcurve::tower::Tower::base();
        for src in [
            "x^2 - y^3",
            "y^3 + y*x^4",
            "-4*x^4 - x^2*y^2 + 4*x^2*y^3 + y^5",
            "x^2 + y^2",
            "y - 2*i*x",
        ] {
            let a = match parse_input(src).unwrap() {
                InputSpec::Implicit { poly, .. } => poly,
                _ => unreachable!(),
            };
            let printed = print_bipoly(&t, &a);
            let b = match parse_input(&printed).unwrap() {
                InputSpec::Implicit { poly, .. } => poly,
                _ => unreachable!(),
            };
            assert_eq!(a, b, "round trip through '{printed}'");
        }
    }
}
