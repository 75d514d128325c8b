//! The `.vsys` text format and its JSON mirror.
//!
//! ```text
//! # comments run to end of line
//! field 7                      # or: field 3^2 mod x^2 + 1
//! x1*x2^2*x3^2 + 2*x1^2*x2*x3^5*x4^3*x5 = 1
//! ...
//! ```
//!
//! One equation per line. A term is an optional coefficient followed by `*`
//! and a monomial `x1^e1*x2^e2*...*xw^ew`, which must list the variables
//! `x1..xw` in ascending order with no gaps. Coefficients and constants are
//! integers, reduced into the prime field, or `[c0,c1,...]` coordinate tuples
//! for extension fields. The block structure is inferred from the monomial
//! widths: every strict increase of `w` along an equation opens a new block.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldOptions, FieldSpec};
use crate::variety::{RawVarietySpec, VarietyError, VarietySpec};

/// Where an error was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column of the text format.
    Text { line: usize, col: usize },
    /// 0-based equation (and term) of the JSON mirror.
    Json {
        equation: usize,
        term: Option<usize>,
    },
    /// Position inside the JSON document itself.
    Document { line: usize, col: usize },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, col } => write!(f, "{line}:{col}"),
            Location::Json {
                equation,
                term: Some(t),
            } => write!(f, "equations[{equation}].terms[{t}]"),
            Location::Json {
                equation,
                term: None,
            } => write!(f, "equations[{equation}]"),
            Location::Document { line, col } => write!(f, "json {line}:{col}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{at}: syntax error: {msg}")]
    Syntax { at: Location, msg: String },
    #[error("{at}: equations disagree on block structure: {msg}")]
    InconsistentStructure { at: Location, msg: String },
    #[error("{at}: block shape violation: {msg}")]
    BlockShapeViolation { at: Location, msg: String },
    #[error("{at}: unknown variable {name:?}")]
    UnknownVariable { at: Location, name: String },
    #[error("{at}: constant out of field: {msg}")]
    ConstantOutOfField { at: Location, msg: String },
    #[error("{at}: {source}")]
    Field { at: Location, source: FieldError },
    #[error("invalid system: {0}")]
    Invalid(#[from] VarietyError),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept characteristic 2.
    pub allow_even: bool,
}

impl ParseOptions {
    fn field_options(self) -> FieldOptions {
        FieldOptions {
            allow_even: self.allow_even,
            ..FieldOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        at: Location::Text { line, col },
        msg: msg.into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let v = lit
                .parse::<i64>()
                .map_err(|_| syntax(line, col, format!("integer literal {lit} out of range")))?;
            out.push(Token {
                tok: Tok::Int(v),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "^*+=[],".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, text_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col: text_len + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn at(&self) -> Location {
        Location::Text {
            line: self.line,
            col: self.col(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, self.col(), msg)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(&Tok::Int(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{kw}'"))),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Strip a `#` comment.
fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_header(text: &str, line: usize, opts: ParseOptions) -> Result<FieldSpec, ParseError> {
    let toks = tokenize(text, line)?;
    let mut cur = Cursor::new(&toks, line, text.chars().count());
    cur.keyword("field")?;
    let at = cur.at();
    let p = cur.int()?;
    let (n, modulus) = if cur.eat_sym('^') {
        let n = cur.int()?;
        cur.keyword("mod")?;
        (n, Some(parse_modulus(&mut cur)?))
    } else {
        (1, None)
    };
    if !cur.done() {
        return Err(cur.err("unexpected input after field header"));
    }
    if p < 0 || !(1..=64).contains(&n) {
        return Err(syntax(line, 7, "field size out of range"));
    }
    FieldSpec::with_options(p as u64, n as u32, modulus.as_deref(), opts.field_options())
        .map_err(|source| ParseError::Field { at, source })
}

/// `c*x^k + ... + c`, a polynomial in `x` with integer coefficients.
fn parse_modulus(cur: &mut Cursor) -> Result<Vec<i64>, ParseError> {
    let mut coeffs: Vec<i64> = Vec::new();
    loop {
        let (c, deg) = match cur.peek() {
            Some(&Tok::Int(c)) => {
                cur.pos += 1;
                if cur.eat_sym('*') {
                    (c, modulus_power(cur)?)
                } else {
                    (c, 0)
                }
            }
            _ => (1, modulus_power(cur)?),
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] = coeffs[deg].saturating_add(c);
        if !cur.eat_sym('+') {
            break;
        }
    }
    Ok(coeffs)
}

fn modulus_power(cur: &mut Cursor) -> Result<usize, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if s == "x" => cur.pos += 1,
        _ => return Err(cur.err("expected 'x' in modulus")),
    }
    if cur.eat_sym('^') {
        let d = cur.int()?;
        if !(0..=64).contains(&d) {
            return Err(cur.err("modulus degree out of range"));
        }
        Ok(d as usize)
    } else {
        Ok(1)
    }
}

/// A field literal: integer or coordinate tuple.
fn parse_literal(cur: &mut Cursor, field: &FieldSpec) -> Result<FieldElement, ParseError> {
    let at = cur.at();
    if cur.eat_sym('[') {
        let mut coords = vec![cur.int()?];
        while cur.eat_sym(',') {
            coords.push(cur.int()?);
        }
        cur.expect_sym(']')?;
        field
            .from_coeffs(&coords)
            .map_err(|e| ParseError::ConstantOutOfField {
                at,
                msg: e.to_string(),
            })
    } else {
        Ok(field.from_int(cur.int()?))
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

struct ParsedTerm {
    coeff: FieldElement,
    exponents: Vec<i64>,
    at: Location,
}

fn parse_term(cur: &mut Cursor, field: &FieldSpec) -> Result<ParsedTerm, ParseError> {
    let at = cur.at();
    let coeff = match cur.peek() {
        Some(Tok::Int(_)) | Some(Tok::Sym('[')) => {
            let c = parse_literal(cur, field)?;
            cur.expect_sym('*')?;
            c
        }
        _ => FieldElement::ONE,
    };
    let mut vars: Vec<(usize, i64, Location)> = Vec::new();
    loop {
        let var_at = cur.at();
        let name = match cur.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(cur.err("expected a variable")),
        };
        let Some(idx) = variable_index(&name) else {
            return Err(ParseError::UnknownVariable { at: var_at, name });
        };
        cur.pos += 1;
        let exp = if cur.eat_sym('^') { cur.int()? } else { 1 };
        if let Some(&(prev, _, _)) = vars.last() {
            if idx == prev || vars.iter().any(|v| v.0 == idx) {
                return Err(ParseError::Syntax {
                    at: var_at,
                    msg: format!("variable x{idx} repeated in one monomial"),
                });
            }
            if idx < prev {
                return Err(ParseError::Syntax {
                    at: var_at,
                    msg: format!("variables must be in ascending order (x{idx} after x{prev})"),
                });
            }
        }
        vars.push((idx, exp, var_at));
        if !(cur.peek() == Some(&Tok::Sym('*'))
            && matches!(
                cur.toks.get(cur.pos + 1).map(|t| &t.tok),
                Some(Tok::Ident(_))
            ))
        {
            break;
        }
        cur.pos += 1;
    }
    for (expected, &(idx, _, var_at)) in (1..).zip(&vars) {
        if idx != expected {
            return Err(ParseError::BlockShapeViolation {
                at: var_at,
                msg: format!("monomial skips x{expected}"),
            });
        }
    }
    Ok(ParsedTerm {
        coeff,
        exponents: vars.into_iter().map(|v| v.1).collect(),
        at,
    })
}

struct ParsedEquation {
    terms: Vec<ParsedTerm>,
    constant: FieldElement,
    at: Location,
}

fn parse_equation(
    text: &str,
    line: usize,
    field: &FieldSpec,
) -> Result<ParsedEquation, ParseError> {
    let toks = tokenize(text, line)?;
    let mut cur = Cursor::new(&toks, line, text.chars().count());
    let at = cur.at();
    let mut terms = vec![parse_term(&mut cur, field)?];
    while cur.eat_sym('+') {
        terms.push(parse_term(&mut cur, field)?);
    }
    cur.expect_sym('=')?;
    let constant = parse_literal(&mut cur, field)?;
    if !cur.done() {
        return Err(cur.err("unexpected input after constant"));
    }
    Ok(ParsedEquation {
        terms,
        constant,
        at,
    })
}

/// Block boundaries `(r, n)` implied by the monomial widths of one equation.
fn infer_blocks(eq: &ParsedEquation) -> Result<(Vec<usize>, Vec<usize>), ParseError> {
    let mut r = Vec::new();
    let mut n: Vec<usize> = Vec::new();
    for (i, term) in eq.terms.iter().enumerate() {
        let w = term.exponents.len();
        match n.last() {
            Some(&last) if w < last => {
                return Err(ParseError::BlockShapeViolation {
                    at: term.at,
                    msg: format!("monomial uses x1..x{w} after a monomial using x1..x{last}"),
                })
            }
            Some(&last) if w == last => *r.last_mut().unwrap() = i + 1,
            _ => {
                r.push(i + 1);
                n.push(w);
            }
        }
    }
    Ok((r, n))
}

fn assemble(
    field: FieldSpec,
    equations: Vec<ParsedEquation>,
) -> Result<RawVarietySpec, ParseError> {
    let Some(first) = equations.first() else {
        return Err(syntax(1, 1, "no equations"));
    };
    let (r, n) = infer_blocks(first)?;
    for eq in &equations[1..] {
        let (r2, n2) = infer_blocks(eq)?;
        if (&r2, &n2) != (&r, &n) {
            return Err(ParseError::InconsistentStructure {
                at: eq.at,
                msg: format!(
                    "r = {r2:?}, n = {n2:?} but the first equation has r = {r:?}, n = {n:?}"
                ),
            });
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut e = Vec::new();
    for eq in equations {
        b.push(eq.constant);
        a.push(eq.terms.iter().map(|t| t.coeff).collect());
        e.push(eq.terms.into_iter().map(|t| t.exponents).collect());
    }
    Ok(RawVarietySpec {
        field,
        r,
        n,
        a,
        b,
        e,
    })
}

/// Parse the text format into an unvalidated system.
pub fn parse_with(source: &str, opts: ParseOptions) -> Result<RawVarietySpec, ParseError> {
    let mut lines = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, content(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((hline, header)) = lines.next() else {
        return Err(syntax(1, 1, "empty input: expected a 'field' header"));
    };
    let field = parse_header(header, hline, opts)?;
    let equations = lines
        .map(|(line, text)| parse_equation(text, line, &field))
        .collect::<Result<Vec<_>, _>>()?;
    if equations.is_empty() {
        return Err(syntax(hline + 1, 1, "expected at least one equation"));
    }
    assemble(field, equations)
}

pub fn parse(source: &str) -> Result<RawVarietySpec, ParseError> {
    parse_with(source, ParseOptions::default())
}

/// Parse either format (JSON when the first non-blank character is `{`)
/// and validate.
pub fn parse_system(source: &str, opts: ParseOptions) -> Result<VarietySpec, ParseError> {
    let raw = if source.trim_start().starts_with('{') {
        parse_json_with(source, opts)?
    } else {
        parse_with(source, opts)?
    };
    Ok(raw.validate()?)
}

fn format_term(spec: &VarietySpec, k: usize, i: usize) -> String {
    let field = spec.field();
    let mono: Vec<String> = spec
        .exponents(k, i)
        .iter()
        .enumerate()
        .map(|(j, &e)| match e {
            1 => format!("x{}", j + 1),
            _ => format!("x{}^{e}", j + 1),
        })
        .collect();
    let mono = mono.join("*");
    let c = spec.coefficient(k, i);
    if c == FieldElement::ONE {
        mono
    } else {
        format!("{}*{mono}", field.format_element(c))
    }
}

/// Canonical text form; `parse(serialize(s))` validates back to `s`.
pub fn serialize(spec: &VarietySpec) -> String {
    let field = spec.field();
    let mut out = if field.degree() == 1 {
        format!("field {}\n", field.characteristic())
    } else {
        format!(
            "field {}^{} mod {}\n",
            field.characteristic(),
            field.degree(),
            field.format_modulus()
        )
    };
    for k in 0..spec.equations() {
        let terms: Vec<String> = (0..spec.monomials())
            .map(|i| format_term(spec, k, i))
            .collect();
        out.push_str(&terms.join(" + "));
        out.push_str(" = ");
        out.push_str(&field.format_element(spec.constant(k)));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonLiteral {
    Int(i64),
    Coords(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonField {
    pub p: u64,
    pub n: u32,
    /// Lowest coefficient first; `null` for prime fields.
    pub modulus: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: JsonLiteral,
    /// Exponents of `x1, x2, ...`.
    pub exponents: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEquation {
    pub terms: Vec<JsonTerm>,
    pub constant: JsonLiteral,
}

/// JSON mirror of the text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonSystem {
    pub field: JsonField,
    pub equations: Vec<JsonEquation>,
}

fn json_literal(field: &FieldSpec, a: FieldElement) -> JsonLiteral {
    if field.degree() == 1 {
        JsonLiteral::Int(a.code() as i64)
    } else {
        JsonLiteral::Coords(field.coeffs(a).into_iter().map(i64::from).collect())
    }
}

fn from_json_literal(
    field: &FieldSpec,
    lit: &JsonLiteral,
    at: Location,
) -> Result<FieldElement, ParseError> {
    match lit {
        JsonLiteral::Int(v) => Ok(field.from_int(*v)),
        JsonLiteral::Coords(c) => {
            field
                .from_coeffs(c)
                .map_err(|e| ParseError::ConstantOutOfField {
                    at,
                    msg: e.to_string(),
                })
        }
    }
}

pub fn to_json_system(spec: &VarietySpec) -> JsonSystem {
    let field = spec.field();
    JsonSystem {
        field: JsonField {
            p: field.characteristic() as u64,
            n: field.degree(),
            modulus: (field.degree() > 1)
                .then(|| field.modulus().iter().map(|&c| c as i64).collect()),
        },
        equations: (0..spec.equations())
            .map(|k| JsonEquation {
                terms: (0..spec.monomials())
                    .map(|i| JsonTerm {
                        coeff: json_literal(field, spec.coefficient(k, i)),
                        exponents: spec.exponents(k, i).iter().map(|&e| e as i64).collect(),
                    })
                    .collect(),
                constant: json_literal(field, spec.constant(k)),
            })
            .collect(),
    }
}

/// Pretty-printed JSON mirror.
pub fn serialize_json(spec: &VarietySpec) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_system(spec)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json_with(source: &str, opts: ParseOptions) -> Result<RawVarietySpec, ParseError> {
    let sys: JsonSystem = serde_json::from_str(source).map_err(|e| ParseError::Syntax {
        at: Location::Document {
            line: e.line(),
            col: e.column(),
        },
        msg: e.to_string(),
    })?;
    from_json_system(&sys, opts)
}

pub fn parse_json(source: &str) -> Result<RawVarietySpec, ParseError> {
    parse_json_with(source, ParseOptions::default())
}

pub fn from_json_system(
    sys: &JsonSystem,
    opts: ParseOptions,
) -> Result<RawVarietySpec, ParseError> {
    let field_at = Location::Document { line: 1, col: 1 };
    let field = FieldSpec::with_options(
        sys.field.p,
        sys.field.n,
        sys.field.modulus.as_deref(),
        opts.field_options(),
    )
    .map_err(|source| ParseError::Field {
        at: field_at,
        source,
    })?;
    let mut equations = Vec::with_capacity(sys.equations.len());
    for (k, eq) in sys.equations.iter().enumerate() {
        let eq_at = Location::Json {
            equation: k,
            term: None,
        };
        if eq.terms.is_empty() {
            return Err(ParseError::Syntax {
                at: eq_at,
                msg: "equation without terms".into(),
            });
        }
        let mut terms = Vec::with_capacity(eq.terms.len());
        for (i, t) in eq.terms.iter().enumerate() {
            let at = Location::Json {
                equation: k,
                term: Some(i),
            };
            if t.exponents.is_empty() {
                return Err(ParseError::Syntax {
                    at,
                    msg: "term without variables".into(),
                });
            }
            terms.push(ParsedTerm {
                coeff: from_json_literal(&field, &t.coeff, at)?,
                exponents: t.exponents.clone(),
                at,
            });
        }
        equations.push(ParsedEquation {
            terms,
            constant: from_json_literal(&field, &eq.constant, eq_at)?,
            at: eq_at,
        });
    }
    if equations.is_empty() {
        return Err(ParseError::Syntax {
            at: field_at,
            msg: "no equations".into(),
        });
    }
    assemble(field, equations)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYS11: &str = "field 11
x1*x2^3*x3^2 + x1^5*x2^7*x3^5*x4^5*x5*x6^2 + x1^5*x2^4*x3^3*x4^2*x5^6*x6^3 = 4
x1*x2^5*x3^3 + x1^3*x2^5*x3^6*x4^5*x5^4*x6^7 + x1^3*x2*x3^5*x4^7*x5^3*x6^7 = 0
";

    #[test]
    fn infers_structure() {
        let raw = parse(SYS11).unwrap();
        assert_eq!(raw.r, vec![1, 3]);
        assert_eq!(raw.n, vec![3, 6]);
        assert_eq!(raw.e[1][2], vec![3, 1, 5, 7, 3, 7]);

        let raw = parse("field 3\nx1 = 0\n").unwrap();
        assert_eq!((raw.r, raw.n, raw.b.len()), (vec![1], vec![1], 1));
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            parse("field 7\nx1 + x3 = 1"),
            Err(ParseError::BlockShapeViolation { .. })
        ));
        assert!(matches!(
            parse("field 7\nx1*x2 + x1 = 1"),
            Err(ParseError::BlockShapeViolation { .. })
        ));
        assert!(matches!(
            parse("field 7\nx1 + x1*x2 = 1\nx1*x2 + x1*x2 = 1"),
            Err(ParseError::InconsistentStructure { .. })
        ));
        assert!(matches!(
            parse("field 7\nx1 + y2 = 1"),
            Err(ParseError::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse("field 7\nx0 = 1"),
            Err(ParseError::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse("field 7\nx2*x1 = 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse("field 7\nx1*x1 = 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse("field 7\nx1 = [1,2]"),
            Err(ParseError::ConstantOutOfField { .. })
        ));
        assert!(matches!(
            parse("field 9\nx1 = 1"),
            Err(ParseError::Field { .. })
        ));
        match parse("field 7\nx1 + = 1") {
            Err(ParseError::Syntax {
                at: Location::Text { line, col },
                ..
            }) => assert_eq!((line, col), (2, 6)),
            other => panic!("{other:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("field 7\n").is_err());
    }

    #[test]
    fn extension_field_literals() {
        let raw = parse("field 3^2 mod x^2 + 1\n[1,1]*x1^2 + x1*x2 = [0,2]\n").unwrap();
        let f = &raw.field;
        assert_eq!(f.order(), 9);
        assert_eq!(f.coeffs(raw.a[0][0]), vec![1, 1]);
        assert_eq!(f.coeffs(raw.b[0]), vec![0, 2]);
        let spec = raw.validate().unwrap();
        let text = serialize(&spec);
        assert_eq!(text, "field 3^2 mod x^2 + 1\n[1,1]*x1^2 + x1*x2 = [0,2]\n");
    }

    #[test]
    fn serialize_round_trip() {
        let spec = parse(SYS11).unwrap().validate().unwrap();
        assert_eq!(serialize(&spec), SYS11);
        let json = serialize_json(&spec);
        let back = parse_json(&json).unwrap().validate().unwrap();
        assert_eq!(back, spec);
        assert_eq!(parse_system(&json, ParseOptions::default()).unwrap(), spec);
    }

    #[test]
    fn comments_and_spacing() {
        let a =
            parse("# header\nfield 7 # prime\n  2 * x1 ^ 3 * x2  +  x1^2*x2^2=3 # eq\n").unwrap();
        let b = parse("field 7\n2*x1^3*x2+x1^2*x2^2=3").unwrap();
        assert_eq!(a, b);
    }
}
