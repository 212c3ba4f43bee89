//! A small expression language for eta quotients and bracket products.
//!
//! ```text
//! expr   := term (('*' | '/') term)*
//! term   := factor ('^' int)?
//! factor := 'E' '(' 'q' ('^' int)? ')' | 'eta' '(' int ')'
//!         | 'poch' '[' zmon ';' qstep ']' | 'bracket' '[' zmon ';' qstep ']'
//!         | '(' expr ')' | int
//! zmon   := ('z' ('^' int)?)? ('q' ('^' int)?)?
//! qstep  := 'q' ('^' int)?
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use crate::bivar::ZqSeries;
use crate::bracket::BracketSpec;
use crate::error::{Error, Result};
use crate::products::EtaQuotient;
use crate::series::QSeries;

const MAX_EXPONENT: i64 = 1 << 20;

/// `z^z q^q`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZMon {
    pub z: i64,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    /// `eta(k)`, carrying the `q^{k/24}` prefactor
    Eta(u64),
    /// `E(q^k)`
    E(u64),
    /// `(z^s q^j; q^m)_inf`
    Poch(ZMon, u64),
    /// `[z^s q^j; q^m]_inf`
    Bracket(ZMon, u64),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// A syntax error with a 1-based position and the tokens that would have
/// been accepted there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.message {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "expected one of {}, found {}", self.expected.join(", "), self.found),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().ok().filter(|n| *n <= MAX_EXPONENT).ok_or_else(|| ParseError {
                line: l0,
                column: c0,
                expected: Vec::new(),
                found: s.clone(),
                message: Some(format!("integer `{s}` overflows the exponent range")),
            })?;
            col += i - start;
            out.push(Spanned { tok: Tok::Int(n), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word.chars().all(|ch| ch == 'z' || ch == 'q') {
                for (k, ch) in word.chars().enumerate() {
                    out.push(Spanned { tok: Tok::Ident(ch.to_string()), line: l0, column: c0 + k });
                }
            } else {
                out.push(Spanned { tok: Tok::Ident(word), line: l0, column: c0 });
            }
            col += i - start;
            continue;
        }
        if "()[];*/^-".contains(c) {
            out.push(Spanned { tok: Tok::Sym(c), line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            expected: Vec::new(),
            found: format!("`{c}`"),
            message: Some(format!("unexpected character `{c}`")),
        });
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

const FACTOR_START: &[&str] = &["`E`", "`eta`", "`poch`", "`bracket`", "`(`", "integer"];

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        Err(ParseError { line: t.line, column: t.column, expected, found: t.tok.describe(), message: None })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == s)
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn expect_ident(&mut self, s: &str) -> PResult<()> {
        if self.is_ident(s) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{s}`")])
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.is_sym('-');
        if neg {
            self.bump();
        }
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn positive(&mut self, what: &str) -> PResult<u64> {
        let t = self.peek().clone();
        let n = self.int()?;
        if n < 1 {
            return Err(ParseError {
                line: t.line,
                column: t.column,
                expected: vec!["positive integer".into()],
                found: format!("`{n}`"),
                message: Some(format!("{what} must be a positive integer, got {n}")),
            });
        }
        Ok(n as u64)
    }

    fn caret_int(&mut self) -> PResult<Option<i64>> {
        if self.is_sym('^') {
            self.bump();
            Ok(Some(self.int()?))
        } else {
            Ok(None)
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym('/') {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let f = self.factor()?;
        match self.caret_int()? {
            Some(k) => Ok(Expr::Pow(Box::new(f), k)),
            None => Ok(f),
        }
    }

    fn qstep(&mut self) -> PResult<u64> {
        self.expect_ident("q")?;
        if self.is_sym('^') {
            self.bump();
            self.positive("q-step")
        } else {
            Ok(1)
        }
    }

    fn zmon(&mut self) -> PResult<ZMon> {
        let mut m = ZMon { z: 0, q: 0 };
        let mut any = false;
        if self.is_ident("z") {
            self.bump();
            m.z = self.caret_int()?.unwrap_or(1);
            any = true;
        }
        if self.is_ident("q") {
            self.bump();
            m.q = self.caret_int()?.unwrap_or(1);
            any = true;
        }
        if !any {
            return self.fail(&["`z`", "`q`"]);
        }
        Ok(m)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let t = self.peek().tok.clone();
        match t {
            Tok::Ident(w) if w == "E" => {
                self.bump();
                self.expect_sym('(')?;
                let k = self.qstep()?;
                self.expect_sym(')')?;
                Ok(Expr::E(k))
            }
            Tok::Ident(w) if w == "eta" => {
                self.bump();
                self.expect_sym('(')?;
                let k = self.positive("eta level")?;
                self.expect_sym(')')?;
                Ok(Expr::Eta(k))
            }
            Tok::Ident(w) if w == "poch" || w == "bracket" => {
                self.bump();
                self.expect_sym('[')?;
                let m = self.zmon()?;
                self.expect_sym(';')?;
                let step = self.qstep()?;
                self.expect_sym(']')?;
                Ok(if w == "poch" { Expr::Poch(m, step) } else { Expr::Bracket(m, step) })
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Int(_) | Tok::Sym('-') => Ok(Expr::Int(self.int()?)),
            _ => self.fail(FACTOR_START),
        }
    }
}

pub fn parse(text: &str) -> std::result::Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.fail(&["`*`", "`/`", "`^`", "end of input"]);
    }
    Ok(e)
}

fn write_mon(f: &mut fmt::Formatter<'_>, m: ZMon) -> fmt::Result {
    let part = |f: &mut fmt::Formatter<'_>, v: &str, e: i64| match e {
        1 => write!(f, "{v}"),
        _ => write!(f, "{v}^{e}"),
    };
    if m.z != 0 {
        part(f, "z", m.z)?;
    }
    if m.q != 0 {
        part(f, "q", m.q)?;
    }
    if m.z == 0 && m.q == 0 {
        write!(f, "z^0")?;
    }
    Ok(())
}

fn write_step(f: &mut fmt::Formatter<'_>, m: u64) -> fmt::Result {
    if m == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{m}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Eta(k) => write!(f, "eta({k})"),
            Expr::E(k) => {
                write!(f, "E(")?;
                write_step(f, *k)?;
                write!(f, ")")
            }
            Expr::Poch(m, s) | Expr::Bracket(m, s) => {
                write!(f, "{}[", if matches!(self, Expr::Poch(..)) { "poch" } else { "bracket" })?;
                write_mon(f, *m)?;
                write!(f, "; ")?;
                write_step(f, *s)?;
                write!(f, "]")
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = if matches!(self, Expr::Mul(..)) { '*' } else { '/' };
                write!(f, "{a} {op} ")?;
                if matches!(**b, Expr::Mul(..) | Expr::Div(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Pow(base, k) => {
                let wrap = match **base {
                    Expr::Mul(..) | Expr::Div(..) | Expr::Pow(..) => true,
                    Expr::Int(n) => n < 0,
                    _ => false,
                };
                if wrap {
                    write!(f, "({base})^{k}")
                } else {
                    write!(f, "{base}^{k}")
                }
            }
        }
    }
}

/// An expression reduced to `scalar * product * q^{prefactor24/24}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lowered {
    pub scalar: BigInt,
    pub spec: BracketSpec,
    pub prefactor24: i64,
}

fn overflow() -> Error {
    Error::Parse("exponent overflow".into())
}

impl Expr {
    pub fn lower(&self) -> Result<Lowered> {
        let leaf = |spec: BracketSpec, pre: i64| Lowered { scalar: BigInt::one(), spec, prefactor24: pre };
        Ok(match self {
            Expr::Int(n) => Lowered { scalar: BigInt::from(*n), spec: BracketSpec::one(), prefactor24: 0 },
            Expr::Eta(k) => leaf(BracketSpec::euler(*k), *k as i64),
            Expr::E(k) => leaf(BracketSpec::euler(*k), 0),
            Expr::Poch(m, s) | Expr::Bracket(m, s) => {
                if m.z == 0 && m.q.rem_euclid(*s as i64) == 0 {
                    return Err(Error::DivisionByZero(format!("{self} has a vanishing factor")));
                }
                let spec = if matches!(self, Expr::Poch(..)) {
                    BracketSpec::poch(1, m.z, m.q, *s)
                } else {
                    BracketSpec::bracket(1, m.z, m.q, *s)
                };
                leaf(spec, 0)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.lower()?, b.lower()?);
                Lowered {
                    scalar: a.scalar * b.scalar,
                    spec: a.spec.mul(&b.spec),
                    prefactor24: a.prefactor24.checked_add(b.prefactor24).ok_or_else(overflow)?,
                }
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.lower()?, b.lower()?);
                if b.scalar.abs() != BigInt::one() {
                    return Err(Error::InvalidParameter(format!("cannot divide by the integer {}", b.scalar)));
                }
                Lowered {
                    scalar: a.scalar * b.scalar,
                    spec: a.spec.div(&b.spec),
                    prefactor24: a.prefactor24.checked_sub(b.prefactor24).ok_or_else(overflow)?,
                }
            }
            Expr::Pow(base, k) => {
                if k.abs() > MAX_EXPONENT {
                    return Err(overflow());
                }
                let b = base.lower()?;
                let scalar = if *k >= 0 {
                    num_traits::pow(b.scalar, *k as usize)
                } else if b.scalar.abs() == BigInt::one() {
                    num_traits::pow(b.scalar, k.unsigned_abs() as usize)
                } else {
                    return Err(Error::InvalidParameter(format!("cannot invert the integer {}", b.scalar)));
                };
                Lowered {
                    scalar,
                    spec: b.spec.pow(*k),
                    prefactor24: b.prefactor24.checked_mul(*k).ok_or_else(overflow)?,
                }
            }
        })
    }

    /// The eta quotient when the expression uses only `eta`, `E` and `±1`.
    pub fn eta_quotient(&self) -> Option<EtaQuotient> {
        match self {
            Expr::Eta(k) | Expr::E(k) => Some(EtaQuotient::e(*k, 1)),
            Expr::Int(1) => Some(EtaQuotient::one()),
            Expr::Mul(a, b) => Some(a.eta_quotient()?.mul(&b.eta_quotient()?)),
            Expr::Div(a, b) => Some(a.eta_quotient()?.div(&b.eta_quotient()?)),
            Expr::Pow(a, k) => Some(a.eta_quotient()?.pow(*k)),
            _ => None,
        }
    }

    fn has_z(&self) -> bool {
        match self {
            Expr::Poch(m, _) | Expr::Bracket(m, _) => m.z != 0,
            Expr::Mul(a, b) | Expr::Div(a, b) => a.has_z() || b.has_z(),
            Expr::Pow(a, _) => a.has_z(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Expansion {
    Q(QSeries),
    Zq(ZqSeries),
}

#[derive(Clone, Debug)]
pub struct Expanded {
    pub expr: Expr,
    pub order: usize,
    pub window: Option<i64>,
    pub prefactor24: i64,
    pub series: Expansion,
}

/// Parse and expand to `order` q-coefficients. Bivariate products whose
/// z-support is unbounded need `window`.
pub fn expand(text: &str, order: usize, window: Option<i64>) -> Result<Expanded> {
    let expr = parse(text)?;
    let low = expr.lower()?;
    let series = if expr.has_z() {
        let s = low.spec.expand(order, window)?;
        Expansion::Zq(s.scale(&low.scalar))
    } else {
        Expansion::Q(low.spec.expand_q(order)?.scale(&low.scalar))
    };
    let window = match &series {
        Expansion::Zq(s) => s.window(),
        Expansion::Q(_) => None,
    };
    Ok(Expanded { expr, order, window, prefactor24: low.prefactor24, series })
}

impl Expanded {
    /// Keys sorted; coefficients as decimal strings, ordered by `(qexp, zexp)`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = match &self.series {
            Expansion::Q(s) => s.coeffs().iter().enumerate().map(|(e, c)| json!([e, c.to_string()])).collect(),
            Expansion::Zq(s) => s.terms().map(|(d, e, c)| json!([e, d, c.to_string()])).collect(),
        };
        let mut m = Map::new();
        m.insert("coeffs".into(), Value::Array(coeffs));
        m.insert("expr".into(), Value::String(self.expr.to_string()));
        m.insert("order".into(), json!(self.order));
        m.insert("prefactor24".into(), json!(self.prefactor24));
        m.insert("window".into(), json!(self.window));
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json value serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let e = parse("E(q^5)^5 / E(q)").unwrap();
        assert_eq!(
            e,
            Expr::Div(Box::new(Expr::Pow(Box::new(Expr::E(5)), 5)), Box::new(Expr::E(1)))
        );
        let eta = parse("eta(2)^3").unwrap();
        assert_eq!(eta.lower().unwrap().prefactor24, 6);
        assert_eq!(eta.eta_quotient().unwrap().prefactor24(), 6);
        let b = parse("bracket[z; q] * E(q)").unwrap();
        assert!(b.has_z());
        assert_eq!(parse("poch[z^-2q^3; q^4]").unwrap(), Expr::Poch(ZMon { z: -2, q: 3 }, 4));
    }

    #[test]
    fn diagnostics_point_at_the_problem() {
        let err = parse("E(q) * ").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(err.expected.contains(&"`eta`".to_string()));
        let err = parse("E(q)\n  ^ x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert_eq!(err.expected, vec!["integer".to_string()]);
        let err = parse("eta(99999999999999999999)").unwrap_err();
        assert!(err.to_string().contains("overflows"));
        assert!(parse("poch[; q]").is_err());
        assert!(parse("E(q) E(q)").is_err());
    }

    #[test]
    fn pretty_print_round_trips() {
        for s in [
            "E(q^5)^5 / E(q)",
            "eta(2)^3 * (E(q) / E(q^2))",
            "(E(q)^2)^3",
            "bracket[z^2q; q^3] / poch[q^2; q^5]^-1",
            "-2 * (-3)^2",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }

    #[test]
    fn euler_json() {
        let x = expand("E(q)", 8, None).unwrap();
        let v = x.to_json();
        let c: Vec<String> = v["coeffs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p[1].as_str().unwrap().to_string())
            .collect();
        assert_eq!(c, ["1", "-1", "-1", "0", "0", "1", "0", "1"]);
        assert_eq!(v["window"], Value::Null);
    }

    #[test]
    fn scalars_and_windows() {
        let x = expand("3 * E(q)^0", 3, None).unwrap();
        match x.series {
            Expansion::Q(s) => assert_eq!(s, QSeries::from_i64s(&[3, 0, 0])),
            _ => panic!(),
        }
        assert!(expand("E(q) / bracket[z; q]", 5, None).is_err());
        let w = expand("E(q) / bracket[z; q]", 5, Some(3)).unwrap();
        assert_eq!(w.window, Some(3));
        assert!(expand("E(q) / 2", 5, None).is_err());
    }
}
