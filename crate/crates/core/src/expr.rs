//! The element expression language and its canonical rendering.
//!
//! ```text
//! element := term { "+" term } ;
//! term    := [ coeff "*" ] cfactor ;
//! cfactor := hfactor { "#" hfactor } ;      Cauchy product ⊡
//! hfactor := atom { "." atom } ;            Hadamard product ⊙, binds tighter
//! atom    := gen | unit | zero | "(" element ")" ;
//! gen     := "e[" ident "," nat "]" ;
//! unit    := "1[" [ ident { "," ident } ] "]" ;
//! zero    := "0@[" [ ident { "," ident } ] "]" ;
//! coeff   := [ "-" ] nat [ "/" nat ] ;
//! ```
//!
//! Parsing is recursive descent with one token of lookahead. Error offsets are
//! byte offsets into the source.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::configspace::{BaseSpace, Configuration, PointId};
use crate::error::Error;
use crate::fibre::FibreElement;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax {
        found: String,
        expected: Vec<&'static str>,
    },
    UnknownPoint(String),
    BasisOutOfRange {
        point: String,
        index: String,
        rank: usize,
    },
    ConfigMismatch {
        left: Configuration,
        right: Configuration,
    },
    OverlappingConfigurations {
        left: Configuration,
        right: Configuration,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { found, expected } => {
                write!(f, "syntax error: found {found}, expected {}", expected.join(" or "))
            }
            ParseErrorKind::UnknownPoint(p) => write!(f, "unknown point `{p}`"),
            ParseErrorKind::BasisOutOfRange { point, index, rank } => {
                write!(f, "basis index {index} out of range at `{point}` (rank {rank})")
            }
            ParseErrorKind::ConfigMismatch { left, right } => {
                write!(f, "operands live over different configurations {left} and {right}")
            }
            ParseErrorKind::OverlappingConfigurations { left, right } => {
                write!(f, "configurations {left} and {right} overlap")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} (at byte {offset})")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

impl ParseError {
    fn at(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { kind, offset }
    }

    /// Short class name, one of the five error classes of the language.
    pub fn class(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax { .. } => "SyntaxError",
            ParseErrorKind::UnknownPoint(_) => "UnknownPoint",
            ParseErrorKind::BasisOutOfRange { .. } => "BasisOutOfRange",
            ParseErrorKind::ConfigMismatch { .. } => "ConfigMismatch",
            ParseErrorKind::OverlappingConfigurations { .. } => "OverlappingConfigurations",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Hash,
    Dot,
    LParen,
    RParen,
    Comma,
    RBracket,
    GenOpen,
    UnitOpen,
    ZeroOpen,
    Nat(BigInt),
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::GenOpen => "`e[`".into(),
            Tok::UnitOpen => "`1[`".into(),
            Tok::ZeroOpen => "`0@[`".into(),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Range<usize>,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'#' => Tok::Hash,
            b'.' => Tok::Dot,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b']' => Tok::RBracket,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &src[start..i];
                if digits == "1" && bytes.get(i) == Some(&b'[') {
                    i += 1;
                    out.push(Token { tok: Tok::UnitOpen, span: start..i });
                    continue;
                }
                if digits == "0" && src[i..].starts_with("@[") {
                    i += 2;
                    out.push(Token { tok: Tok::ZeroOpen, span: start..i });
                    continue;
                }
                out.push(Token {
                    tok: Tok::Nat(digits.parse().expect("ascii digits")),
                    span: start..i,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let ident = &src[start..i];
                if ident == "e" && bytes.get(i) == Some(&b'[') {
                    i += 1;
                    out.push(Token { tok: Tok::GenOpen, span: start..i });
                } else {
                    out.push(Token { tok: Tok::Ident(ident.to_string()), span: start..i });
                }
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(ParseError::at(
                    start,
                    ParseErrorKind::Syntax {
                        found: format!("character `{ch}`"),
                        expected: vec!["an element expression token"],
                    },
                ));
            }
        };
        i += 1;
        out.push(Token { tok, span: start..i });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: src.len()..src.len(),
    });
    Ok(out)
}

/// A spanned identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub offset: usize,
}

/// Syntax tree of an element expression. Binary operator positions are kept
/// so elaboration errors can point at the offending operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Sum { terms: Vec<ExprAst>, ops: Vec<usize> },
    CauchyProd { factors: Vec<ExprAst>, ops: Vec<usize> },
    HadamardProd { factors: Vec<ExprAst>, ops: Vec<usize> },
    Gen { point: Ident, index: BigInt, index_offset: usize },
    Unit(Vec<Ident>),
    Zero(Vec<Ident>),
    ScalarMul(Scalar, Box<ExprAst>),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        ParseError::at(
            t.span.start,
            ParseErrorKind::Syntax {
                found: t.tok.describe(),
                expected,
            },
        )
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(vec![name]))
        }
    }

    fn element(&mut self) -> Result<ExprAst, ParseError> {
        let mut terms = vec![self.term()?];
        let mut ops = Vec::new();
        while self.peek().tok == Tok::Plus {
            ops.push(self.bump().span.start);
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            ExprAst::Sum { terms, ops }
        })
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().tok {
            Tok::Minus | Tok::Nat(_) => {
                let c = self.coeff()?;
                self.expect(Tok::Star, "`*`")?;
                let f = self.cfactor()?;
                Ok(ExprAst::ScalarMul(c, Box::new(f)))
            }
            _ => self.cfactor(),
        }
    }

    fn nat(&mut self) -> Result<(BigInt, usize), ParseError> {
        match self.peek().tok.clone() {
            Tok::Nat(n) => {
                let off = self.bump().span.start;
                Ok((n, off))
            }
            _ => Err(self.unexpected(vec!["a natural number"])),
        }
    }

    fn coeff(&mut self) -> Result<Scalar, ParseError> {
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let (num, _) = self.nat()?;
        let den = if self.peek().tok == Tok::Slash {
            self.bump();
            let (d, off) = self.nat()?;
            if d.is_zero() {
                return Err(ParseError::at(
                    off,
                    ParseErrorKind::Syntax {
                        found: "zero denominator".into(),
                        expected: vec!["a positive denominator"],
                    },
                ));
            }
            d
        } else {
            BigInt::one()
        };
        let c = Scalar::new(num, den);
        Ok(if negative { -c } else { c })
    }

    fn cfactor(&mut self) -> Result<ExprAst, ParseError> {
        let mut factors = vec![self.hfactor()?];
        let mut ops = Vec::new();
        while self.peek().tok == Tok::Hash {
            ops.push(self.bump().span.start);
            factors.push(self.hfactor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ExprAst::CauchyProd { factors, ops }
        })
    }

    fn hfactor(&mut self) -> Result<ExprAst, ParseError> {
        let mut factors = vec![self.atom()?];
        let mut ops = Vec::new();
        while self.peek().tok == Tok::Dot {
            ops.push(self.bump().span.start);
            factors.push(self.atom()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ExprAst::HadamardProd { factors, ops }
        })
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                let offset = self.bump().span.start;
                Ok(Ident { name, offset })
            }
            _ => Err(self.unexpected(vec!["a point identifier"])),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>, ParseError> {
        let mut ids = Vec::new();
        if self.peek().tok == Tok::RBracket {
            self.bump();
            return Ok(ids);
        }
        ids.push(self.ident()?);
        loop {
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                    ids.push(self.ident()?);
                }
                Tok::RBracket => {
                    self.bump();
                    return Ok(ids);
                }
                _ => return Err(self.unexpected(vec!["`,`", "`]`"])),
            }
        }
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().tok {
            Tok::GenOpen => {
                self.bump();
                let point = self.ident()?;
                self.expect(Tok::Comma, "`,`")?;
                let (index, index_offset) = self.nat()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(ExprAst::Gen { point, index, index_offset })
            }
            Tok::UnitOpen => {
                self.bump();
                Ok(ExprAst::Unit(self.ident_list()?))
            }
            Tok::ZeroOpen => {
                self.bump();
                Ok(ExprAst::Zero(self.ident_list()?))
            }
            Tok::LParen => {
                self.bump();
                let e = self.element()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected(vec!["`e[`", "`1[`", "`0@[`", "`(`"])),
        }
    }
}

/// Parses source text into a syntax tree without consulting a base space.
pub fn parse_ast(src: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser { tokens: lex(src)?, pos: 0 };
    let e = p.element()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected(vec!["`+`", "`#`", "`.`", "end of input"]));
    }
    Ok(e)
}

fn point_of(base: &BaseSpace, id: &Ident) -> Result<PointId, ParseError> {
    base.point(&id.name)
        .cloned()
        .ok_or_else(|| ParseError::at(id.offset, ParseErrorKind::UnknownPoint(id.name.clone())))
}

fn config_of(base: &BaseSpace, ids: &[Ident]) -> Result<Configuration, ParseError> {
    let mut seen: Vec<PointId> = Vec::new();
    for id in ids {
        let p = point_of(base, id)?;
        if seen.contains(&p) {
            let single = Configuration::singleton(p);
            return Err(ParseError::at(
                id.offset,
                ParseErrorKind::OverlappingConfigurations {
                    left: single.clone(),
                    right: single,
                },
            ));
        }
        seen.push(p);
    }
    Ok(Configuration::from_points(seen).expect("checked distinct"))
}

fn lift(offset: usize, err: Error) -> ParseError {
    let kind = match err {
        Error::ConfigMismatch { left, right } => ParseErrorKind::ConfigMismatch { left, right },
        Error::OverlappingConfigurations { left, right } => {
            ParseErrorKind::OverlappingConfigurations { left, right }
        }
        other => unreachable!("products only fail on configurations: {other}"),
    };
    ParseError::at(offset, kind)
}

/// Evaluates a syntax tree against a base space.
pub fn elaborate(ast: &ExprAst, base: &BaseSpace) -> Result<FibreElement, ParseError> {
    match ast {
        ExprAst::Gen { point, index, index_offset } => {
            let p = point_of(base, point)?;
            let rank = base.rank(&p).expect("known point");
            match index.to_usize() {
                Some(i) if i < rank => Ok(FibreElement::generator(base, &p, i).expect("checked")),
                _ => Err(ParseError::at(
                    *index_offset,
                    ParseErrorKind::BasisOutOfRange {
                        point: point.name.clone(),
                        index: index.to_string(),
                        rank,
                    },
                )),
            }
        }
        ExprAst::Unit(ids) => Ok(FibreElement::unit(&config_of(base, ids)?)),
        ExprAst::Zero(ids) => Ok(FibreElement::zero(config_of(base, ids)?)),
        ExprAst::ScalarMul(c, inner) => Ok(elaborate(inner, base)?.scale(c)),
        ExprAst::Sum { terms, ops } => fold(terms, ops, base, FibreElement::try_add),
        ExprAst::CauchyProd { factors, ops } => fold(factors, ops, base, FibreElement::cauchy_mul),
        ExprAst::HadamardProd { factors, ops } => fold(factors, ops, base, FibreElement::hadamard_mul),
    }
}

fn fold(
    items: &[ExprAst],
    ops: &[usize],
    base: &BaseSpace,
    op: fn(&FibreElement, &FibreElement) -> crate::error::Result<FibreElement>,
) -> Result<FibreElement, ParseError> {
    let mut acc = elaborate(&items[0], base)?;
    for (item, &off) in items[1..].iter().zip(ops) {
        let rhs = elaborate(item, base)?;
        acc = op(&acc, &rhs).map_err(|e| lift(off, e))?;
    }
    Ok(acc)
}

/// Parses and elaborates an element expression.
pub fn parse_element(src: &str, base: &BaseSpace) -> Result<FibreElement, ParseError> {
    elaborate(&parse_ast(src)?, base)
}

/// Canonical text of an element; [`parse_element`] inverts it exactly.
pub fn render(e: &FibreElement) -> String {
    if e.is_zero() {
        let ids: Vec<&str> = e.config().iter().map(PointId::as_str).collect();
        return format!("0@[{}]", ids.join(","));
    }
    let mut parts = Vec::with_capacity(e.len());
    for (m, c) in e.terms() {
        let mono = if m.factors().is_empty() {
            "1[]".to_string()
        } else {
            m.factors()
                .iter()
                .map(|(p, f)| {
                    if f.is_one() {
                        format!("1[{p}]")
                    } else {
                        f.exponents()
                            .iter()
                            .flat_map(|(i, mult)| std::iter::repeat_n(format!("e[{p},{i}]"), *mult as usize))
                            .collect::<Vec<_>>()
                            .join(" . ")
                    }
                })
                .collect::<Vec<_>>()
                .join(" # ")
        };
        if c.is_one() {
            parts.push(mono);
        } else {
            parts.push(format!("{} * {}", scalar::render(c), mono));
        }
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::PointSpec;
    use crate::fibre::{CauchyMonomial, PointFactor};
    use crate::random::{random_base, random_config, random_element};
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base() -> BaseSpace {
        BaseSpace::new([
            PointSpec::new("p", 2, int(1)),
            PointSpec::new("q", 1, int(1)),
            PointSpec::new("r", 1, int(1)),
        ])
        .unwrap()
    }

    fn pt(s: &str) -> PointId {
        PointId::new(s)
    }

    fn err(src: &str) -> ParseError {
        parse_element(src, &base()).unwrap_err()
    }

    #[test]
    fn parses_cauchy_product() {
        let m = base();
        let got = parse_element("e[p,0] # e[q,0]", &m).unwrap();
        let want = FibreElement::generator(&m, &pt("p"), 0)
            .unwrap()
            .cauchy_mul(&FibreElement::generator(&m, &pt("q"), 0).unwrap())
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn parses_scaled_mixed_product() {
        let m = base();
        let got = parse_element("2/3 * (e[p,0] . e[p,0]) # 1[q]", &m).unwrap();
        let mono = CauchyMonomial::from_factors([
            (pt("p"), PointFactor::from_exponents([(0, 2)])),
            (pt("q"), PointFactor::one()),
        ])
        .unwrap();
        assert_eq!(got, FibreElement::from_monomial(mono, ratio(2, 3)));
        // `.` binds tighter than `#`
        assert_eq!(parse_element("2/3 * e[p,0] . e[p,0] # 1[q]", &m).unwrap(), got);
    }

    #[test]
    fn overlap_is_reported_at_operator() {
        let e = err("e[p,0] # e[p,0]");
        assert_eq!(e.class(), "OverlappingConfigurations");
        assert_eq!(e.offset, 7);
    }

    #[test]
    fn error_classes_and_positions() {
        let e = err("e[p,0] + ");
        assert_eq!((e.class(), e.offset), ("SyntaxError", 9));
        let e = err("e[p 0]");
        assert_eq!((e.class(), e.offset), ("SyntaxError", 4));
        let e = err("e[p,0] $");
        assert_eq!((e.class(), e.offset), ("SyntaxError", 7));
        let e = err("e[z,0]");
        assert_eq!((e.class(), e.offset), ("UnknownPoint", 2));
        let e = err("e[q,1]");
        assert_eq!((e.class(), e.offset), ("BasisOutOfRange", 4));
        let e = err("e[p,0] . e[q,0]");
        assert_eq!((e.class(), e.offset), ("ConfigMismatch", 7));
        let e = err("e[p,0] + e[q,0]");
        assert_eq!((e.class(), e.offset), ("ConfigMismatch", 7));
        let e = err("1[p,p]");
        assert_eq!((e.class(), e.offset), ("OverlappingConfigurations", 4));
        let e = err("3/0 * 1[]");
        assert_eq!((e.class(), e.offset), ("SyntaxError", 2));
    }

    #[test]
    fn render_examples() {
        let m = base();
        assert_eq!(render(&FibreElement::vacuum()), "1[]");
        let pq = parse_element("e[q,0] # e[p,0]", &m).unwrap();
        assert_eq!(render(&pq), "e[p,0] # e[q,0]");
        let z = FibreElement::zero(Configuration::from_labels(&["p"]).unwrap());
        assert_eq!(render(&z), "0@[p]");
        assert_eq!(parse_element("0@[p]", &m).unwrap(), z);
        let x = parse_element("-1 * e[p,1] . e[p,0] # 1[r] + 5/2 * 1[p] # e[r,0]", &m).unwrap();
        assert_eq!(render(&x), "5/2 * 1[p] # e[r,0] + -1 * e[p,0] . e[p,1] # 1[r]");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_base(&mut rng, 4, 3);
            let x = random_config(&mut rng, &b, 3);
            let e = random_element(&mut rng, &b, &x, 4, 4);
            let text = render(&e);
            let back = parse_element(&text, &b).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(render(&back), text);
        }
    }
}
