//! Expression language over the class constructors.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := sum
//! sum     := prod ('+' prod)*
//! prod    := twisted (('*' | '·') twisted)*
//! twisted := primary ('{' int '}')*
//! primary := int | atom | 'dual' '(' expr ')' | '(' expr ')'
//! atom    := 'L' | 'Jac' ['^' nat] | 'BGm' | 'BGmC'
//!          | 'P' '(' nat ')' | 'Sym' ('(' nat ')' | '^' nat) | 'Z' '(' int ')'
//! ```
//!
//! `·` is a synonym for `*` and `Sym^j` for `Sym(j)`, so the canonical text
//! form of a class reparses. Integer literals may carry a leading minus
//! (there is no binary subtraction). A hand-rolled recursive-descent parser
//! reports errors with a byte offset and the expected token set.

use crate::curve::ValidatedCurve;
use crate::laurent::LaurentQ;
use crate::motring::{Atom, ClassError, MotClass, Window};
use num::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Lefschetz,
    Jac,
    BGm,
    BGmC,
    P(u32),
    Sym(u32),
    Z(i64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Twist(Box<Expr>, i64),
    Dual(Box<Expr>),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: expected {expected}, found {found}")]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("expression needs a genus binding (Jac or dual); pass --g")]
    UnboundGenus,
    #[error(transparent)]
    Class(#[from] ClassError),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Star,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {}", n),
            Tok::Ident(s) => format!("identifier '{}'", s),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '{' => {
                out.push((pos, Tok::LBrace));
                i += 1;
            }
            '}' => {
                out.push((pos, Tok::RBrace));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '-' | '−' | '0'..='9' => {
                let negative = ch == '-' || ch == '−';
                let mut j = if negative { i + 1 } else { i };
                if negative && (j >= bytes.len() || !bytes[j].1.is_ascii_digit()) {
                    return Err(SyntaxError {
                        offset: pos,
                        expected: "digit after '-'".into(),
                        found: if j < bytes.len() {
                            format!("'{}'", bytes[j].1)
                        } else {
                            "end of input".into()
                        },
                    });
                }
                let mut value: i64 = 0;
                while j < bytes.len() && bytes[j].1.is_ascii_digit() {
                    value = value * 10 + bytes[j].1.to_digit(10).unwrap() as i64;
                    j += 1;
                }
                out.push((pos, Tok::Int(if negative { -value } else { value })));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                let mut ident = String::new();
                while j < bytes.len() && bytes[j].1.is_ascii_alphanumeric() {
                    ident.push(bytes[j].1);
                    j += 1;
                }
                out.push((pos, Tok::Ident(ident)));
                i = j;
            }
            other => {
                return Err(SyntaxError {
                    offset: pos,
                    expected: "token".into(),
                    found: format!("'{}'", other),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected: expected.into(),
            found: self
                .peek()
                .map(|t| t.describe())
                .unwrap_or_else(|| "end of input".into()),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn int(&mut self, expected: &str) -> Result<i64, SyntaxError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err(expected)),
        }
    }

    fn nat(&mut self, expected: &str) -> Result<u32, SyntaxError> {
        let offset = self.offset();
        let n = self.int(expected)?;
        u32::try_from(n).map_err(|_| SyntaxError {
            offset,
            expected: expected.into(),
            found: format!("negative integer {}", n),
        })
    }

    fn sum(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.prod()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.prod()?;
            acc = Expr::Add(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.twisted()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.twisted()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn twisted(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.primary()?;
        while self.peek() == Some(&Tok::LBrace) {
            self.pos += 1;
            let k = self.int("twist integer")?;
            self.expect(Tok::RBrace, "'}'")?;
            acc = Expr::Twist(Box::new(acc), k);
        }
        Ok(acc)
    }

    fn paren_int(&mut self, what: &str) -> Result<i64, SyntaxError> {
        self.expect(Tok::LParen, "'('")?;
        let n = self.int(what)?;
        self.expect(Tok::RParen, "')'")?;
        Ok(n)
    }

    fn paren_nat(&mut self, what: &str) -> Result<u32, SyntaxError> {
        self.expect(Tok::LParen, "'('")?;
        let n = self.nat(what)?;
        self.expect(Tok::RParen, "')'")?;
        Ok(n)
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "L" => Ok(Expr::Lefschetz),
                    "Jac" => {
                        if self.peek() == Some(&Tok::Caret) {
                            self.pos += 1;
                            let a = self.nat("non-negative exponent")?;
                            let mut acc = Expr::Jac;
                            for _ in 1..a.max(1) {
                                acc = Expr::Mul(Box::new(acc), Box::new(Expr::Jac));
                            }
                            if a == 0 {
                                acc = Expr::Int(1);
                            }
                            Ok(acc)
                        } else {
                            Ok(Expr::Jac)
                        }
                    }
                    "BGm" => Ok(Expr::BGm),
                    "BGmC" => Ok(Expr::BGmC),
                    "P" => Ok(Expr::P(self.paren_nat("non-negative integer")?)),
                    "Sym" => {
                        if self.peek() == Some(&Tok::Caret) {
                            self.pos += 1;
                            Ok(Expr::Sym(self.nat("non-negative exponent")?))
                        } else {
                            Ok(Expr::Sym(self.paren_nat("non-negative integer")?))
                        }
                    }
                    "Z" => Ok(Expr::Z(self.paren_int("integer direction")?)),
                    "dual" => {
                        self.expect(Tok::LParen, "'('")?;
                        let e = self.sum()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Dual(Box::new(e)))
                    }
                    other => Err(SyntaxError {
                        offset: self.toks[self.pos - 1].0,
                        expected: "atom (L, Jac, BGm, BGmC, P, Sym, Z) or 'dual'".into(),
                        found: format!("identifier '{}'", other),
                    }),
                }
            }
            _ => Err(self.err("integer, atom, 'dual(...)' or '(...)'")),
        }
    }
}

/// Parses an expression; errors carry the byte offset of the offending token.
pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.err("end of input or operator"));
    }
    Ok(e)
}

/// Renders an expression so that `parse(render(e)) == e`. Parenthesization
/// follows the grammar's precedence; sugar forms are never emitted.
pub fn render(e: &Expr) -> String {
    fn prec(e: &Expr) -> u8 {
        match e {
            Expr::Add(..) => 0,
            Expr::Mul(..) => 1,
            Expr::Twist(..) => 2,
            _ => 3,
        }
    }
    fn go(e: &Expr, min_prec: u8, out: &mut String) {
        let wrap = prec(e) < min_prec;
        if wrap {
            out.push('(');
        }
        match e {
            Expr::Int(n) => out.push_str(&n.to_string()),
            Expr::Lefschetz => out.push('L'),
            Expr::Jac => out.push_str("Jac"),
            Expr::BGm => out.push_str("BGm"),
            Expr::BGmC => out.push_str("BGmC"),
            Expr::P(n) => out.push_str(&format!("P({})", n)),
            Expr::Sym(j) => out.push_str(&format!("Sym({})", j)),
            Expr::Z(i) => out.push_str(&format!("Z({})", i)),
            Expr::Add(a, b) => {
                go(a, 0, out);
                out.push_str(" + ");
                go(b, 1, out);
            }
            Expr::Mul(a, b) => {
                go(a, 1, out);
                out.push('*');
                go(b, 2, out);
            }
            Expr::Twist(a, k) => {
                go(a, 2, out);
                out.push_str(&format!("{{{}}}", k));
            }
            Expr::Dual(a) => {
                out.push_str("dual(");
                go(a, 0, out);
                out.push(')');
            }
        }
        if wrap {
            out.push(')');
        }
    }
    let mut s = String::new();
    go(e, 0, &mut s);
    s
}

/// Evaluation context: the window every series constructor is truncated to,
/// and an optional genus binding for `Jac` and `dual`.
#[derive(Debug, Clone, Copy)]
pub struct EvalCtx {
    pub genus: Option<u32>,
    pub window: Window,
}

impl EvalCtx {
    pub fn new(genus: Option<u32>, lo: i64, hi: i64) -> Self {
        EvalCtx {
            genus,
            window: Window::inside(lo, hi),
        }
    }
}

/// Evaluates an expression to a class. Delegates to the library
/// constructors, so evaluation agrees with direct calls.
pub fn eval(e: &Expr, ctx: &EvalCtx) -> Result<MotClass, EvalError> {
    match e {
        Expr::Int(n) => Ok(MotClass::scalar(BigInt::from(*n))),
        Expr::Lefschetz => Ok(MotClass::lefschetz()),
        Expr::Jac => {
            let g = ctx.genus.ok_or(EvalError::UnboundGenus)?;
            Ok(MotClass::from_atom(Atom::jac(), 0, Some(g))?)
        }
        Expr::BGm => Ok(MotClass::bgm_hom(Window::lower(
            ctx.window.lo,
            ctx.window.hi,
        ))),
        Expr::BGmC => Ok(MotClass::bgm_k0(Window::upper(
            ctx.window.lo,
            ctx.window.hi,
        ))),
        Expr::P(n) => Ok(MotClass::projective_space(*n)),
        Expr::Sym(j) => Ok(MotClass::from_atom(Atom::sym(*j), 0, None)?),
        Expr::Z(i) => {
            let w = if *i >= 1 {
                Window::lower(ctx.window.lo, ctx.window.hi)
            } else {
                Window::upper(ctx.window.lo, ctx.window.hi)
            };
            Ok(MotClass::zeta_class(*i, w)?)
        }
        Expr::Add(a, b) => Ok(eval(a, ctx)?.add(&eval(b, ctx)?)?),
        Expr::Mul(a, b) => Ok(eval(a, ctx)?.mul(&eval(b, ctx)?)?),
        Expr::Twist(a, k) => Ok(eval(a, ctx)?.twist(*k)),
        Expr::Dual(a) => {
            let g = ctx.genus.ok_or(EvalError::UnboundGenus)?;
            Ok(eval(a, ctx)?.dual(g)?)
        }
    }
}

/// Evaluates and realizes against a curve; the window is `[-t, t]` so the
/// resulting series is defined at least to order `t` for the
/// compact-support constructors.
pub fn realize(e: &Expr, curve: &ValidatedCurve, t: i64) -> Result<LaurentQ, EvalError> {
    let ctx = EvalCtx::new(Some(curve.genus()), -t, t);
    let class = eval(e, &ctx)?;
    Ok(class.count_realize(curve)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num::BigRational;

    #[test]
    fn parses_products_of_atoms() {
        let e = parse("Jac * BGm * Z(1)").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                Box::new(Expr::Mul(Box::new(Expr::Jac), Box::new(Expr::BGm))),
                Box::new(Expr::Z(1))
            )
        );
    }

    #[test]
    fn parses_twists_and_sums() {
        let e = parse("Sym(2){-4} + 3*P(1)").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Twist(Box::new(Expr::Sym(2)), -4)),
                Box::new(Expr::Mul(Box::new(Expr::Int(3)), Box::new(Expr::P(1))))
            )
        );
    }

    #[test]
    fn reports_offset_of_missing_argument() {
        let err = parse("Z()").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(parse("L L").is_err());
        assert!(parse("L +").is_err());
        assert!(parse("{3}").is_err());
    }

    #[test]
    fn accepts_canonical_class_sugar() {
        let e = parse("3·Jac·Sym^2{-4}").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                Box::new(Expr::Mul(Box::new(Expr::Int(3)), Box::new(Expr::Jac))),
                Box::new(Expr::Twist(Box::new(Expr::Sym(2)), -4))
            )
        );
        assert_eq!(
            parse("Jac^2").unwrap(),
            Expr::Mul(Box::new(Expr::Jac), Box::new(Expr::Jac))
        );
    }

    #[test]
    fn render_round_trips_fixture_expressions() {
        for src in [
            "Jac * BGm * Z(1)",
            "Sym(2){-4} + 3*P(1)",
            "dual(Z(1))",
            "(L + 1{0})*(L + 1{0})",
            "BGmC{2}{-1}",
            "-4*Sym(3) + dual(Jac{2} + P(2))",
        ] {
            let ast = parse(src).unwrap();
            assert_eq!(parse(&render(&ast)).unwrap(), ast, "source: {}", src);
        }
    }

    #[test]
    fn eval_matches_direct_constructors() {
        let ctx = EvalCtx::new(Some(1), 0, 10);
        let via_dsl = eval(&parse("Jac*BGm").unwrap(), &ctx).unwrap();
        let direct = crate::bun::conj_motive(1, 1, Window::lower(0, 10)).unwrap();
        assert_eq!(via_dsl.compare_on(&direct, 1, 10).unwrap(), None);
    }

    #[test]
    fn eval_dual_of_zeta_matches_shifted_zeta() {
        let ctx = EvalCtx::new(Some(3), -40, 40);
        let lhs = eval(&parse("dual(Z(1))").unwrap(), &ctx).unwrap();
        let rhs = eval(&parse("Z(-2)").unwrap(), &ctx).unwrap();
        assert_eq!(lhs.compare_on(&rhs, -15, 0).unwrap(), None);
    }

    #[test]
    fn eval_without_genus_fails_for_jac_and_dual() {
        let ctx = EvalCtx::new(None, 0, 5);
        assert_eq!(
            eval(&parse("Jac").unwrap(), &ctx).unwrap_err(),
            EvalError::UnboundGenus
        );
        assert_eq!(
            eval(&parse("dual(L)").unwrap(), &ctx).unwrap_err(),
            EvalError::UnboundGenus
        );
    }

    #[test]
    fn realize_bgmc_is_truncated_geometric_series() {
        let r = realize(&parse("BGmC").unwrap(), &fixtures::p1_f2(), 5).unwrap();
        assert_eq!(r.truncation(), Some(5));
        for e in 1..=5 {
            assert_eq!(r.coeff(e), Some(BigRational::from(BigInt::from(1))));
        }
    }

    #[test]
    fn class_canonical_text_reparses_to_same_class() {
        let ctx = EvalCtx::new(Some(1), -20, 20);
        let class = eval(&parse("3*Jac*Sym(2){-4} + P(2) + -2*L{3}").unwrap(), &ctx).unwrap();
        let reparsed = eval(&parse(&class.canonical_text()).unwrap(), &ctx).unwrap();
        assert_eq!(
            class.compare_on(&reparsed, -20, 20).unwrap(),
            None,
            "text: {}",
            class.canonical_text()
        );
    }
}
