//! The expression language.
//!
//! ```text
//! expr    := ['-'] product (('+' | '-') product)*
//! product := term (('*' | '.') term)*
//! term    := factor ('^' int)?
//! factor  := ident | 'sigma(' ident ')' | '(' expr ')' | scalar | 'nu' | 'unit'
//!          | 'subst(' rational ')(' expr ')' | 'quot(' int ')(' expr ')'
//! scalar  := int ['/' int] ['i'] | 'i'
//! ```
//!
//! `*` is the star product and `.` the pointwise product; both are left
//! associative. Positions in errors are character offsets from 0.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use wickstar::arith::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarLit {
    pub value: Rational,
    pub imaginary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident(String),
    Sigma(String),
    Scalar(ScalarLit),
    Nu,
    Unit,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
    Pointwise(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
    Subst(Rational, Box<Expr>),
    Quot(usize, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(input: &str) -> Result<Lexer, SyntaxError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut p = 0;
    while p < chars.len() {
        let c = chars[p];
        if c.is_whitespace() {
            p += 1;
        } else if c.is_ascii_digit() {
            let start = p;
            while p < chars.len() && chars[p].is_ascii_digit() {
                p += 1;
            }
            let digits: String = chars[start..p].iter().collect();
            toks.push((Tok::Int(digits.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = p;
            while p < chars.len() && (chars[p].is_ascii_alphanumeric() || chars[p] == '_') {
                p += 1;
            }
            toks.push((Tok::Ident(chars[start..p].iter().collect()), start));
        } else if "()*.^+-/".contains(c) {
            toks.push((Tok::Sym(c), p));
            p += 1;
        } else {
            return Err(SyntaxError {
                position: p,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    toks.push((Tok::End, chars.len()));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

const KEYWORDS: [&str; 6] = ["sigma", "subst", "quot", "nu", "unit", "i"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Int(v) => format!("{v}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::End => "end of input".into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {c:?}, found {}", self.describe()))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.product()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Star(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('.') {
                lhs = Expr::Pointwise(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.factor()?;
        if self.eat('^') {
            let Tok::Int(v) = self.peek().clone() else {
                return self.err(format!("expected an integer exponent, found {}", self.describe()));
            };
            let Ok(e) = u32::try_from(v) else {
                return self.err("exponent too large");
            };
            self.bump();
            return Ok(Expr::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<BigInt, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    /// int ['/' int]
    fn rational(&mut self) -> Result<Rational, SyntaxError> {
        let num = self.int()?;
        if self.eat('/') {
            let pos = self.pos();
            let den = self.int()?;
            if den.is_zero() {
                return Err(SyntaxError {
                    position: pos,
                    message: "zero denominator".into(),
                });
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    /// Whether the next token is an `i` glued to the preceding number.
    fn imaginary_suffix(&mut self) -> bool {
        if let Tok::Ident(s) = self.peek() {
            if s == "i" && self.pos() == self.toks[self.at - 1].1 + token_len(&self.toks[self.at - 1].0) {
                self.bump();
                return true;
            }
        }
        false
    }

    fn call_arg_then_body(&mut self) -> Result<Expr, SyntaxError> {
        self.expect(')')?;
        self.expect('(')?;
        let body = self.expr()?;
        self.expect(')')?;
        Ok(body)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(_) => {
                let value = self.rational()?;
                let imaginary = self.imaginary_suffix();
                Ok(Expr::Scalar(ScalarLit { value, imaginary }))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Expr::Scalar(ScalarLit {
                        value: Rational::one(),
                        imaginary: true,
                    })),
                    "nu" => Ok(Expr::Nu),
                    "unit" => Ok(Expr::Unit),
                    "sigma" => {
                        self.expect('(')?;
                        let Tok::Ident(arg) = self.peek().clone() else {
                            return self.err(format!("expected an identifier, found {}", self.describe()));
                        };
                        if KEYWORDS.contains(&arg.as_str()) {
                            return self.err(format!("{arg:?} is reserved"));
                        }
                        self.bump();
                        self.expect(')')?;
                        Ok(Expr::Sigma(arg))
                    }
                    "subst" => {
                        self.expect('(')?;
                        let negative = self.eat('-');
                        let mut a = self.rational()?;
                        if negative {
                            a = -a;
                        }
                        let body = self.call_arg_then_body()?;
                        Ok(Expr::Subst(a, Box::new(body)))
                    }
                    "quot" => {
                        self.expect('(')?;
                        let pos = self.pos();
                        let k = self.int()?;
                        let k = usize::try_from(k).ok().filter(|k| *k > 0).ok_or(SyntaxError {
                            position: pos,
                            message: "K must be a positive integer".into(),
                        })?;
                        let body = self.call_arg_then_body()?;
                        Ok(Expr::Quot(k, Box::new(body)))
                    }
                    _ => Ok(Expr::Ident(name)),
                }
            }
            _ => self.err(format!("expected an operand, found {}", self.describe())),
        }
    }
}

fn token_len(t: &Tok) -> usize {
    match t {
        Tok::Ident(s) => s.chars().count(),
        Tok::Int(v) => v.to_string().len(),
        Tok::Sym(_) => 1,
        Tok::End => 0,
    }
}

pub fn parse(input: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser {
        toks: lex(input)?.toks,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {}", p.describe()));
    }
    Ok(e)
}

// Binding strength for printing: sums < products < powers < atoms.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Neg(_) | Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Star(..) | Expr::Pointwise(..) => 1,
        Expr::Power(..) => 2,
        // a rational literal followed by '^' would bind only its denominator
        Expr::Scalar(s) if !s.value.is_integer() || s.value.is_negative() => 2,
        _ => 3,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if level(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.imaginary, self.value.is_one()) {
            (true, true) => f.write_str("i"),
            (true, false) => write!(f, "{}i", format_rational(&self.value)),
            (false, _) => f.write_str(&format_rational(&self.value)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ident(s) => f.write_str(s),
            Expr::Sigma(s) => write!(f, "sigma({s})"),
            Expr::Scalar(s) => write!(f, "{s}"),
            Expr::Nu => f.write_str("nu"),
            Expr::Unit => f.write_str("unit"),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 1)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 0), wrap(b, 1)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 0), wrap(b, 1)),
            Expr::Star(a, b) => write!(f, "{} * {}", wrap(a, 1), wrap(b, 2)),
            Expr::Pointwise(a, b) => write!(f, "{} . {}", wrap(a, 1), wrap(b, 2)),
            Expr::Power(a, e) => write!(f, "{}^{e}", wrap(a, 3)),
            Expr::Subst(a, e) => write!(f, "subst({})({e})", format_rational(a)),
            Expr::Quot(k, e) => write!(f, "quot({k})({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(a: Expr, b: Expr) -> Expr {
        Expr::Star(Box::new(a), Box::new(b))
    }

    #[test]
    fn documented_forms() {
        let (a, b) = (Expr::Sigma("A".into()), Expr::Sigma("B".into()));
        assert_eq!(parse("sigma(A) * sigma(B)").unwrap(), star(a.clone(), b.clone()));
        assert_eq!(
            parse("sigma(A)^2 * sigma(B)").unwrap(),
            star(Expr::Power(Box::new(a.clone()), 2), b.clone())
        );
        let e = parse("sigma(A").unwrap_err();
        assert_eq!(e.position, 7);
    }

    #[test]
    fn associativity_and_precedence() {
        let e = parse("a * b . c + d").unwrap();
        let [a, b, c, d] = ["a", "b", "c", "d"].map(|s| Expr::Ident(s.into()));
        let lhs = Expr::Pointwise(Box::new(star(a, b)), Box::new(c));
        assert_eq!(e, Expr::Add(Box::new(lhs), Box::new(d)));
        assert!(matches!(parse("a - b - c").unwrap(), Expr::Sub(l, _) if matches!(*l, Expr::Sub(..))));
    }

    #[test]
    fn scalars() {
        let lit = |e: &str| match parse(e).unwrap() {
            Expr::Scalar(s) => (format_rational(&s.value), s.imaginary),
            other => panic!("{other:?}"),
        };
        assert_eq!(lit("3"), ("3".into(), false));
        assert_eq!(lit("1/2"), ("1/2".into(), false));
        assert_eq!(lit("i"), ("1".into(), true));
        assert_eq!(lit("2i"), ("2".into(), true));
        assert_eq!(lit("3/4i"), ("3/4".into(), true));
        // a separated i is an operand, not a suffix
        assert!(parse("2 i").is_err());
        assert_eq!(parse("nu").unwrap(), Expr::Nu);
        assert_eq!(parse("unit").unwrap(), Expr::Unit);
    }

    #[test]
    fn function_forms() {
        assert_eq!(
            parse("subst(-1/3)(unit)").unwrap(),
            Expr::Subst(Rational::new((-1).into(), 3.into()), Box::new(Expr::Unit))
        );
        assert!(matches!(parse("quot(2)(sigma(A) * sigma(B))").unwrap(), Expr::Quot(2, _)));
        assert_eq!(parse("quot(0)(unit)").unwrap_err().position, 5);
        assert!(parse("subst(1/0)(unit)").is_err());
        assert!(parse("sigma(nu)").is_err());
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse("").unwrap_err().position, 0);
        assert_eq!(parse("a * ").unwrap_err().position, 4);
        assert_eq!(parse("a $ b").unwrap_err().position, 2);
        assert_eq!(parse("(a * b").unwrap_err().position, 6);
        assert_eq!(parse("a^b").unwrap_err().position, 2);
        assert_eq!(parse("a b").unwrap_err().position, 2);
    }

    #[test]
    fn print_round_trip() {
        let corpus = [
            "sigma(A) * sigma(B)",
            "sigma(A)^2 * sigma(B)",
            "(a + b) * c",
            "a * (b * c)",
            "a . (b . c) . d",
            "-(a + b)",
            "-a * b + c",
            "a - (b - c)",
            "(1/2)^3 * x",
            "2i * sigma(A) + 3/4 . nu",
            "quot(3)(subst(1/2)(unit) * e)",
            "subst(-2)(sigma(A)^2 - nu * sigma(B))",
            "((a^2)^3)",
            "i * i",
        ];
        for s in corpus {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} printed as {printed}");
            assert_eq!(parse(&printed).unwrap().to_string(), printed);
        }
    }
}
