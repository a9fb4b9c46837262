//! A small calculator language over bicomplex numbers.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | postfix
//! postfix := primary ("^" ("dag1" | "dag2" | "dag3" | integer))*
//! primary := number [unit] | unit | "[" expr "|" expr "]" | "(" expr ")"
//!          | ("knorm" | "abs" | "inv") "(" expr ")"
//! unit    := "i" | "j" | "k" | "e1" | "e2"
//! ```
//!
//! `3j` is `3·j` and `2e1` is `2·e1`; an exponent must carry a sign or use
//! `E` (`1e-3`, `1E3`). The parts of an idempotent literal `[z1|z2]` must be
//! in `C(i)`. `knorm` returns `|Z|_k`, `abs` the Euclidean norm.

use crate::error::{BcError, Result};
use crate::scalar::{Bicomplex, Complex, Conjugation};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent: E[sign]digits or e<sign>digits
            if i < chars.len() && (chars[i] == 'E' || chars[i] == 'e') {
                let signed = i + 1 < chars.len() && matches!(chars[i + 1], '+' | '-');
                let digit_at = |k: usize| k < chars.len() && chars[k].is_ascii_digit();
                let take = if chars[i] == 'E' {
                    if signed { digit_at(i + 2) } else { digit_at(i + 1) }
                } else {
                    signed && digit_at(i + 2)
                };
                if take {
                    i += if signed { 2 } else { 1 };
                    while digit_at(i) {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| BcError::Parse { pos: col, msg: format!("bad number {text:?}") })?;
            toks.push((Tok::Num(v), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()[]|".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(BcError::Parse { pos: col, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(Lexer { toks })
}

fn unit(name: &str) -> Option<Bicomplex> {
    Some(match name {
        "i" => Bicomplex::I,
        "j" => Bicomplex::J,
        "k" => Bicomplex::K,
        "e1" => Bicomplex::E1,
        "e2" => Bicomplex::E2,
        _ => return None,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(BcError::Parse { pos: self.col(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn expr(&mut self) -> Result<Bicomplex> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Bicomplex> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Bicomplex> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.postfix()
        }
    }

    fn postfix(&mut self) -> Result<Bicomplex> {
        let mut v = self.primary()?;
        while self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Ident(name)) => {
                    let kind = match name.as_str() {
                        "dag1" => Conjugation::Dag1,
                        "dag2" => Conjugation::Dag2,
                        "dag3" => Conjugation::Dag3,
                        _ => return self.err(format!("unknown conjugation {name:?}")),
                    };
                    self.pos += 1;
                    v = v.conj(kind);
                }
                _ => {
                    let neg = self.eat('-');
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) if n.fract() == 0.0 && n.abs() <= i32::MAX as f64 => {
                            self.pos += 1;
                            v = v.powi(if neg { -(n as i32) } else { n as i32 })?;
                        }
                        _ => return self.err("expected dag1, dag2, dag3 or an integer exponent"),
                    }
                }
            }
        }
        Ok(v)
    }

    fn primary(&mut self) -> Result<Bicomplex> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v = Bicomplex::real(n)?;
                if let Some(Tok::Ident(name)) = self.peek().cloned() {
                    if let Some(u) = unit(&name) {
                        self.pos += 1;
                        return Ok(v * u);
                    }
                }
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(u) = unit(&name) {
                    return Ok(u);
                }
                let f: fn(Bicomplex) -> Result<Bicomplex> = match name.as_str() {
                    "knorm" => |z| Ok(Bicomplex::from(z.knorm())),
                    "abs" => |z| Bicomplex::real(z.euclid_norm()),
                    "inv" => |z| z.inverse(),
                    _ => return Err(BcError::Parse { pos: col, msg: format!("unknown name {name:?}") }),
                };
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                f(arg)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let z1 = self.complex_part()?;
                self.expect('|')?;
                let z2 = self.complex_part()?;
                self.expect(']')?;
                Bicomplex::from_idempotent(z1, z2)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn complex_part(&mut self) -> Result<Complex> {
        let col = self.col();
        let v = self.expr()?;
        if v.w2() != Complex::new(0.0, 0.0) {
            return Err(BcError::Parse { pos: col, msg: "idempotent parts must lie in C(i)".into() });
        }
        Ok(v.w1())
    }
}

/// Evaluates an expression; positions in parse errors are 1-based columns.
pub fn eval_expr(src: &str) -> Result<Bicomplex> {
    let lexer = lex(src)?;
    let end = src.chars().count() + 1;
    let mut p = Parser { toks: lexer.toks, pos: 0, end };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    if !v.is_finite() {
        return Err(BcError::NonFinite("expression result"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Hyperbolic;

    fn ev(s: &str) -> Bicomplex {
        eval_expr(s).unwrap()
    }

    #[test]
    fn units_and_literals() {
        assert_eq!(ev("e1*e2"), Bicomplex::ZERO);
        assert_eq!(ev("1+2i+3j+4k"), Bicomplex::from_parts(1.0, 2.0, 3.0, 4.0).unwrap());
        assert_eq!(ev("i*j"), Bicomplex::K);
        assert_eq!(ev("2e1"), Bicomplex::E1 * Bicomplex::real(2.0).unwrap());
        assert_eq!(ev("1e-3"), Bicomplex::real(1e-3).unwrap());
        assert_eq!(ev("1E3"), Bicomplex::real(1e3).unwrap());
        assert_eq!(ev("[3|4]").idempotent(), (Complex::new(3.0, 0.0), Complex::new(4.0, 0.0)));
        assert_eq!(ev("[1+2i|-i]").idempotent(), (Complex::new(1.0, 2.0), Complex::new(0.0, -1.0)));
    }

    #[test]
    fn functions_and_postfix() {
        assert_eq!(ev("knorm([3|4])").as_hyperbolic(), Some(Hyperbolic::new(3.0, 4.0).unwrap()));
        assert_eq!(ev("inv([2|4])").idempotent(), (Complex::new(0.5, 0.0), Complex::new(0.25, 0.0)));
        assert_eq!(ev("(1+j)^dag2"), ev("1-j"));
        assert_eq!(ev("(2+i)^dag1"), ev("2-i"));
        assert_eq!(ev("j^2"), ev("-1"));
        assert_eq!(ev("k^-1"), Bicomplex::K);
        assert_eq!(ev("abs([3|4])"), Bicomplex::real(12.5f64.sqrt()).unwrap());
        assert_eq!(ev("-(1+i)"), ev("-1-i"));
        assert_eq!(ev("6/[2|3]").idempotent(), (Complex::new(3.0, 0.0), Complex::new(2.0, 0.0)));
    }

    #[test]
    fn errors() {
        assert!(matches!(eval_expr("inv(e1)"), Err(BcError::NullCone(_))));
        assert!(matches!(eval_expr("1/e2"), Err(BcError::NullCone(_))));
        assert_eq!(eval_expr("1 + * 2"), Err(BcError::Parse { pos: 5, msg: "unexpected Sym('*')".into() }));
        assert!(matches!(eval_expr("foo(1)"), Err(BcError::Parse { pos: 1, .. })));
        assert!(matches!(eval_expr("[j|1]"), Err(BcError::Parse { pos: 2, .. })));
        assert!(matches!(eval_expr("(1"), Err(BcError::Parse { pos: 3, .. })));
        assert!(matches!(eval_expr("1 2"), Err(BcError::Parse { .. })));
        assert!(matches!(eval_expr("1 $"), Err(BcError::Parse { pos: 3, .. })));
    }
}
