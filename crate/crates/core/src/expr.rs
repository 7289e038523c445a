//! Small arithmetic expression language for loads and boundary data.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, functions `sin`, `cos`,
//! `exp`, constants `pi`, `e`, variables `x`, `t`. `^` is right-associative
//! and binds tighter than unary minus, so `-x^2 == -(x^2)`.
//!
//! Parse failures carry the byte position of the offending token; they never
//! panic.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(u8), // interned: 0=x 1=t 2=pi 3=e 4=sin 5=cos 6=exp
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Spanned { tok: Tok::Plus, pos: i });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, pos: i });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, pos: i });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, pos: i });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, pos: i });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, pos: i });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, pos: i });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent only if followed by digits (so `2e` stays an error,
                // and `2*e` keeps meaning Euler's number)
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                out.push(Spanned { tok: Tok::Num(value), pos: start });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &src[start..i];
                let id = match name {
                    "x" => 0,
                    "t" => 1,
                    "pi" => 2,
                    "e" => 3,
                    "sin" => 4,
                    "cos" => 5,
                    "exp" => 6,
                    _ => {
                        return Err(Error::Parse {
                            pos: start,
                            msg: format!("unknown identifier `{name}`"),
                        })
                    }
                };
                out.push(Spanned { tok: Tok::Ident(id), pos: start });
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Num(f64),
    X,
    T,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Sin(Box<Ast>),
    Cos(Box<Ast>),
    Exp(Box<Ast>),
}

struct Parser<'a> {
    toks: &'a [Spanned],
    at: usize,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|s| s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|s| s.pos).unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.at += 1;
        t
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.at += 1;
                Ok(())
            }
            _ => Err(Error::Parse {
                pos: self.pos(),
                msg: "expected `)`".into(),
            }),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if let Some(Tok::Minus) = self.peek() {
            self.at += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            let exponent = self.unary()?; // right-associative
            return Ok(Ast::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Ast::Num(v)),
            Some(Tok::Ident(0)) => Ok(Ast::X),
            Some(Tok::Ident(1)) => Ok(Ast::T),
            Some(Tok::Ident(2)) => Ok(Ast::Num(std::f64::consts::PI)),
            Some(Tok::Ident(3)) => Ok(Ast::Num(std::f64::consts::E)),
            Some(Tok::Ident(f @ 4..=6)) => {
                match self.peek() {
                    Some(Tok::LParen) => self.at += 1,
                    _ => {
                        return Err(Error::Parse {
                            pos: self.pos(),
                            msg: "expected `(` after function name".into(),
                        })
                    }
                }
                let arg = Box::new(self.expr()?);
                self.expect_rparen()?;
                Ok(match f {
                    4 => Ast::Sin(arg),
                    5 => Ast::Cos(arg),
                    _ => Ast::Exp(arg),
                })
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn eval_ast(ast: &Ast, x: f64, t: f64) -> f64 {
    match ast {
        Ast::Num(v) => *v,
        Ast::X => x,
        Ast::T => t,
        Ast::Neg(a) => -eval_ast(a, x, t),
        Ast::Add(a, b) => eval_ast(a, x, t) + eval_ast(b, x, t),
        Ast::Sub(a, b) => eval_ast(a, x, t) - eval_ast(b, x, t),
        Ast::Mul(a, b) => eval_ast(a, x, t) * eval_ast(b, x, t),
        Ast::Div(a, b) => eval_ast(a, x, t) / eval_ast(b, x, t),
        Ast::Pow(a, b) => eval_ast(a, x, t).powf(eval_ast(b, x, t)),
        Ast::Sin(a) => eval_ast(a, x, t).sin(),
        Ast::Cos(a) => eval_ast(a, x, t).cos(),
        Ast::Exp(a) => eval_ast(a, x, t).exp(),
    }
}

/// A parsed expression in the variables `x` and `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    src: String,
    ast: Ast,
}

impl CompiledExpr {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        eval_ast(&self.ast, x, t)
    }

    pub fn source(&self) -> &str {
        &self.src
    }
}

impl fmt::Display for CompiledExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

/// Parses an expression; the error carries the byte position of the problem.
pub fn parse_expr(src: &str) -> Result<CompiledExpr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        src_len: src.len(),
    };
    let ast = p.expr()?;
    if p.at != toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input after expression".into(),
        });
    }
    Ok(CompiledExpr {
        src: src.to_string(),
        ast,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ev(src: &str, x: f64, t: f64) -> f64 {
        parse_expr(src).unwrap().eval(x, t)
    }

    #[test]
    fn spec_example() {
        assert_abs_diff_eq!(ev("sin(pi*x)*cos(t)", 0.5, 0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_abs_diff_eq!(ev("2+3*4^2", 0.0, 0.0), 50.0);
        assert_abs_diff_eq!(ev("2^3^2", 0.0, 0.0), 512.0);
        assert_abs_diff_eq!(ev("-2^2", 0.0, 0.0), -4.0);
        assert_abs_diff_eq!(ev("(2+3)*4", 0.0, 0.0), 20.0);
        assert_abs_diff_eq!(ev("2-3-4", 0.0, 0.0), -5.0);
        assert_abs_diff_eq!(ev("16/4/2", 0.0, 0.0), 2.0);
        assert_abs_diff_eq!(ev("2^-1", 0.0, 0.0), 0.5);
    }

    #[test]
    fn variables_constants_functions() {
        assert_abs_diff_eq!(ev("x*t", 3.0, 4.0), 12.0);
        assert_abs_diff_eq!(ev("exp(0)", 0.0, 0.0), 1.0);
        assert_abs_diff_eq!(ev("e", 0.0, 0.0), std::f64::consts::E);
        assert_abs_diff_eq!(ev("2*e", 0.0, 0.0), 2.0 * std::f64::consts::E);
        assert_abs_diff_eq!(ev("1e-3", 0.0, 0.0), 1e-3);
        assert_abs_diff_eq!(ev("1.5e2", 0.0, 0.0), 150.0);
        assert_abs_diff_eq!(ev("cos(pi)", 0.0, 0.0), -1.0);
    }

    #[test]
    fn errors_carry_positions() {
        for (src, want_pos) in [
            ("", 0),
            ("1+", 2),
            ("sin", 3),
            ("sin(1", 5),
            ("(1", 2),
            ("1 $ 2", 2),
            ("foo(2)", 0),
            ("1 2", 2),
        ] {
            match parse_expr(src) {
                Err(Error::Parse { pos, .. }) => {
                    assert_eq!(pos, want_pos, "wrong position for `{src}`")
                }
                other => panic!("expected parse error for `{src}`, got {other:?}"),
            }
        }
    }

    #[test]
    fn never_panics_on_junk() {
        for src in ["))((", "^^", "--", "1e", "2e+", "x y", "sin cos", "1.2.3", "§"] {
            let _ = parse_expr(src);
        }
    }
}
