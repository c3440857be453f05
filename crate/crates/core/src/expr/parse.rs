//! Precedence-climbing parser for the ASCII equation syntax.
//!
//! Tightest to loosest: postfix `+n`, relational operators (non-associative),
//! `&` (min), `|` (max). `xmin(a, b)` and `xmax(a, b)` are call forms.

use super::Expr;
use crate::error::{Error, Result};
use crate::value::BinOp;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Plus,
    Rel(BinOp),
    Amp,
    Pipe,
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'&' => out.push((Tok::Amp, start)),
            b'|' => out.push((Tok::Pipe, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'<' | b'>' | b'=' | b'!' => {
                let two = bytes.get(i + 1) == Some(&b'=');
                let op = match (c, two) {
                    (b'<', false) => BinOp::Lt,
                    (b'<', true) => BinOp::Le,
                    (b'>', false) => BinOp::Gt,
                    (b'>', true) => BinOp::Ge,
                    (b'=', true) => BinOp::Eq,
                    (b'!', true) => BinOp::Ne,
                    _ => return Err(err(start, "expected `==` or `!=`")),
                };
                if two {
                    i += 1;
                }
                out.push((Tok::Rel(op), start));
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..=i]
                    .parse::<u32>()
                    .map_err(|_| err(start, "integer literal out of range"))?;
                out.push((Tok::Int(n), start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..=i].to_string()), start));
            }
            _ => return Err(err(start, &format!("unexpected character `{}`", c as char))),
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn max_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.min_expr()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Expr::max(lhs, self.min_expr()?);
        }
        Ok(lhs)
    }

    fn min_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.rel_expr()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Expr::min(lhs, self.rel_expr()?);
        }
        Ok(lhs)
    }

    fn rel_expr(&mut self) -> Result<Expr> {
        let lhs = self.postfix()?;
        if let Tok::Rel(op) = *self.peek() {
            self.bump();
            let rhs = self.postfix()?;
            if let Tok::Rel(_) = self.peek() {
                return self.error("relational operators do not chain; add parentheses");
            }
            return Ok(Expr::bin(op, lhs, rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            match *self.peek() {
                Tok::Int(c) if c > 0 => {
                    self.bump();
                    e = e.delay(c);
                }
                Tok::Int(_) => return self.error("delay must be at least 1"),
                _ => return self.error("expected an integer delay after `+`"),
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::Ident(name) => {
                self.bump();
                let call = match name.as_str() {
                    "xmin" => Some(BinOp::XMin),
                    "xmax" => Some(BinOp::XMax),
                    _ => None,
                };
                match call {
                    Some(op) if *self.peek() == Tok::LParen => {
                        self.bump();
                        let a = self.max_expr()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let b = self.max_expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::bin(op, a, b))
                    }
                    _ => Ok(Expr::Var(name)),
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.max_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::End => self.error("unexpected end of input"),
            t => self.error(format!("unexpected token {t:?}")),
        }
    }
}

/// Parses one expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.max_expr()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn precedence_example() {
        let got = parse("a+1 < b+2 & c | d+3").unwrap();
        let want = Expr::max(
            Expr::min(
                Expr::bin(BinOp::Lt, v("a").delay(1), v("b").delay(2)),
                v("c"),
            ),
            v("d").delay(3),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn minterm_shape() {
        let got = parse("(A == 0) | (B == 0) | 4").unwrap();
        let want = Expr::max(
            Expr::max(
                Expr::eq(v("A"), Expr::Const(0)),
                Expr::eq(v("B"), Expr::Const(0)),
            ),
            Expr::Const(4),
        );
        assert_eq!(got, want);
        // precedence makes the parentheses redundant
        assert_eq!(parse("A == 0 | B == 0 | 4").unwrap(), want);
    }

    #[test]
    fn relational_chain_rejected() {
        let err = parse("a < b < c").unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 6, .. }), "{err:?}");
        assert!(parse("(a < b) < c").is_ok());
    }

    #[test]
    fn all_tokens() {
        for (src, op) in [
            ("a < b", BinOp::Lt),
            ("a <= b", BinOp::Le),
            ("a > b", BinOp::Gt),
            ("a >= b", BinOp::Ge),
            ("a == b", BinOp::Eq),
            ("a != b", BinOp::Ne),
            ("a & b", BinOp::Min),
            ("a | b", BinOp::Max),
            ("xmin(a, b)", BinOp::XMin),
            ("xmax(a,b)", BinOp::XMax),
        ] {
            assert_eq!(parse(src).unwrap(), Expr::bin(op, v("a"), v("b")), "{src}");
        }
    }

    #[test]
    fn comments_and_identifiers() {
        let e = parse("# carry\nC_out2 & xmin # trailing\n").unwrap();
        assert_eq!(e, Expr::min(v("C_out2"), v("xmin")));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("a +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("a + b"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("a = b"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(a"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("a b"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("a+0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
    }
}
