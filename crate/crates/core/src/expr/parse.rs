//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr    := term { ("(+)" | "(-)") term } ;
//! term    := factor { ("(*)" | "(/)") factor } ;
//! factor  := literal | variable | "e" | func | "(" expr ")" ;
//! func    := ("exp"|"ln"|"cose"|"sine") "(" expr ")" | "npow" "(" expr "," int ")" ;
//! literal := positive decimal | "e^" signed decimal ;
//! ```
//!
//! Both binary levels are left-associative.

use super::Expr;
use crate::error::{NNError, Result};
use crate::real::NNReal;

/// Variables accepted in Lagrangian expressions: `L(x, y, ỹ)`.
pub const LAGRANGIAN_VARS: &[&str] = &["x", "y", "yd"];

/// Parses a single-variable expression in `x`.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with_vars(text, &["x"])
}

/// Parses an expression whose free variables are drawn from `vars`.
pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        vars,
    };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(syntax(t.offset, format!("unexpected {}", t.kind.describe())));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Dot,
    Slash,
    LParen,
    RParen,
    Comma,
    Number(f64),
    /// `e^<signed decimal>`
    ExpLiteral(f64),
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "`(+)`".into(),
            Tok::Minus => "`(-)`".into(),
            Tok::Dot => "`(*)`".into(),
            Tok::Slash => "`(/)`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Number(v) => format!("number {v}"),
            Tok::ExpLiteral(v) => format!("literal e^{v}"),
            Tok::Ident(s) => format!("`{s}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> NNError {
    NNError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => {
                let op = match (bytes.get(i + 1), bytes.get(i + 2)) {
                    (Some(b'+'), Some(b')')) => Some(Tok::Plus),
                    (Some(b'-'), Some(b')')) => Some(Tok::Minus),
                    (Some(b'*'), Some(b')')) => Some(Tok::Dot),
                    (Some(b'/'), Some(b')')) => Some(Tok::Slash),
                    _ => None,
                };
                match op {
                    Some(kind) => {
                        out.push(Token { kind, offset: start });
                        i += 3;
                    }
                    None => {
                        out.push(Token {
                            kind: Tok::LParen,
                            offset: start,
                        });
                        i += 1;
                    }
                }
            }
            b')' => {
                out.push(Token {
                    kind: Tok::RParen,
                    offset: start,
                });
                i += 1;
            }
            b',' => {
                out.push(Token {
                    kind: Tok::Comma,
                    offset: start,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let (v, len) = scan_decimal(&text[i..], false)
                    .ok_or_else(|| syntax(start, "malformed number"))?;
                out.push(Token {
                    kind: Tok::Number(v),
                    offset: start,
                });
                i += len;
            }
            b'-' | b'+' => {
                // Signed integers only appear as npow exponents.
                let (v, len) = scan_decimal(&text[i..], true)
                    .ok_or_else(|| syntax(start, format!("unexpected `{}`", c as char)))?;
                out.push(Token {
                    kind: Tok::Number(v),
                    offset: start,
                });
                i += len;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                if word == "e" && bytes.get(j) == Some(&b'^') {
                    let (v, len) = scan_decimal(&text[j + 1..], true)
                        .ok_or_else(|| syntax(j + 1, "expected a signed decimal after `e^`"))?;
                    out.push(Token {
                        kind: Tok::ExpLiteral(v),
                        offset: start,
                    });
                    i = j + 1 + len;
                } else {
                    out.push(Token {
                        kind: Tok::Ident(word.to_string()),
                        offset: start,
                    });
                    i = j;
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

/// Scans `[sign] digits [. digits] [(e|E) [sign] digits]` from the start of
/// `s`; returns the value and consumed length.
fn scan_decimal(s: &str, allow_sign: bool) -> Option<(f64, usize)> {
    let b = s.as_bytes();
    let mut i = 0;
    if allow_sign && matches!(b.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let digits_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i == digits_start || &s[digits_start..i] == "." {
        return None;
    }
    // Scientific exponent only when digits actually follow.
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    s[..i].parse::<f64>().ok().map(|v| (v, i))
}

struct Parser<'v> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    vars: &'v [&'v str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn expect(&mut self, kind: Tok) -> Result<()> {
        match self.next() {
            Some(t) if t.kind == kind => Ok(()),
            Some(t) => Err(syntax(
                t.offset,
                format!("expected {}, found {}", kind.describe(), t.kind.describe()),
            )),
            None => Err(syntax(
                self.end,
                format!("expected {}, found end of input", kind.describe()),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            let op = t.kind.clone();
            match op {
                Tok::Plus | Tok::Minus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = if op == Tok::Plus {
                        lhs.oplus(rhs)
                    } else {
                        lhs.ominus(rhs)
                    };
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(t) = self.peek() {
            let op = t.kind.clone();
            match op {
                Tok::Dot | Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = if op == Tok::Dot {
                        lhs.odot(rhs)
                    } else {
                        lhs.oslash(rhs)
                    };
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let Some(tok) = self.next() else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        match tok.kind {
            Tok::Number(v) => {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(syntax(tok.offset, "literals must be positive decimals"));
                }
                Ok(Expr::Const(NNReal::from_value(v)?))
            }
            Tok::ExpLiteral(l) => Ok(Expr::Const(NNReal::from_log(l).map_err(|_| {
                syntax(tok.offset, "exponent literal out of range")
            })?)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, tok.offset),
            other => Err(syntax(tok.offset, format!("unexpected {}", other.describe()))),
        }
    }

    fn ident(&mut self, name: String, offset: usize) -> Result<Expr> {
        match name.as_str() {
            "e" => Ok(Expr::Const(NNReal::ONE)),
            "exp" | "ln" | "cose" | "sine" => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(match name.as_str() {
                    "exp" => arg.exp_of(),
                    "ln" => arg.ln_of(),
                    "cose" => arg.cos_e(),
                    _ => arg.sin_e(),
                })
            }
            "npow" => {
                self.expect(Tok::LParen)?;
                let base = self.expr()?;
                self.expect(Tok::Comma)?;
                let at = self.here();
                let n = match self.next() {
                    Some(Token {
                        kind: Tok::Number(v),
                        ..
                    }) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => v as i32,
                    _ => return Err(syntax(at, "expected an integer exponent")),
                };
                self.expect(Tok::RParen)?;
                Ok(base.npow(n))
            }
            v if self.vars.contains(&v) => Ok(Expr::Var(name)),
            _ => Err(NNError::UnknownIdentifier { name, offset }),
        }
    }
}
