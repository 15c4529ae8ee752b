//! Recursive-descent reader for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := rational-literal | identifier | '(' expr ')' | '-' base
//! ```
//!
//! Note that `-A^2` reads as `(-A)^2`: unary minus is part of `base`.

use num_bigint::BigInt;

use super::{ExprError, Rational, RationalExpr, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok), ExprError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let tok = match b {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = &self.src[start..self.pos];
                return Ok((start, Tok::Int(digits.parse().expect("ascii digits"))));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap();
                return Err(ExprError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {ch:?}"),
                });
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok),
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: Vars) -> Result<Self, ExprError> {
        let mut lexer = Lexer { src, pos: 0 };
        let peeked = lexer.next()?;
        Ok(Parser {
            lexer,
            peeked,
            vars,
        })
    }

    fn bump(&mut self) -> Result<(usize, Tok), ExprError> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.peeked.0,
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peeked.1 {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peeked.1 {
                Tok::Star => {
                    self.bump()?;
                    acc = acc * self.factor()?;
                }
                Tok::Slash => {
                    let (pos, _) = self.bump()?;
                    let rhs = self.factor()?;
                    acc = acc.checked_div(&rhs).map_err(|_| ExprError::Syntax {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalExpr, ExprError> {
        let base = self.base()?;
        if self.peeked.1 != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        match self.bump()? {
            (pos, Tok::Int(n)) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| ExprError::ExponentOverflow { pos })?;
                Ok(base.pow(e))
            }
            (pos, _) => Err(ExprError::Syntax {
                pos,
                msg: "expected non-negative integer exponent after '^'".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<RationalExpr, ExprError> {
        match self.bump()? {
            (_, Tok::Int(n)) => Ok(RationalExpr::constant(
                self.vars.clone(),
                Rational::from_integer(n),
            )),
            (pos, Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(idx) => Ok(RationalExpr::var(self.vars.clone(), idx)),
                None => Err(ExprError::UnknownIdentifier { name, pos }),
            },
            (_, Tok::LParen) => {
                let inner = self.expr()?;
                if self.peeked.1 != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump()?;
                Ok(inner)
            }
            (_, Tok::Minus) => Ok(-self.base()?),
            (pos, Tok::End) => Err(ExprError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            (pos, tok) => Err(ExprError::Syntax {
                pos,
                msg: format!("unexpected token {}", describe(&tok)),
            }),
        }
    }
}

fn describe(tok: &Tok) -> &'static str {
    match tok {
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

/// Parses `source` as a rational function of the coordinates in `vars`.
/// Error positions are byte offsets into `source`.
pub fn parse_expr(source: &str, vars: &Vars) -> Result<RationalExpr, ExprError> {
    let mut p = Parser::new(source, vars.clone())?;
    let e = p.expr()?;
    if p.peeked.1 != Tok::End {
        let what = describe(&p.peeked.1);
        return p.syntax(format!("unexpected {what} after expression"));
    }
    Ok(e)
}
