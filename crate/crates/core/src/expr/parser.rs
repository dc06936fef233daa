use super::lexer::{tokenize, Tok, Token};
use super::Expr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parses `text` into an expression over `n` coordinates.
///
/// Precedence from tightest: `^`, unary `-`, `*` and `/`, `+` and `-`;
/// binary operators are left-associative and same-precedence chains are
/// collected into one `Sum` or `Product`.
pub fn parse(text: &str, n: usize) -> Result<Expr> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    let toks = tokenize(text)?;
    let mut p = Parser { toks, idx: 0, n };
    let e = p.expr()?;
    match p.peek().tok {
        Tok::End => Ok(e),
        _ => Err(p.unexpected(&["\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "end of input"])),
    }
}

struct Parser {
    toks: Vec<Token>,
    idx: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Token {
        self.toks[self.idx]
    }

    fn peek_at(&self, offset: usize) -> Tok {
        self.toks
            .get(self.idx + offset)
            .map(|t| t.tok)
            .unwrap_or(Tok::End)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.idx];
        if t.tok != Tok::End {
            self.idx += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            position: self.peek().pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[tok.describe()]))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    items.push(Expr::negate(self.term()?));
                }
                _ => break,
            }
        }
        Ok(collapse(items, Expr::Sum))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut items = vec![self.factor()?];
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    items.push(self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    items.push(reciprocal(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(collapse(items, Expr::Product))
    }

    fn factor(&mut self) -> Result<Expr> {
        let negated = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut e = self.base()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exponent = self.exponent()?;
            e = Expr::power(e, exponent);
        }
        Ok(if negated { Expr::negate(e) } else { e })
    }

    fn base(&mut self) -> Result<Expr> {
        let t = self.peek();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::constant(v))
            }
            Tok::R => {
                self.bump();
                Ok(Expr::Radius)
            }
            Tok::Log => {
                self.bump();
                self.expect(Tok::LParen)?;
                if self.peek().tok != Tok::R {
                    return Err(self.unexpected(&["\"r\""]));
                }
                self.bump();
                self.expect(Tok::RParen)?;
                Ok(Expr::LogRadius)
            }
            Tok::Var(index) => {
                if index == 0 || index > self.n {
                    return Err(Error::Dimension {
                        index,
                        dimension: self.n,
                    });
                }
                self.bump();
                Ok(Expr::Variable(index))
            }
            Tok::LParen => {
                if let Some((value, len)) = self.complex_literal() {
                    self.idx += len;
                    return Ok(Expr::Constant(value));
                }
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.unexpected(&["\"+\"", "\"-\"", "\"*\"", "\"/\"", "\")\""]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(&["NUMBER", "VAR", "\"r\"", "\"log\"", "\"(\""])),
        }
    }

    /// Matches `( [-] NUMBER (+|-) NUMBER i )` at the cursor without
    /// consuming it; returns the value and the token count.
    fn complex_literal(&self) -> Option<(Scalar, usize)> {
        let mut k = 1;
        let sign = match self.peek_at(k) {
            Tok::Minus => {
                k += 1;
                -1.0
            }
            _ => 1.0,
        };
        let Tok::Num(re) = self.peek_at(k) else {
            return None;
        };
        let im_sign = match self.peek_at(k + 1) {
            Tok::Plus => 1.0,
            Tok::Minus => -1.0,
            _ => return None,
        };
        let Tok::Num(im) = self.peek_at(k + 2) else {
            return None;
        };
        if self.peek_at(k + 3) != Tok::Imag || self.peek_at(k + 4) != Tok::RParen {
            return None;
        }
        Some((Scalar::new(sign * re, im_sign * im), k + 5))
    }

    fn exponent(&mut self) -> Result<Scalar> {
        let t = self.peek();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Scalar::new(v, 0.0))
            }
            Tok::LParen => {
                if let Some((value, len)) = self.complex_literal() {
                    self.idx += len;
                    return Ok(value);
                }
                // ( [+|-] NUMBER )
                let mut k = 1;
                let sign = match self.peek_at(k) {
                    Tok::Minus => {
                        k += 1;
                        -1.0
                    }
                    Tok::Plus => {
                        k += 1;
                        1.0
                    }
                    _ => 1.0,
                };
                match (self.peek_at(k), self.peek_at(k + 1)) {
                    (Tok::Num(v), Tok::RParen) => {
                        self.idx += k + 2;
                        Ok(Scalar::new(sign * v, 0.0))
                    }
                    _ => Err(Error::NonLiteralExponent { position: t.pos }),
                }
            }
            Tok::Var(_) | Tok::R | Tok::Log => Err(Error::NonLiteralExponent { position: t.pos }),
            _ => Err(self.unexpected(&["NUMBER", "\"(\""])),
        }
    }
}

fn collapse(mut items: Vec<Expr>, wrap: fn(Vec<Expr>) -> Expr) -> Expr {
    if items.len() == 1 {
        items.pop().expect("one item")
    } else {
        wrap(items)
    }
}

fn reciprocal(e: Expr) -> Expr {
    match e {
        Expr::Power(base, p) => Expr::Power(base, -p),
        other => Expr::power(other, Scalar::new(-1.0, 0.0)),
    }
}
