//! Expression language over `x1..xn`, `r` and `log(r)`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor (("*"|"/") factor)*
//! factor   := ("-")? base ("^" exponent)?
//! base     := NUMBER | "r" | "log" "(" "r" ")" | VAR | "(" expr ")"
//! VAR      := "x" DIGITS
//! exponent := NUMBER | "(" NUMBER ("+"|"-") NUMBER "i" ")"
//! ```
//!
//! Parenthesized exponents may carry a sign (`r^(-1)`). Division `u / v`
//! is read as `u * v^(-1)`; whether the reciprocal stays inside the
//! log-homogeneous class is decided later by [`crate::logform::canonicalize`].

mod diff;
mod lexer;
mod parser;
mod render;

pub use diff::{differentiate, simplify};
pub use parser::parse;
pub use render::{canonical_sort, render};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(Scalar),
    /// Coordinate `x_i`, 1-based.
    Variable(usize),
    /// `r = |x|`.
    Radius,
    /// `log r`.
    LogRadius,
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, Scalar),
    Negate(Box<Expr>),
}

impl Expr {
    pub fn constant(re: f64) -> Expr {
        Expr::Constant(Scalar::new(re, 0.0))
    }

    pub fn power(base: Expr, exponent: Scalar) -> Expr {
        Expr::Power(Box::new(base), exponent)
    }

    pub fn negate(inner: Expr) -> Expr {
        Expr::Negate(Box::new(inner))
    }

    /// Largest variable index mentioned, 0 when there is none.
    pub fn max_variable(&self) -> usize {
        match self {
            Expr::Variable(i) => *i,
            Expr::Constant(_) | Expr::Radius | Expr::LogRadius => 0,
            Expr::Sum(items) | Expr::Product(items) => {
                items.iter().map(Expr::max_variable).max().unwrap_or(0)
            }
            Expr::Power(base, _) => base.max_variable(),
            Expr::Negate(inner) => inner.max_variable(),
        }
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self, Expr::Constant(c) if *c == ZERO)
    }

    pub fn is_one_constant(&self) -> bool {
        matches!(self, Expr::Constant(c) if *c == ONE)
    }
}

/// Evaluates `e` at a point `x != 0`.
///
/// `r^λ` is computed as `exp(λ ln r)` with the real logarithm of `r > 0`,
/// integer powers of other bases by repeated multiplication, and any other
/// power with the principal branch.
pub fn eval_expr(e: &Expr, x: &[f64]) -> Result<Scalar> {
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Origin);
    }
    let ctx = EvalContext {
        x,
        r,
        log_r: r.ln(),
    };
    let v = ctx.eval(e)?;
    if scalar::is_finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

struct EvalContext<'a> {
    x: &'a [f64],
    r: f64,
    log_r: f64,
}

impl EvalContext<'_> {
    fn eval(&self, e: &Expr) -> Result<Scalar> {
        Ok(match e {
            Expr::Constant(c) => *c,
            Expr::Variable(i) => {
                let v = self.x.get(i.wrapping_sub(1)).ok_or(Error::Dimension {
                    index: *i,
                    dimension: self.x.len(),
                })?;
                Scalar::new(*v, 0.0)
            }
            Expr::Radius => Scalar::new(self.r, 0.0),
            Expr::LogRadius => Scalar::new(self.log_r, 0.0),
            Expr::Sum(items) => {
                let mut acc = ZERO;
                for item in items {
                    acc += self.eval(item)?;
                }
                acc
            }
            Expr::Product(items) => {
                let mut acc = ONE;
                for item in items {
                    acc *= self.eval(item)?;
                }
                acc
            }
            Expr::Negate(inner) => -self.eval(inner)?,
            Expr::Power(base, p) => {
                if matches!(**base, Expr::Radius) {
                    (p * self.log_r).exp()
                } else {
                    pow(self.eval(base)?, *p)
                }
            }
        })
    }
}

/// `v^p`, exact repeated multiplication for integer `p`, principal branch
/// otherwise.
pub(crate) fn pow(v: Scalar, p: Scalar) -> Scalar {
    if p.im == 0.0 && p.re.fract() == 0.0 && p.re.abs() <= i32::MAX as f64 {
        v.powi(p.re as i32)
    } else if v.im == 0.0 && v.re > 0.0 {
        (p * v.re.ln()).exp()
    } else {
        v.powc(p)
    }
}
