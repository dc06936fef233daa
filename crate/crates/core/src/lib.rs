//! Symbolic-numeric engine for quasi-associated homogeneous distributions
//! (QAHDs) on `R^n \ {0}`.
//!
//! A QAHD of degree `λ` and order `k` is realized here by its canonical
//! log-homogeneous representative
//!
//! ```text
//! f(x) = r^λ · Σ_{j=0..k} h_j(x/r) · log^j r
//! ```
//!
//! where each `h_j` is a finite combination of degree-zero atoms
//! `x^α / r^{|α|}`. The crate parses expressions into that form
//! ([`expr`], [`logform`]), applies the dilation and Euler operators to it
//! ([`operators`]), mirrors the dilation action by finite upper-triangular
//! matrices ([`spectral`]), pairs forms with bump test functions by
//! quadrature ([`pairing`]) and recovers `(λ, k)` from samples along a
//! dilation ray ([`identify`]). Every characterization of the class can be
//! checked against the others through [`operators::verify_qahd`].
//!
//! ```
//! use qahd::{expr, logform, operators};
//!
//! let e = expr::parse("x1^2*r^(-3)*log(r)^2 + r^(-1)", 2).unwrap();
//! let m = logform::canonicalize(&e, 2).unwrap();
//! let classes = operators::classify(&m).unwrap();
//! assert_eq!(classes.len(), 1);
//! assert_eq!(classes[0].order, 2);
//! assert!((classes[0].degree.re + 1.0).abs() < 1e-15);
//! ```

pub mod error;
pub mod expr;
pub mod identify;
pub mod json;
pub mod logform;
pub mod operators;
pub mod pairing;
pub mod sampling;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use expr::Expr;
pub use logform::{AngularPart, Atom, LogForm, MultiForm};
pub use scalar::Scalar;
