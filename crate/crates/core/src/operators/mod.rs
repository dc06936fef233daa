//! Dilation `U_a`, Euler operator `E = Σ x_j ∂_j`, the spectral difference
//! `Δ_a(μ) = U_a − a^μ I`, their powers, and the QAHD classifier.
//!
//! All operators act on coefficients of the canonical form, using
//! `U_a (r^λ log^j r) = a^λ r^λ (log r + log a)^j`, `E r = r`, `E log r = 1`
//! and `E h_j(ω) = 0`.

mod verify;

pub use verify::{
    definitional_residual, ode_g1, ode_remainder_gap, verify_qahd, Criteria, VerificationReport,
    VerifyOptions, DEFAULT_A_SAMPLES, VERDICT_TOLERANCE,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::logform::{AngularPart, LogForm, MultiForm};
use crate::scalar::{binomial, real_pow, shift_weight, Scalar};

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(a))
    }
}

/// `(U_a F)(x) = F(a x)`: same degree, coefficients
/// `g_i = a^λ Σ_{j≥i} C(j,i) (log a)^{j−i} h_j`.
pub fn dilate(f: &LogForm, a: f64) -> Result<LogForm> {
    check_scale(a)?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    let scale = real_pow(a, f.raw_degree());
    let log_a = a.ln();
    let k = f.order();
    let coeffs = (0..=k)
        .map(|i| {
            let mut g = AngularPart::zero();
            for j in i..=k {
                let w = binomial(j, i) * log_a.powi((j - i) as i32);
                g = g.add(&f.coeffs()[j].scale(scale * w));
            }
            g
        })
        .collect();
    Ok(LogForm::new(f.dimension(), f.raw_degree(), coeffs))
}

/// `E F = λ F + Σ_i (i+1) h_{i+1} log^i r`.
pub fn euler(f: &LogForm) -> LogForm {
    if f.is_zero() {
        return f.clone();
    }
    let lambda = f.raw_degree();
    let k = f.order();
    let coeffs = (0..=k)
        .map(|i| {
            let own = f.coeffs()[i].scale(lambda);
            if i < k {
                own.add(&f.coeffs()[i + 1].scale(Scalar::new((i + 1) as f64, 0.0)))
            } else {
                own
            }
        })
        .collect();
    LogForm::new(f.dimension(), lambda, coeffs)
}

/// `(E − μ) F = (λ − μ) F + shift_down(F)`.
pub fn euler_minus(f: &LogForm, mu: Scalar) -> LogForm {
    if f.is_zero() {
        return f.clone();
    }
    let lambda = f.raw_degree();
    let diagonal = lambda - mu;
    let k = f.order();
    let coeffs = (0..=k)
        .map(|i| {
            let own = if diagonal == Scalar::new(0.0, 0.0) {
                AngularPart::zero()
            } else {
                f.coeffs()[i].scale(diagonal)
            };
            if i < k {
                own.add(&f.coeffs()[i + 1].scale(Scalar::new((i + 1) as f64, 0.0)))
            } else {
                own
            }
        })
        .collect();
    LogForm::new(f.dimension(), lambda, coeffs)
}

/// `Δ_a(μ) F = U_a F − a^μ F`.
///
/// Computed as `g_i = a^λ Σ_{j>i} C(j,i) (log a)^{j−i} h_j + (a^λ − a^μ) h_i`
/// so that for `μ = λ` the diagonal cancels exactly and the order strictly
/// drops.
pub fn delta(f: &LogForm, a: f64, mu: Scalar) -> Result<LogForm> {
    check_scale(a)?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    let lambda = f.raw_degree();
    let a_lambda = real_pow(a, lambda);
    let diagonal = a_lambda - real_pow(a, mu);
    let log_a = a.ln();
    let k = f.order();
    let coeffs = (0..=k)
        .map(|i| {
            let mut g = if diagonal == Scalar::new(0.0, 0.0) {
                AngularPart::zero()
            } else {
                f.coeffs()[i].scale(diagonal)
            };
            for j in (i + 1)..=k {
                let w = binomial(j, i) * log_a.powi((j - i) as i32);
                g = g.add(&f.coeffs()[j].scale(a_lambda * w));
            }
            g
        })
        .collect();
    Ok(LogForm::new(f.dimension(), lambda, coeffs))
}

/// Operator whose powers [`op_power`] composes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    /// `E − μ`; `None` takes `μ = λ(F)`.
    EulerMinusLambda { lambda: Option<Scalar> },
    /// `U_a − a^μ I`; `None` takes `μ = λ(F)`.
    Delta { a: f64, mu: Option<Scalar> },
}

/// `m`-fold composition of the operator `kind` applied to `f`.
///
/// For `E − λ(F)` the result is the exact nilpotent shift
/// `g_i = ((i+m)!/i!) h_{i+m}`.
pub fn op_power(kind: OpKind, m: usize, f: &LogForm) -> Result<LogForm> {
    if f.is_zero() || m == 0 {
        return Ok(f.clone());
    }
    let own = f.raw_degree();
    match kind {
        OpKind::EulerMinusLambda { lambda } => {
            let mu = lambda.unwrap_or(own);
            if mu == own {
                return Ok(nilpotent_shift(f, m));
            }
            Ok((0..m).fold(f.clone(), |g, _| euler_minus(&g, mu)))
        }
        OpKind::Delta { a, mu } => {
            let mu = mu.unwrap_or(own);
            (0..m).try_fold(f.clone(), |g, _| delta(&g, a, mu))
        }
    }
}

fn nilpotent_shift(f: &LogForm, m: usize) -> LogForm {
    let k = f.order();
    if m > k {
        return LogForm::zero(f.dimension());
    }
    let coeffs = (0..=(k - m))
        .map(|i| f.coeffs()[i + m].scale(Scalar::new(shift_weight(i, m), 0.0)))
        .collect();
    LogForm::new(f.dimension(), f.raw_degree(), coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    #[serde(with = "json::complex")]
    pub degree: Scalar,
    pub order: usize,
}

/// Degree and order of every component of a nonzero multi-form.
pub fn classify(m: &MultiForm) -> Result<Vec<Classification>> {
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(m.components()
        .iter()
        .map(|f| Classification {
            degree: f.raw_degree(),
            order: f.order(),
        })
        .collect())
}

/// The chain `[f_k, f_{k−1}, …, f_0]` with `f_{k−s} = (E − λ)^s F`.
///
/// Consecutive members satisfy `E f_j = λ f_j + f_{j−1}` and `f_0` is
/// homogeneous of degree `λ`.
pub fn chain(f: &LogForm) -> Result<Vec<LogForm>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok((0..=f.order()).map(|s| nilpotent_shift(f, s)).collect())
}
