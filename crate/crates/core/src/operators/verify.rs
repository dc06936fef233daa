use std::f64::consts::{E, PI};

use serde::Serialize;

use super::{op_power, OpKind};
use crate::error::{Error, Result};
use crate::json;
use crate::logform::{LogForm, DEGREE_TOLERANCE};
use crate::sampling::{self, DEFAULT_SEED};
use crate::scalar::{factorial, real_pow, Scalar, ZERO};

/// A criterion passes when its residual is below this.
pub const VERDICT_TOLERANCE: f64 = 1e-9;

/// Scales below and above 1, two of them transcendental.
pub const DEFAULT_A_SAMPLES: [f64; 5] = [0.5, 2.0 / 3.0, E, PI, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub a_samples: Vec<f64>,
    /// Random probe points per scale for the pointwise criterion.
    pub points: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            a_samples: DEFAULT_A_SAMPLES.to_vec(),
            points: 20,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criteria {
    pub definitional: f64,
    pub dilation_nilpotency: f64,
    pub euler_nilpotency: f64,
    pub structural: bool,
}

/// Outcome of checking one form against all four characterizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(with = "json::complex")]
    pub degree: Scalar,
    pub order: usize,
    pub criteria: Criteria,
    pub a_samples: Vec<f64>,
    pub verdict: bool,
}

/// Checks whether `f` is a QAHD of degree `lambda` and order `k`:
///
/// * definitional: `U_a F = a^λ F + Σ_{r=1..k} a^λ log^r a · (E−λ)^r F / r!`
///   pointwise;
/// * dilation nilpotency: `(U_a − a^λ I)^{k+1} F = 0`;
/// * Euler nilpotency: `(E − λ)^{k+1} F = 0`;
/// * structural: `λ(F) = λ` and `order(F) = k`.
///
/// Pointwise residuals are `|lhs − rhs| / (1 + scale)` where `scale` is the
/// largest magnitude among the terms being compared; operator residuals
/// divide the result norm by the norm the operator could produce.
pub fn verify_qahd(
    f: &LogForm,
    lambda: Scalar,
    k: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let samples = &options.a_samples;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("a_samples is empty".into()));
    }
    if let Some(&bad) = samples.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::NonPositiveScale(bad));
    }
    if samples.iter().all(|&a| a == 1.0) {
        return Err(Error::InvalidArgument(
            "a_samples must contain a scale other than 1".into(),
        ));
    }
    if options.points == 0 {
        return Err(Error::InvalidArgument("points must be positive".into()));
    }

    let mut rng = sampling::rng(options.seed);
    let points = sampling::probe_points(f.dimension(), options.points, &mut rng);

    let mut definitional: f64 = 0.0;
    let mut dilation: f64 = 0.0;
    for &a in samples {
        definitional = definitional.max(definitional_residual(f, lambda, k, a, &points)?);

        let g = op_power(
            OpKind::Delta {
                a,
                mu: Some(lambda),
            },
            k + 1,
            f,
        )?;
        let per_step = real_pow(a, lambda).norm() * (1.0 + a.ln().abs()).powi(f.order() as i32);
        let scale = f.norm() * per_step.powi(k as i32 + 1);
        dilation = dilation.max(g.norm() / scale.max(1.0));
    }

    let g = op_power(
        OpKind::EulerMinusLambda {
            lambda: Some(lambda),
        },
        k + 1,
        f,
    )?;
    let euler = g.norm() / f.norm().max(1.0);

    let structural =
        !f.is_zero() && (f.raw_degree() - lambda).norm() <= DEGREE_TOLERANCE && f.order() == k;

    let verdict = structural
        && definitional < VERDICT_TOLERANCE
        && dilation < VERDICT_TOLERANCE
        && euler < VERDICT_TOLERANCE;

    Ok(VerificationReport {
        degree: lambda,
        order: k,
        criteria: Criteria {
            definitional,
            dilation_nilpotency: dilation,
            euler_nilpotency: euler,
            structural,
        },
        a_samples: samples.clone(),
        verdict,
    })
}

/// Largest pointwise residual of the defining dilation identity at scale
/// `a`, with chain members `(E−λ)^r F / r!`.
pub fn definitional_residual(
    f: &LogForm,
    lambda: Scalar,
    k: usize,
    a: f64,
    points: &[Vec<f64>],
) -> Result<f64> {
    let members = (1..=k)
        .map(|r| {
            op_power(
                OpKind::EulerMinusLambda {
                    lambda: Some(lambda),
                },
                r,
                f,
            )
            .map(|g| g.scale(Scalar::new(1.0 / factorial(r), 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let a_lambda = real_pow(a, lambda);
    let log_a = a.ln();

    let mut worst: f64 = 0.0;
    for x in points {
        let ax: Vec<f64> = x.iter().map(|c| a * c).collect();
        let lhs = f.eval(&ax)?;
        let mut terms = vec![a_lambda * f.eval(x)?];
        for (r, member) in members.iter().enumerate() {
            terms.push(a_lambda * log_a.powi(r as i32 + 1) * member.eval(x)?);
        }
        let rhs: Scalar = terms.iter().sum();
        let scale = terms.iter().map(|t| t.norm()).fold(lhs.norm(), f64::max);
        worst = worst.max((lhs - rhs).norm() / (1.0 + scale));
    }
    Ok(worst)
}

/// `g_1(a) = F(a x) − a^λ F(x) − a^λ log a · f_0(x)` for an order-1 form,
/// with `f_0 = (E − λ) F`. Identically zero when `F` is a QAHD of order 1.
pub fn ode_g1(f: &LogForm, a: f64, x: &[f64]) -> Result<Scalar> {
    if f.order() != 1 {
        return Err(Error::InvalidArgument(format!(
            "g_1 needs an order-1 form, got order {}",
            f.order()
        )));
    }
    Ok(ode_remainder_gap(f, a, x)?.g)
}

/// Both sides of the remainder identity for an order-`k` form (`k ≥ 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderGap {
    /// `g_k(a) = F(a x) − a^λ F(x) − a^λ log a · f_{k−1}(x)`.
    pub g: Scalar,
    /// `Σ_{r=1..k−1} a^λ log^{r+1} a · f^{(k−1)}_{k−1−r}(x) / (r+1)`, where
    /// `f^{(k−1)}_{k−1−r} = (E − λ)^r f_{k−1} / r!` are the members entering
    /// `U_a f_{k−1}`.
    pub remainder: Scalar,
    /// Largest magnitude among the terms, for relative comparisons.
    pub scale: f64,
}

pub fn ode_remainder_gap(f: &LogForm, a: f64, x: &[f64]) -> Result<RemainderGap> {
    let k = f.order();
    if f.is_zero() || k == 0 {
        return Err(Error::InvalidArgument(
            "the remainder identity needs a form of order >= 1".into(),
        ));
    }
    let lambda = f.raw_degree();
    let shift = |m: usize, g: &LogForm| op_power(OpKind::EulerMinusLambda { lambda: None }, m, g);
    let f_prev = shift(1, f)?;
    let a_lambda = real_pow(a, lambda);
    let log_a = a.ln();

    let ax: Vec<f64> = x.iter().map(|c| a * c).collect();
    let terms = [
        f.eval(&ax)?,
        -a_lambda * f.eval(x)?,
        -a_lambda * log_a * f_prev.eval(x)?,
    ];
    let g: Scalar = terms.iter().sum();
    let mut scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);

    let mut remainder = ZERO;
    for r in 1..k {
        let member = shift(r, &f_prev)?.scale(Scalar::new(1.0 / factorial(r), 0.0));
        let term = a_lambda * log_a.powi(r as i32 + 1) * member.eval(x)? / (r as f64 + 1.0);
        scale = scale.max(term.norm());
        remainder += term;
    }
    Ok(RemainderGap {
        g,
        remainder,
        scale,
    })
}
