//! Recovery of degree and order from samples along a dilation ray.
//!
//! Along `t ↦ f(e^t x0)` a form of degree λ and order k is `e^{λt}` times a
//! polynomial of degree k in `t`. Equispaced samples in `t` therefore obey
//! a linear recurrence whose characteristic polynomial is
//! `(z − e^{λΔ})^{k+1}`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::sampling;
use crate::scalar::{binomial, Scalar, ZERO};

/// A recurrence fits when its residual is below this times `max |u|`.
pub const FIT_TOLERANCE: f64 = 1e-9;

/// Largest relative annihilation residual accepted for a single root.
pub const ROOT_TOLERANCE: f64 = 1e-8;

/// `|Im λ| Δ` at or above this fraction of π is reported as aliasing.
pub const ALIAS_FRACTION: f64 = 0.9;

pub const DEFAULT_DELTA: f64 = 0.1;

/// Values `u_m = f(e^{mΔ} x0)` for `m = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub x0: Vec<f64>,
    pub delta: f64,
    pub values: Vec<Scalar>,
}

impl SampleSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn scale(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn sample_ray(
    f: impl Fn(&[f64]) -> Result<Scalar>,
    x0: &[f64],
    delta: f64,
    m: usize,
) -> Result<SampleSeries> {
    if sampling::norm(x0) == 0.0 {
        return Err(Error::Origin);
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {delta}"
        )));
    }
    if m < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: m });
    }
    let mut values = Vec::with_capacity(m);
    for i in 0..m {
        let s = (i as f64 * delta).exp();
        let x: Vec<f64> = x0.iter().map(|c| s * c).collect();
        let v = f(&x)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation(format!("sample {i} is not finite")));
        }
        values.push(v);
    }
    Ok(SampleSeries {
        x0: x0.to_vec(),
        delta,
        values,
    })
}

/// Largest `(k+1)`-st finite difference over all windows, relative to
/// `1 + max |u|`. With a degree estimate the samples are first divided by
/// `e^{λ̂ mΔ}`.
pub fn annihilation_check(s: &SampleSeries, k: usize, lambda: Option<Scalar>) -> Result<f64> {
    let m = s.len();
    if m < k + 2 {
        return Err(Error::InsufficientSamples {
            needed: k + 2,
            got: m,
        });
    }
    let v: Vec<Scalar> = match lambda {
        Some(l) => s
            .values
            .iter()
            .enumerate()
            .map(|(i, u)| u * (-l * (i as f64 * s.delta)).exp())
            .collect(),
        None => s.values.clone(),
    };
    let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let weights: Vec<f64> = (0..=k + 1)
        .map(|j| {
            let sign = if (k + 1 - j).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * binomial(k + 1, j)
        })
        .collect();
    let worst = v
        .windows(k + 2)
        .map(|w| {
            w.iter()
                .zip(&weights)
                .map(|(x, c)| x * c)
                .sum::<Scalar>()
                .norm()
        })
        .fold(0.0, f64::max);
    Ok(worst / (1.0 + scale))
}

/// Result of fitting a single repeated characteristic root.
#[derive(Debug, Clone, PartialEq)]
pub struct RayFit {
    pub lambda: Scalar,
    pub order: usize,
    /// `b_j` with `u(t) e^{−λt} = Σ_j b_j t^j`.
    pub coefficients: Vec<Scalar>,
    /// Recurrence residual relative to `max |u|`.
    pub fit_residual: f64,
    /// Residual of `(S − z̄)^{k+1} u = 0` at the refined root, relative to
    /// the size of its terms.
    pub annihilation_residual: f64,
}

/// Least-squares recurrence fit of increasing order, then a single-root
/// model for the winning order.
pub fn prony_recover(s: &SampleSeries, k_max: usize) -> Result<RayFit> {
    let needed = 2 * (k_max + 1) + 1;
    if s.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: s.len(),
        });
    }
    let scale = s.scale();
    if scale == 0.0 {
        return Err(Error::ZeroInput);
    }
    let u = &s.values;

    // A general recurrence of order p can mimic a single root of higher
    // multiplicity when the top envelope coefficient is small, so an order
    // whose single-root model fails defers to the next one.
    let mut chosen = None;
    let mut split = None;
    for p in 1..=k_max + 1 {
        let (coeffs, residual) = fit_recurrence(u, p)?;
        if residual >= FIT_TOLERANCE * scale {
            continue;
        }
        let (z, annihilation_residual) = refine_root(u, p, -coeffs[p - 1] / p as f64);
        if annihilation_residual > ROOT_TOLERANCE || z == ZERO {
            split.get_or_insert(annihilation_residual);
            continue;
        }
        chosen = Some((p, z, residual / scale, annihilation_residual));
        break;
    }
    let (p, z, fit_residual, annihilation_residual) = match (chosen, split) {
        (Some(c), _) => c,
        (None, Some(residual)) => return Err(Error::RootSplit { residual }),
        (None, None) => {
            return Err(Error::NoFit {
                max_order: k_max + 1,
            })
        }
    };
    let lambda = z.ln() / s.delta;
    let phase = lambda.im.abs() * s.delta;
    if phase >= ALIAS_FRACTION * std::f64::consts::PI {
        return Err(Error::AliasRisk { phase });
    }
    let coefficients = envelope(s, lambda, p - 1)?;
    Ok(RayFit {
        lambda,
        order: p - 1,
        coefficients,
        fit_residual,
        annihilation_residual,
    })
}

/// Solves `u_{t+p} = −Σ_{i<p} c_i u_{t+i}` in the least-squares sense.
/// Returns `c` and the largest absolute equation residual.
fn fit_recurrence(u: &[Scalar], p: usize) -> Result<(Vec<Scalar>, f64)> {
    let rows = u.len() - p;
    let a = DMatrix::from_fn(rows, p, |t, i| u[t + i]);
    let b = DVector::from_fn(rows, |t, _| -u[t + p]);
    let c = least_squares(a.clone(), &b)?;
    let residual = (a * &c - b).iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok((c.iter().copied().collect(), residual))
}

fn least_squares(a: DMatrix<Scalar>, b: &DVector<Scalar>) -> Result<DVector<Scalar>> {
    let qr = a.qr();
    let rhs = qr.q().adjoint() * b;
    qr.r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::Evaluation("rank-deficient least-squares system".into()))
}

/// Gauss–Newton on `r_t(z) = Σ_m C(p,m) (−z)^{p−m} u_{t+m}`, which has a
/// simple root at the true `e^{λΔ}` when the samples carry one root of
/// multiplicity `p`. Returns the root and the relative residual there.
fn refine_root(u: &[Scalar], p: usize, start: Scalar) -> (Scalar, f64) {
    let eval = |z: Scalar| -> (Vec<Scalar>, Vec<Scalar>, f64) {
        let mut r = Vec::with_capacity(u.len() - p);
        let mut d = Vec::with_capacity(u.len() - p);
        let mut worst: f64 = 0.0;
        for t in 0..u.len() - p {
            let (mut val, mut der, mut size) = (ZERO, ZERO, 0.0);
            for m in 0..=p {
                let e = (p - m) as i32;
                let w = binomial(p, m) * if e % 2 == 0 { 1.0 } else { -1.0 };
                let term = z.powi(e) * u[t + m] * w;
                val += term;
                size += term.norm();
                if e > 0 {
                    der += z.powi(e - 1) * u[t + m] * (w * e as f64);
                }
            }
            worst = worst.max(val.norm() / size.max(f64::MIN_POSITIVE));
            r.push(val);
            d.push(der);
        }
        (r, d, worst)
    };

    let mut z = start;
    let (mut r, mut d, mut rel) = eval(z);
    for _ in 0..50 {
        let num: Scalar = d.iter().zip(&r).map(|(j, v)| j.conj() * v).sum();
        let den: f64 = d.iter().map(|j| j.norm_sqr()).sum();
        if den == 0.0 {
            break;
        }
        let step = num / den;
        let candidate = z - step;
        let (r2, d2, rel2) = eval(candidate);
        let better = r2.iter().map(|x| x.norm_sqr()).sum::<f64>()
            <= r.iter().map(|x| x.norm_sqr()).sum::<f64>();
        if !better {
            break;
        }
        z = candidate;
        (r, d, rel) = (r2, d2, rel2);
        if step.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    (z, rel)
}

/// Least-squares polynomial in `t = mΔ` through `u_m e^{−λ t}`.
fn envelope(s: &SampleSeries, lambda: Scalar, k: usize) -> Result<Vec<Scalar>> {
    let m = s.len();
    let a = DMatrix::from_fn(m, k + 1, |i, j| {
        Scalar::new((i as f64 * s.delta).powi(j as i32), 0.0)
    });
    let b = DVector::from_fn(m, |i, _| {
        s.values[i] * (-lambda * (i as f64 * s.delta)).exp()
    });
    Ok(least_squares(a, &b)?.iter().copied().collect())
}

/// Wire form of one ray fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifyReport {
    pub x0: Vec<f64>,
    pub delta: f64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(with = "json::complex")]
    pub lambda: Scalar,
    pub k: usize,
    pub fit_residual: f64,
    #[serde(serialize_with = "json::complex_vec")]
    pub coefficients: Vec<Scalar>,
}

impl IdentifyReport {
    pub fn new(s: &SampleSeries, fit: &RayFit) -> IdentifyReport {
        IdentifyReport {
            x0: s.x0.clone(),
            delta: s.delta,
            m: s.len(),
            lambda: fit.lambda,
            k: fit.order,
            fit_residual: fit.fit_residual,
            coefficients: fit.coefficients.clone(),
        }
    }
}

/// Probes along several random rays merged into one verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiProbeReport {
    #[serde(with = "json::complex")]
    pub lambda: Scalar,
    pub k: usize,
    pub probes: Vec<IdentifyReport>,
}

/// Runs `3n` probes from seeded random base points, keeps the largest
/// order and the degree shared by most probes. Probes that fail are
/// dropped; if every probe fails the first error is returned.
pub fn multi_probe(
    f: impl Fn(&[f64]) -> Result<Scalar>,
    n: usize,
    delta: f64,
    m: usize,
    k_max: usize,
    seed: u64,
) -> Result<MultiProbeReport> {
    let mut rng = sampling::rng(seed);
    let mut probes = Vec::new();
    let mut first_error = None;
    for _ in 0..3 * n {
        let radius = rng.random_range(0.5..2.0);
        let x0: Vec<f64> = sampling::unit_direction(n, &mut rng)
            .into_iter()
            .map(|c| c * radius)
            .collect();
        let fit = sample_ray(&f, &x0, delta, m).and_then(|s| {
            let fit = prony_recover(&s, k_max)?;
            Ok(IdentifyReport::new(&s, &fit))
        });
        match fit {
            Ok(r) => probes.push(r),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if probes.is_empty() {
        return Err(first_error.unwrap_or(Error::InvalidArgument("no probes".into())));
    }

    let k = probes.iter().map(|p| p.k).max().unwrap_or(0);
    let mut best = (0, probes[0].lambda);
    for p in &probes {
        let votes = probes
            .iter()
            .filter(|q| (q.lambda - p.lambda).norm() <= 1e-6 * (1.0 + p.lambda.norm()))
            .count();
        if votes > best.0 {
            best = (votes, p.lambda);
        }
    }
    Ok(MultiProbeReport {
        lambda: best.1,
        k,
        probes,
    })
}

/// `Σ_{m=0..N} (−1)^{N−m} C(N,m) m^N`, which equals `N!`.
pub fn alternating_power_sum(n: u32) -> i128 {
    let mut c: i128 = 1;
    let mut total: i128 = 0;
    for m in 0..=n {
        if m > 0 {
            c = c * (n - m + 1) as i128 / m as i128;
        }
        let sign = if (n - m).is_multiple_of(2) { 1 } else { -1 };
        total += sign * c * (m as i128).pow(n);
    }
    total
}
