//! Pairings `⟨F, φ⟩ = ∫ F(x) φ(x) dx` of log-homogeneous forms with smooth
//! bump functions, evaluated in polar coordinates.

mod quadrature;

pub use quadrature::{gauss_legendre, uniform_circle, Rule};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::logform::LogForm;
use crate::operators::{op_power, OpKind};
use crate::sampling::norm;
use crate::scalar::{factorial, real_pow, Scalar, ZERO};

/// Residual bound for [`verify_pairing_identity`] at default resolution.
pub const PAIRING_TOLERANCE: f64 = 1e-6;

/// `φ(x) = exp(−1/(1−u²))` with `u = |x − c| / w`, zero for `u ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub n: usize,
    pub center: Vec<f64>,
    pub width: f64,
}

impl TestFunction {
    pub fn new(center: Vec<f64>, width: f64) -> Result<TestFunction> {
        let phi = TestFunction {
            n: center.len(),
            center,
            width,
        };
        phi.validate()?;
        Ok(phi)
    }

    /// Parses `{"n":1,"center":[5.0],"width":1.0}`.
    pub fn from_json(text: &str) -> Result<TestFunction> {
        let phi: TestFunction = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("test function: {e}")))?;
        phi.validate()?;
        Ok(phi)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.center.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "test function center has {} coordinates, expected n = {}",
                self.center.len(),
                self.n
            )));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "test function width must be positive, got {}",
                self.width
            )));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "test function center is not finite".into(),
            ));
        }
        Ok(())
    }

    pub fn profile(u: f64) -> f64 {
        if u.abs() < 1.0 {
            (-1.0 / (1.0 - u * u)).exp()
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let d: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        Self::profile(d / self.width)
    }

    /// The bump `x ↦ φ(x / a)`.
    pub fn scaled(&self, a: f64) -> TestFunction {
        TestFunction {
            n: self.n,
            center: self.center.iter().map(|c| a * c).collect(),
            width: a * self.width,
        }
    }

    /// True when the origin is an interior point of the support.
    pub fn contains_origin(&self) -> bool {
        norm(&self.center) < self.width
    }
}

/// Node counts of the product rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes along the radius.
    #[serde(rename = "Kr")]
    pub radial: usize,
    /// Nodes on the circle (`n = 2`) or in azimuth (`n = 3`).
    #[serde(rename = "Kw")]
    pub angular: usize,
    /// Gauss–Legendre nodes in `cos θ` (`n = 3`).
    #[serde(rename = "Kt")]
    pub polar: usize,
    /// Align the angular rule with the bump axis and restrict it to the
    /// part of each sphere inside the support. Without it the rules live in
    /// a fixed frame and cover the whole sphere.
    #[serde(skip)]
    pub polar_factorization: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial: 64,
            angular: 64,
            polar: 32,
            polar_factorization: true,
        }
    }
}

impl QuadratureSpec {
    pub fn doubled(&self) -> QuadratureSpec {
        QuadratureSpec {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
            polar: 2 * self.polar,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, k) in [
            ("Kr", self.radial),
            ("Kw", self.angular),
            ("Kt", self.polar),
        ] {
            if k < 4 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be at least 4, got {k}"
                )));
            }
        }
        Ok(())
    }
}

/// `∫ F(x) φ(x) dx` for `n ∈ {1, 2, 3}`.
pub fn pair(f: &LogForm, phi: &TestFunction, q: &QuadratureSpec) -> Result<Scalar> {
    let n = f.dimension();
    if !(1..=3).contains(&n) {
        return Err(Error::DimensionUnsupported(n));
    }
    if phi.n != n {
        return Err(Error::PointDimension {
            expected: n,
            got: phi.n,
        });
    }
    q.validate()?;
    if f.is_zero() {
        return Ok(ZERO);
    }
    let lambda = f.raw_degree();
    if lambda.re <= -(n as f64) && phi.contains_origin() {
        return Err(Error::Integrability {
            re_degree: lambda.re,
            dimension: n,
        });
    }
    let exponent = lambda + (n as f64 - 1.0);
    let radial = gauss_legendre(q.radial);

    if n == 1 {
        let mut total = ZERO;
        for sign in [1.0, -1.0] {
            let omega = [sign];
            let c = sign * phi.center[0];
            let hi = c + phi.width;
            if hi <= 0.0 {
                continue;
            }
            let h: Vec<Scalar> = f.coeffs().iter().map(|h| h.eval(&omega)).collect();
            total += radial_integral(&radial, (c - phi.width).max(0.0), hi, exponent, |rho| {
                let v = phi.eval(&[sign * rho]);
                h.iter().map(|hj| hj * v).collect()
            });
        }
        return Ok(total);
    }

    let sphere = SphereRule::new(phi, q);
    let c = norm(&phi.center);
    let lo = (c - phi.width).max(0.0);
    let hi = c + phi.width;
    // directions and angular values over the whole sphere, reused for every
    // radius whose shell lies inside the support
    let mut full = Vec::new();
    sphere.for_each(-1.0, |omega, weight| {
        let h: Vec<Scalar> = f.coeffs().iter().map(|h| h.eval(omega)).collect();
        full.push((omega.to_vec(), weight, h));
    });
    Ok(radial_integral(&radial, lo, hi, exponent, |rho| {
        let mut moments = vec![ZERO; f.coeffs().len()];
        let mut accumulate = |omega: &[f64], weight: f64, h: &mut dyn Iterator<Item = Scalar>| {
            let x: Vec<f64> = omega.iter().map(|w| rho * w).collect();
            let v = phi.eval(&x);
            if v != 0.0 {
                for (m, hj) in moments.iter_mut().zip(h) {
                    *m += hj * (weight * v);
                }
            }
        };
        let cmin = sphere.cos_min(rho);
        if cmin <= -1.0 {
            for (omega, weight, h) in &full {
                accumulate(omega, *weight, &mut h.iter().copied());
            }
        } else {
            sphere.for_each(cmin, |omega, weight| {
                accumulate(omega, weight, &mut f.coeffs().iter().map(|h| h.eval(omega)));
            });
        }
        moments
    }))
}

/// Ratio between consecutive panels of the mesh graded toward the origin.
const GRADING: f64 = 0.125;
/// Number of graded panels; below `hi · GRADING^PANELS` the moments are frozen.
const PANELS: i32 = 12;

/// `∫_lo^hi ρ^s Σ_j (ln ρ)^j A_j(ρ) dρ`. An interval starting at the origin
/// is split into geometrically shrinking panels, so `ρ^{iβ}` and the logs
/// stay resolved; the last sliver is integrated in closed form.
fn radial_integral(
    rule: &Rule,
    lo: f64,
    hi: f64,
    s: Scalar,
    moments: impl Fn(f64) -> Vec<Scalar>,
) -> Scalar {
    let panel = |lo: f64, hi: f64| {
        let mapped = rule.mapped(lo, hi);
        let mut total = ZERO;
        for (&rho, w) in mapped.nodes.iter().zip(&mapped.weights) {
            let log_rho = rho.ln();
            let mut acc = ZERO;
            for m in moments(rho).iter().rev() {
                acc = acc * log_rho + m;
            }
            total += real_pow(rho, s) * acc * *w;
        }
        total
    };
    if lo > 0.0 {
        return panel(lo, hi);
    }
    let mut total = ZERO;
    let mut top = hi;
    for _ in 0..PANELS {
        let bottom = top * GRADING;
        total += panel(bottom, top);
        top = bottom;
    }
    // ∫_0^ε ρ^s ln^j ρ dρ = ε^u ln^j ε / u − (j/u) ∫_0^ε ρ^s ln^{j−1} ρ dρ, u = s + 1
    let u = s + 1.0;
    let head = real_pow(top, u);
    let log_top = top.ln();
    let mut integral = head / u;
    for (j, a) in moments(top).iter().enumerate() {
        if j > 0 {
            integral = (head * log_top.powi(j as i32) - integral * j as f64) / u;
        }
        total += a * integral;
    }
    total
}

/// Angular rule on `S^{n−1}` for `n ∈ {2, 3}`.
struct SphereRule {
    n: usize,
    /// Orthonormal frame whose first vector points at the bump center.
    frame: Vec<Vec<f64>>,
    center_norm: f64,
    width: f64,
    aligned: bool,
    circle: Rule,
    angular: Rule,
    polar: Rule,
}

impl SphereRule {
    fn new(phi: &TestFunction, q: &QuadratureSpec) -> SphereRule {
        let c = norm(&phi.center);
        let axis: Vec<f64> = if c > 0.0 {
            phi.center.iter().map(|x| x / c).collect()
        } else {
            let mut e = vec![0.0; phi.n];
            e[0] = 1.0;
            e
        };
        let frame = if q.polar_factorization {
            orthonormal_frame(&axis)
        } else {
            // the fixed frame, polar axis last
            let n = phi.n;
            (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[(i + n - 1) % n] = 1.0;
                    e
                })
                .collect()
        };
        SphereRule {
            n: phi.n,
            frame,
            center_norm: c,
            width: phi.width,
            aligned: q.polar_factorization,
            circle: uniform_circle(q.angular),
            angular: gauss_legendre(q.angular),
            polar: gauss_legendre(q.polar),
        }
    }

    /// Lower bound of `cos θ` (angle from the axis) over the part of the
    /// sphere of radius `rho` inside the support.
    fn cos_min(&self, rho: f64) -> f64 {
        if !self.aligned || self.center_norm == 0.0 {
            return -1.0;
        }
        let c = self.center_norm;
        ((rho * rho + c * c - self.width * self.width) / (2.0 * rho * c)).max(-1.0)
    }

    fn point(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (v, c) in self.frame.iter().zip(coords) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// Nodes of the cap `cos θ ≥ cmin`; `cmin ≤ −1` is the whole sphere.
    fn for_each(&self, cmin: f64, mut visit: impl FnMut(&[f64], f64)) {
        if cmin >= 1.0 {
            return;
        }
        match self.n {
            2 => {
                let rule = if cmin <= -1.0 {
                    self.circle.clone()
                } else {
                    let theta = cmin.acos();
                    self.angular.mapped(-theta, theta)
                };
                for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                    visit(&self.point(&[t.cos(), t.sin()]), *w);
                }
            }
            3 => {
                let polar = self.polar.mapped(cmin, 1.0);
                for (t, wt) in polar.nodes.iter().zip(&polar.weights) {
                    let s = (1.0 - t * t).max(0.0).sqrt();
                    for (p, wp) in self.circle.nodes.iter().zip(&self.circle.weights) {
                        visit(&self.point(&[*t, s * p.cos(), s * p.sin()]), wt * wp);
                    }
                }
            }
            _ => unreachable!("sphere rules exist for n = 2, 3"),
        }
    }
}

fn orthonormal_frame(axis: &[f64]) -> Vec<Vec<f64>> {
    match axis.len() {
        2 => vec![axis.to_vec(), vec![-axis[1], axis[0]]],
        3 => {
            let i = (0..3)
                .min_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs()))
                .unwrap_or(0);
            let mut e = [0.0; 3];
            e[i] = 1.0;
            let dot: f64 = e.iter().zip(axis).map(|(a, b)| a * b).sum();
            let v1: Vec<f64> = e.iter().zip(axis).map(|(a, b)| a - dot * b).collect();
            let len = norm(&v1);
            let v1: Vec<f64> = v1.iter().map(|x| x / len).collect();
            let v2 = vec![
                axis[1] * v1[2] - axis[2] * v1[1],
                axis[2] * v1[0] - axis[0] * v1[2],
                axis[0] * v1[1] - axis[1] * v1[0],
            ];
            vec![axis.to_vec(), v1, v2]
        }
        _ => vec![axis.to_vec()],
    }
}

/// Outcome of checking
/// `⟨F, φ(x/a)⟩ = a^{λ+n} ⟨F, φ⟩ + Σ_{r=1..k} a^{λ+n} log^r a ⟨(E−λ)^r F / r!, φ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    #[serde(with = "json::complex")]
    pub degree: Scalar,
    pub order: usize,
    pub a: f64,
    #[serde(with = "json::complex")]
    pub lhs: Scalar,
    #[serde(with = "json::complex")]
    pub rhs: Scalar,
    /// `|lhs − rhs| / (1 + |lhs|)`.
    pub residual: f64,
    pub quadrature: QuadratureSpec,
    pub verdict: bool,
}

pub fn verify_pairing_identity(
    f: &LogForm,
    phi: &TestFunction,
    a: f64,
    q: &QuadratureSpec,
) -> Result<PairingReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::NonPositiveScale(a));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let lambda = f.raw_degree();
    let k = f.order();
    let n = f.dimension() as f64;

    let lhs = pair(f, &phi.scaled(a), q)?;
    let factor = real_pow(a, lambda + n);
    let mut rhs = factor * pair(f, phi, q)?;
    for r in 1..=k {
        let member = op_power(OpKind::EulerMinusLambda { lambda: None }, r, f)?
            .scale(Scalar::new(1.0 / factorial(r), 0.0));
        rhs += factor * a.ln().powi(r as i32) * pair(&member, phi, q)?;
    }
    let residual = (lhs - rhs).norm() / (1.0 + lhs.norm());
    Ok(PairingReport {
        degree: lambda,
        order: k,
        a,
        lhs,
        rhs,
        residual,
        quadrature: *q,
        verdict: residual < PAIRING_TOLERANCE,
    })
}
