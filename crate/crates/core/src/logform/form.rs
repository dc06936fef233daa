use crate::error::{Error, Result};
use crate::scalar::{self, Scalar, ONE, ZERO};

use super::angular::{AngularPart, Atom};

/// Degrees closer than this are the same degree.
pub const DEGREE_TOLERANCE: f64 = 1e-10;

/// The canonical representative `r^λ · Σ_{j=0..k} h_j(ω) · log^j r`.
///
/// Construction trims trailing coefficients that vanish on the sphere, so
/// `h_k` is nonzero and [`LogForm::order`] is the top log power. The zero
/// form is stored as `λ = 0, [0]`; asking for its degree is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct LogForm {
    n: usize,
    degree: Scalar,
    coeffs: Vec<AngularPart>,
}

impl LogForm {
    pub fn new(n: usize, degree: Scalar, coeffs: Vec<AngularPart>) -> LogForm {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(AngularPart::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return LogForm::zero(n);
        }
        LogForm { n, degree, coeffs }
    }

    pub fn zero(n: usize) -> LogForm {
        LogForm {
            n,
            degree: ZERO,
            coeffs: vec![AngularPart::zero()],
        }
    }

    /// `c · r^λ`.
    pub fn monomial(n: usize, degree: Scalar, c: Scalar) -> LogForm {
        LogForm::new(n, degree, vec![AngularPart::constant(n, c)])
    }

    /// `r^λ · Σ_j c_j log^j r` with constant angular parts.
    pub fn radial(n: usize, degree: Scalar, coeffs: &[Scalar]) -> LogForm {
        LogForm::new(
            n,
            degree,
            coeffs
                .iter()
                .map(|&c| AngularPart::constant(n, c))
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_empty()
    }

    pub fn degree(&self) -> Result<Scalar> {
        if self.is_zero() {
            Err(Error::UndefinedDegree)
        } else {
            Ok(self.degree)
        }
    }

    /// The stored degree, `0` for the zero form.
    pub fn raw_degree(&self) -> Scalar {
        self.degree
    }

    /// Top log power `k`; `0` for the zero form.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[AngularPart] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> AngularPart {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Same coefficients, degree replaced: multiplication by `r^{λ' − λ}`.
    pub fn with_degree(&self, degree: Scalar) -> LogForm {
        if self.is_zero() {
            return self.clone();
        }
        LogForm {
            n: self.n,
            degree,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&AngularPart) -> AngularPart) -> LogForm {
        LogForm::new(self.n, self.degree, self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: Scalar) -> LogForm {
        self.map_coeffs(|h| h.scale(c))
    }

    /// Sum of two forms of the same degree (within [`DEGREE_TOLERANCE`]);
    /// the zero form is the identity for either side.
    pub fn add(&self, other: &LogForm) -> Result<LogForm> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if (self.degree - other.degree).norm() > DEGREE_TOLERANCE {
            return Err(Error::MixedDegrees(2));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        Ok(LogForm::new(
            self.n,
            self.degree,
            (0..len)
                .map(|j| self.coeff(j).add(&other.coeff(j)))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &LogForm) -> Result<LogForm> {
        self.add(&other.scale(-ONE))
    }

    /// Product of forms: degrees add and log powers convolve.
    pub fn mul(&self, other: &LogForm) -> LogForm {
        if self.is_zero() || other.is_zero() {
            return LogForm::zero(self.n);
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![AngularPart::zero(); len];
        for (i, h) in self.coeffs.iter().enumerate() {
            for (j, g) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&h.mul(g));
            }
        }
        LogForm::new(self.n, self.degree + other.degree, coeffs)
    }

    /// Largest reduced coefficient magnitude over all log powers.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(AngularPart::norm)
            .fold(0.0, f64::max)
    }

    /// Distinct atoms mentioned by any coefficient.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut atoms: Vec<Atom> = self
            .coeffs
            .iter()
            .flat_map(|h| h.terms().map(|(a, _)| a.clone()))
            .collect();
        atoms.sort();
        atoms.dedup();
        atoms
    }

    /// Pointwise value, see [`eval_form`].
    pub fn eval(&self, x: &[f64]) -> Result<Scalar> {
        eval_form(self, x)
    }
}

/// `exp(λ ln r) · Σ_j h_j(x/r) (ln r)^j` at `x != 0`.
pub fn eval_form(f: &LogForm, x: &[f64]) -> Result<Scalar> {
    if x.len() != f.n {
        return Err(Error::PointDimension {
            expected: f.n,
            got: x.len(),
        });
    }
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Origin);
    }
    if f.is_zero() {
        return Ok(ZERO);
    }
    let omega: Vec<f64> = x.iter().map(|c| c / r).collect();
    let log_r = r.ln();
    // Horner in log r
    let mut acc = ZERO;
    for h in f.coeffs.iter().rev() {
        acc = acc * log_r + h.eval(&omega);
    }
    let v = scalar::real_pow(r, f.degree) * acc;
    if scalar::is_finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// Degrees within tolerance and every coefficient difference vanishing on
/// the sphere.
pub fn forms_equal(f: &LogForm, g: &LogForm) -> bool {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return true,
        (true, false) | (false, true) => return false,
        _ => {}
    }
    if (f.degree - g.degree).norm() > DEGREE_TOLERANCE {
        return false;
    }
    let len = f.coeffs.len().max(g.coeffs.len());
    (0..len).all(|j| f.coeff(j).sub(&g.coeff(j)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn re(v: f64) -> Scalar {
        Scalar::new(v, 0.0)
    }

    #[test]
    fn documented_evaluations() {
        let f = LogForm::radial(2, re(2.0), &[ONE]);
        assert!((eval_form(&f, &[3.0, 4.0]).unwrap() - re(25.0)).norm() < 1e-12);

        let log_r = LogForm::radial(2, ZERO, &[ZERO, ONE]);
        assert!((eval_form(&log_r, &[E, 0.0]).unwrap() - ONE).norm() < 1e-15);

        let f = LogForm::radial(3, re(-1.0), &[ONE, re(2.0)]);
        let v = eval_form(&f, &[E * E, 0.0, 0.0]).unwrap();
        let expected = 5.0 * (-2.0f64).exp();
        assert!((v - re(expected)).norm() < 1e-15);
        assert!((v.re - 0.6767).abs() < 1e-4);
    }

    #[test]
    fn eval_errors() {
        let f = LogForm::radial(2, ONE, &[ONE]);
        assert_eq!(eval_form(&f, &[0.0, 0.0]), Err(Error::Origin));
        assert!(matches!(
            eval_form(&f, &[1.0]),
            Err(Error::PointDimension { .. })
        ));
    }

    #[test]
    fn zero_form_has_no_degree() {
        let z = LogForm::zero(2);
        assert!(z.is_zero());
        assert_eq!(z.degree(), Err(Error::UndefinedDegree));
        assert_eq!(z.order(), 0);
        // trailing coefficients vanishing on the sphere are trimmed away
        let pythagoras = AngularPart::from_terms([
            (Atom::new(vec![2, 0]), ONE),
            (Atom::new(vec![0, 2]), ONE),
            (Atom::one(2), -ONE),
        ]);
        let f = LogForm::new(2, re(3.0), vec![pythagoras.clone(), pythagoras]);
        assert!(f.is_zero());
    }

    #[test]
    fn documented_equalities() {
        let f = LogForm::radial(2, re(2.0), &[ONE]);
        assert!(forms_equal(&f, &f.clone()));

        let lhs = LogForm::new(
            2,
            ZERO,
            vec![AngularPart::from_terms([
                (Atom::new(vec![2, 0]), ONE),
                (Atom::new(vec![0, 2]), ONE),
            ])],
        );
        let rhs = LogForm::radial(2, ZERO, &[ONE]);
        assert!(forms_equal(&lhs, &rhs));

        let g = LogForm::radial(2, re(3.0), &[ONE]);
        assert!(!forms_equal(&f, &g));
    }

    #[test]
    fn products_convolve_log_powers() {
        let a = LogForm::radial(1, re(1.0), &[ONE, ONE]); // r (1 + log r)
        let b = LogForm::radial(1, re(-2.0), &[ZERO, re(2.0)]); // 2 r^-2 log r
        let p = a.mul(&b);
        assert_eq!(p.order(), 2);
        let x = [1.7];
        let lhs = p.eval(&x).unwrap();
        let rhs = a.eval(&x).unwrap() * b.eval(&x).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn adding_mismatched_degrees_fails() {
        let a = LogForm::radial(1, re(1.0), &[ONE]);
        let b = LogForm::radial(1, re(2.0), &[ONE]);
        assert!(a.add(&b).is_err());
        assert_eq!(a.add(&LogForm::zero(1)).unwrap(), a);
    }
}
