use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{Scalar, ONE, ZERO};

use super::angular::{AngularPart, Atom};
use super::form::LogForm;
use super::multi::MultiForm;

/// Largest integer power expanded by repeated multiplication.
const MAX_EXPANDED_POWER: u32 = 64;

/// Rewrites `e` into the direct sum of log-homogeneous forms.
///
/// Each monomial `c · x^α · r^μ · log^j r` becomes
/// `c · atom(α) · r^{μ+|α|} · log^j r`; products distribute over sums and
/// terms are grouped by degree, then by log power.
pub fn canonicalize(e: &Expr, n: usize) -> Result<MultiForm> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    Rewriter { n }.rewrite(e)
}

struct Rewriter {
    n: usize,
}

impl Rewriter {
    fn single(&self, degree: Scalar, coeffs: Vec<AngularPart>) -> MultiForm {
        MultiForm::from_form(LogForm::new(self.n, degree, coeffs))
    }

    fn rewrite(&self, e: &Expr) -> Result<MultiForm> {
        let n = self.n;
        match e {
            Expr::Constant(c) => Ok(self.single(ZERO, vec![AngularPart::constant(n, *c)])),
            Expr::Variable(i) => {
                if *i == 0 || *i > n {
                    return Err(Error::Dimension {
                        index: *i,
                        dimension: n,
                    });
                }
                Ok(self.single(ONE, vec![AngularPart::atom(Atom::coordinate(n, *i), ONE)]))
            }
            Expr::Radius => Ok(self.single(ONE, vec![AngularPart::constant(n, ONE)])),
            Expr::LogRadius => Ok(self.single(
                ZERO,
                vec![AngularPart::zero(), AngularPart::constant(n, ONE)],
            )),
            Expr::Sum(items) => items
                .iter()
                .try_fold(MultiForm::zero(n), |acc, t| Ok(acc.add(&self.rewrite(t)?))),
            Expr::Product(items) => {
                let one = self.single(ZERO, vec![AngularPart::constant(n, ONE)]);
                items
                    .iter()
                    .try_fold(one, |acc, t| Ok(acc.mul(&self.rewrite(t)?)))
            }
            Expr::Negate(inner) => Ok(self.rewrite(inner)?.scale(-ONE)),
            Expr::Power(base, p) => self.power(&self.rewrite(base)?, *p),
        }
    }

    fn power(&self, base: &MultiForm, p: Scalar) -> Result<MultiForm> {
        let integer = (p.im == 0.0 && p.re.fract() == 0.0).then_some(p.re);

        if let Some((degree, atom, c)) = monomial(base) {
            if atom.is_one() {
                if c == ZERO && p.re <= 0.0 {
                    return Err(Error::NotInClass("non-positive power of zero".into()));
                }
                let value = crate::expr::pow(c, p);
                return Ok(self.single(degree * p, vec![AngularPart::constant(self.n, value)]));
            }
            return match integer {
                Some(k) if k >= 0.0 => {
                    let k = k as u32;
                    Ok(self.single(
                        degree * p,
                        vec![AngularPart::atom(atom.pow(k), c.powi(k as i32))],
                    ))
                }
                _ => Err(Error::NotInClass(format!(
                    "power {p} of the angular factor {atom} leaves the atom class"
                ))),
            };
        }

        match integer {
            Some(k) if (0.0..=MAX_EXPANDED_POWER as f64).contains(&k) => {
                let mut acc = self.single(ZERO, vec![AngularPart::constant(self.n, ONE)]);
                for _ in 0..k as u32 {
                    acc = acc.mul(base);
                }
                Ok(acc)
            }
            Some(k) if k >= 0.0 => Err(Error::NotInClass(format!(
                "integer power {k} exceeds the expansion limit {MAX_EXPANDED_POWER}"
            ))),
            _ => Err(Error::NotInClass(format!(
                "power {p} of a non-monomial sub-expression"
            ))),
        }
    }
}

/// `c · atom · r^λ` with no log factor, looking through the syzygy for a
/// single surviving atom.
fn monomial(m: &MultiForm) -> Option<(Scalar, Atom, Scalar)> {
    if m.is_zero() {
        return Some((ZERO, Atom::one(m.dimension()), ZERO));
    }
    let [form] = m.components() else {
        return None;
    };
    if form.order() != 0 {
        return None;
    }
    let h = form.coeff(0);
    let degree = form.raw_degree();
    if let Some((atom, c)) = h.as_monomial() {
        return Some((degree, atom.clone(), c));
    }
    let reduced = h.reduced();
    reduced
        .as_monomial()
        .map(|(atom, c)| (degree, atom.clone(), c))
}
