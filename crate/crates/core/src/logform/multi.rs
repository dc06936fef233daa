use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ZERO};

use super::form::{LogForm, DEGREE_TOLERANCE};

/// Direct sum of log-homogeneous forms with pairwise distinct degrees.
///
/// Components are kept sorted by `(Re λ, Im λ)` and none of them is the
/// zero form; the empty sum is the zero expression.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiForm {
    n: usize,
    components: Vec<LogForm>,
}

fn degree_order(a: &Scalar, b: &Scalar) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl MultiForm {
    pub fn zero(n: usize) -> MultiForm {
        MultiForm {
            n,
            components: Vec::new(),
        }
    }

    pub fn from_form(form: LogForm) -> MultiForm {
        let mut m = MultiForm::zero(form.dimension());
        m.push(form);
        m
    }

    pub fn from_forms<I: IntoIterator<Item = LogForm>>(n: usize, forms: I) -> MultiForm {
        let mut m = MultiForm::zero(n);
        for f in forms {
            m.push(f);
        }
        m
    }

    fn push(&mut self, form: LogForm) {
        if form.is_zero() {
            return;
        }
        let degree = form.raw_degree();
        if let Some(pos) = self
            .components
            .iter()
            .position(|c| (c.raw_degree() - degree).norm() <= DEGREE_TOLERANCE)
        {
            let merged = self.components[pos]
                .add(&form)
                .expect("degrees agree within tolerance");
            if merged.is_zero() {
                self.components.remove(pos);
            } else {
                self.components[pos] = merged;
            }
            return;
        }
        let pos = self
            .components
            .partition_point(|c| degree_order(&c.raw_degree(), &degree) == Ordering::Less);
        self.components.insert(pos, form);
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[LogForm] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The single component; the zero form when empty.
    pub fn single(&self) -> Result<LogForm> {
        match self.components.len() {
            0 => Ok(LogForm::zero(self.n)),
            1 => Ok(self.components[0].clone()),
            k => Err(Error::MixedDegrees(k)),
        }
    }

    /// Componentwise sum `⊕`.
    pub fn add(&self, other: &MultiForm) -> MultiForm {
        let mut out = self.clone();
        for f in &other.components {
            out.push(f.clone());
        }
        out
    }

    pub fn scale(&self, c: Scalar) -> MultiForm {
        MultiForm::from_forms(self.n, self.components.iter().map(|f| f.scale(c)))
    }

    pub fn mul(&self, other: &MultiForm) -> MultiForm {
        let mut out = MultiForm::zero(self.n);
        for f in &self.components {
            for g in &other.components {
                out.push(f.mul(g));
            }
        }
        out
    }

    /// Applies `op` to every component and re-collects the results.
    pub fn try_map(&self, op: impl Fn(&LogForm) -> Result<LogForm>) -> Result<MultiForm> {
        let forms = self.components.iter().map(op).collect::<Result<Vec<_>>>()?;
        Ok(MultiForm::from_forms(self.n, forms))
    }

    pub fn eval(&self, x: &[f64]) -> Result<Scalar> {
        if self.components.is_empty() {
            return LogForm::zero(self.n).eval(x);
        }
        let mut acc = ZERO;
        for f in &self.components {
            acc += f.eval(x)?;
        }
        Ok(acc)
    }
}
