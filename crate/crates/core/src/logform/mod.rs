//! Canonical normal form `r^λ Σ_j h_j(ω) log^j r` and the rewriting that
//! maps parsed expressions into it.

mod angular;
mod canonical;
mod form;
mod multi;

pub use angular::{angular_is_zero, AngularPart, Atom, ZERO_THRESHOLD};
pub use canonical::canonicalize;
pub use form::{eval_form, forms_equal, LogForm, DEGREE_TOLERANCE};
pub use multi::MultiForm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::ComplexJson;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// Wire encoding of a [`LogForm`]: `coeffs[j]` lists the atoms of `h_j`.
///
/// ```text
/// {"n":2,"degree":{"re":-1.0,"im":0.0},
///  "coeffs":[[{"alpha":[0,0],"re":1.0,"im":0.0}],[],[{"alpha":[2,0],"re":1.0,"im":0.0}]]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogFormJson {
    pub n: usize,
    pub degree: ComplexJson,
    pub coeffs: Vec<Vec<AtomJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiFormJson {
    pub n: usize,
    pub components: Vec<LogFormJson>,
}

impl From<&LogForm> for LogFormJson {
    fn from(f: &LogForm) -> Self {
        LogFormJson {
            n: f.dimension(),
            degree: f.raw_degree().into(),
            coeffs: f
                .coeffs()
                .iter()
                .map(|h| {
                    h.terms()
                        .map(|(atom, c)| AtomJson {
                            alpha: atom.alpha().to_vec(),
                            re: c.re,
                            im: c.im,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<&LogFormJson> for LogForm {
    type Error = Error;

    fn try_from(j: &LogFormJson) -> Result<LogForm> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|atoms| {
                atoms
                    .iter()
                    .map(|a| {
                        if a.alpha.len() != j.n {
                            return Err(Error::InvalidArgument(format!(
                                "atom {:?} does not have {} exponents",
                                a.alpha, j.n
                            )));
                        }
                        Ok((Atom::new(a.alpha.clone()), crate::Scalar::new(a.re, a.im)))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(AngularPart::from_terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LogForm::new(j.n, j.degree.into(), coeffs))
    }
}

impl From<&MultiForm> for MultiFormJson {
    fn from(m: &MultiForm) -> Self {
        MultiFormJson {
            n: m.dimension(),
            components: m.components().iter().map(LogFormJson::from).collect(),
        }
    }
}

impl TryFrom<&MultiFormJson> for MultiForm {
    type Error = Error;

    fn try_from(j: &MultiFormJson) -> Result<MultiForm> {
        let forms = j
            .components
            .iter()
            .map(LogForm::try_from)
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiForm::from_forms(j.n, forms))
    }
}
