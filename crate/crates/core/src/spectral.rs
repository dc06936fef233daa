//! Finite truncations of the shift matrix `T` and the dilation matrix
//! `R_a = a^λ (1 − log a · T)^{-1}` acting on chain coordinates.

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::json::ComplexJson;
use crate::scalar::{factorial, real_pow, Scalar, ONE, ZERO};

/// Truncation size used for a requested order `k`: one row past nilpotency.
pub fn default_size(k: usize) -> usize {
    k + 2
}

/// Superdiagonal nilpotent matrix, `T[i][i+1] = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftMatrix {
    size: usize,
}

impl ShiftMatrix {
    pub fn new(size: usize) -> ShiftMatrix {
        ShiftMatrix { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self) -> DMatrix<Scalar> {
        DMatrix::from_fn(
            self.size,
            self.size,
            |i, j| if j == i + 1 { ONE } else { ZERO },
        )
    }

    /// `(T v)_k = v_{k+1}`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..v.len())
            .map(|k| v.get(k + 1).copied().unwrap_or(ZERO))
            .collect()
    }
}

/// Which closed form fills the Toeplitz bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// `a^λ (log a)^{j−i}`: the resolvent `a^λ (1 − log a · T)^{-1}`.
    Geometric,
    /// `a^λ (log a)^{j−i} / (j−i)!`: the exponential `a^λ exp(log a · T)`.
    Exponential,
}

/// Upper-triangular Toeplitz matrix of a dilation by `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationMatrix {
    a: f64,
    lambda: Scalar,
    representation: Representation,
    entries: DMatrix<Scalar>,
}

impl DilationMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> Scalar {
        self.lambda
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.entries[(i, j)]
    }
}

impl Serialize for DilationMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<ComplexJson>> = self
            .entries
            .row_iter()
            .map(|row| row.iter().map(|&z| z.into()).collect())
            .collect();
        let mut st = s.serialize_struct("DilationMatrix", 4)?;
        st.serialize_field("size", &self.size())?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("lambda", &ComplexJson::from(self.lambda))?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(a))
    }
}

pub fn build_dilation(
    representation: Representation,
    a: f64,
    lambda: Scalar,
    size: usize,
) -> Result<DilationMatrix> {
    check_scale(a)?;
    if size == 0 {
        return Err(Error::InvalidArgument(
            "matrix size must be at least 1".into(),
        ));
    }
    let a_lambda = real_pow(a, lambda);
    let log_a = a.ln();
    let entries = DMatrix::from_fn(size, size, |i, j| {
        if j < i {
            return ZERO;
        }
        let s = j - i;
        let band = match representation {
            Representation::Geometric => log_a.powi(s as i32),
            Representation::Exponential => log_a.powi(s as i32) / factorial(s),
        };
        a_lambda * band
    });
    Ok(DilationMatrix {
        a,
        lambda,
        representation,
        entries,
    })
}

/// `R_a = a^λ Σ_{s<N} (log a)^s T^s`.
pub fn build_r(a: f64, lambda: Scalar, size: usize) -> Result<DilationMatrix> {
    build_dilation(Representation::Geometric, a, lambda, size)
}

/// `a^λ exp(log a · T)`, the truncation that composes like the dilations.
pub fn build_r_exponential(a: f64, lambda: Scalar, size: usize) -> Result<DilationMatrix> {
    build_dilation(Representation::Exponential, a, lambda, size)
}

pub fn max_norm(m: &DMatrix<Scalar>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖R_a R_b − R_{ab}‖_max` for the resolvent matrices.
pub fn check_group_law(a: f64, b: f64, lambda: Scalar, size: usize) -> Result<f64> {
    check_group_law_with(Representation::Geometric, a, b, lambda, size)
}

pub fn check_group_law_with(
    representation: Representation,
    a: f64,
    b: f64,
    lambda: Scalar,
    size: usize,
) -> Result<f64> {
    let ra = build_dilation(representation, a, lambda, size)?;
    let rb = build_dilation(representation, b, lambda, size)?;
    let rab = build_dilation(representation, a * b, lambda, size)?;
    Ok(max_norm(&(ra.matrix() * rb.matrix() - rab.matrix())))
}

/// `(R_a − a^λ I)^m` for the resolvent matrix.
pub fn delta_power(a: f64, lambda: Scalar, size: usize, m: usize) -> Result<DMatrix<Scalar>> {
    let r = build_r(a, lambda, size)?;
    let d = r.matrix() - DMatrix::identity(size, size) * real_pow(a, lambda);
    let mut out = DMatrix::identity(size, size);
    for _ in 0..m {
        out = &out * &d;
    }
    Ok(out)
}

/// Magnitude of component `k` of `(R_a − a^λ I)^{k+1} e_k`.
pub fn nilpotent_action(size: usize, a: f64, lambda: Scalar, k: usize) -> Result<f64> {
    if k >= size {
        return Err(Error::Index { index: k, size });
    }
    let p = delta_power(a, lambda, size, k + 1)?;
    let mut e = nalgebra::DVector::from_element(size, ZERO);
    e[k] = ONE;
    Ok((p * e)[k].norm())
}

/// Action of a dilation on the coefficients `h_j` of `Σ_j h_j log^j r`:
/// `g_i = a^λ Σ_{j≥i} C(j,i) (log a)^{j−i} h_j`, which is the exponential
/// matrix conjugated by `diag(j!)`.
pub fn coefficient_action(a: f64, lambda: Scalar, size: usize) -> Result<DMatrix<Scalar>> {
    let r = build_r_exponential(a, lambda, size)?;
    let d = DMatrix::from_fn(size, size, |i, j| {
        if i == j {
            Scalar::new(factorial(i), 0.0)
        } else {
            ZERO
        }
    });
    let d_inv = DMatrix::from_fn(size, size, |i, j| {
        if i == j {
            Scalar::new(1.0 / factorial(i), 0.0)
        } else {
            ZERO
        }
    });
    Ok(d_inv * r.matrix() * d)
}
