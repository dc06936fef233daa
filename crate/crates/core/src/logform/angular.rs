use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Scalar, ZERO};

/// Coefficients at or below this magnitude are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// The degree-0 function `x ↦ x^α / r^{|α|}`, i.e. the monomial `ω^α` of
/// the direction `ω = x/r`.
///
/// Atoms are ordered graded-lexicographically with `x1 > x2 > … > xn`;
/// the syzygy `Σ ω_i² = 1` is reduced by rewriting the leading `ω_1²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom(Vec<u32>);

impl Atom {
    pub fn new(alpha: Vec<u32>) -> Atom {
        Atom(alpha)
    }

    /// The constant atom `1` in dimension `n`.
    pub fn one(n: usize) -> Atom {
        Atom(vec![0; n])
    }

    /// `ω_i` (1-based `i`).
    pub fn coordinate(n: usize, i: usize) -> Atom {
        let mut alpha = vec![0; n];
        alpha[i - 1] = 1;
        Atom(alpha)
    }

    pub fn alpha(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn mul(&self, other: &Atom) -> Atom {
        Atom(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Atom {
        Atom(self.0.iter().map(|a| a * k).collect())
    }

    /// `ω^α` for a unit direction `ω`.
    pub fn eval(&self, omega: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(omega)
            .map(|(&a, &w)| w.powi(a as i32))
            .product()
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        write!(f, "/r^{}", self.total_degree())
    }
}

/// Finite linear combination of atoms, the angular coefficient `h_j` of a
/// log-homogeneous form.
///
/// Coefficients with magnitude below [`ZERO_THRESHOLD`] are pruned after
/// every operation. Atoms are stored as written; [`AngularPart::reduced`]
/// gives the unique representative modulo the syzygy.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngularPart {
    terms: BTreeMap<Atom, Scalar>,
}

impl AngularPart {
    pub fn zero() -> AngularPart {
        AngularPart::default()
    }

    pub fn constant(n: usize, c: Scalar) -> AngularPart {
        AngularPart::from_terms([(Atom::one(n), c)])
    }

    pub fn atom(atom: Atom, c: Scalar) -> AngularPart {
        AngularPart::from_terms([(atom, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Atom, Scalar)>>(terms: I) -> AngularPart {
        let mut out = AngularPart::zero();
        for (atom, c) in terms {
            out.add_term(atom, c);
        }
        out.prune();
        out
    }

    fn add_term(&mut self, atom: Atom, c: Scalar) {
        *self.terms.entry(atom).or_insert(ZERO) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > ZERO_THRESHOLD);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No stored terms. A part can be non-empty and still vanish on the
    /// sphere; use [`AngularPart::is_zero`] for that.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, atom: &Atom) -> Scalar {
        self.terms.get(atom).copied().unwrap_or(ZERO)
    }

    /// The single `(atom, coefficient)` pair, when there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Atom, Scalar)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(a, c)| (a, *c)),
            _ => None,
        }
    }

    pub fn add(&self, other: &AngularPart) -> AngularPart {
        let mut out = self.clone();
        for (atom, c) in &other.terms {
            out.add_term(atom.clone(), *c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &AngularPart) -> AngularPart {
        self.add(&other.scale(-Scalar::new(1.0, 0.0)))
    }

    pub fn scale(&self, c: Scalar) -> AngularPart {
        AngularPart::from_terms(self.terms.iter().map(|(a, v)| (a.clone(), v * c)))
    }

    pub fn mul(&self, other: &AngularPart) -> AngularPart {
        let mut out = AngularPart::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out.prune();
        out
    }

    /// Value at the unit direction `omega`.
    pub fn eval(&self, omega: &[f64]) -> Scalar {
        self.terms.iter().map(|(a, c)| c * a.eval(omega)).sum()
    }

    /// Normal form modulo `ω_1² = 1 − Σ_{i≥2} ω_i²`: the result has no atom
    /// with `α_1 ≥ 2`. Two parts agree on the sphere iff their reductions
    /// agree.
    pub fn reduced(&self) -> AngularPart {
        let mut work = self.terms.clone();
        let mut out: BTreeMap<Atom, Scalar> = BTreeMap::new();
        while let Some((atom, c)) = work.pop_last() {
            if atom.0.first().copied().unwrap_or(0) < 2 {
                *out.entry(atom).or_insert(ZERO) += c;
                continue;
            }
            let mut lower = atom.0.clone();
            lower[0] -= 2;
            for i in 1..lower.len() {
                let mut alpha = lower.clone();
                alpha[i] += 2;
                *work.entry(Atom(alpha)).or_insert(ZERO) -= c;
            }
            *work.entry(Atom(lower)).or_insert(ZERO) += c;
        }
        let mut out = AngularPart { terms: out };
        out.prune();
        out
    }

    /// True iff the part vanishes identically on the unit sphere.
    pub fn is_zero(&self) -> bool {
        self.is_empty() || self.reduced().is_empty()
    }

    /// Largest coefficient magnitude of the reduced form.
    pub fn norm(&self) -> f64 {
        self.reduced()
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Syzygy-aware zero test for an angular part.
pub fn angular_is_zero(h: &AngularPart) -> bool {
    h.is_zero()
}
