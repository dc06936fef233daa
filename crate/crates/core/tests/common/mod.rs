#![allow(dead_code)]

use qahd::logform::{AngularPart, Atom, LogForm};
use qahd::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    qahd::sampling::rng(seed)
}

fn random_atom<R: Rng>(n: usize, rng: &mut R) -> Atom {
    let total = rng.random_range(0..=4u32);
    let mut alpha = vec![0u32; n];
    for _ in 0..total {
        alpha[rng.random_range(0..n)] += 1;
    }
    Atom::new(alpha)
}

fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_angular<R: Rng>(n: usize, rng: &mut R) -> AngularPart {
    let terms = rng.random_range(1..=4);
    AngularPart::from_terms((0..terms).map(|_| (random_atom(n, rng), random_scalar(rng))))
}

/// Canonical form of dimension `n`, order exactly `k`, with
/// `Re λ ∈ [−3, 3]`, `Im λ ∈ [−2, 2]` and atoms of total degree ≤ 4.
pub fn random_form_with<R: Rng>(n: usize, k: usize, rng: &mut R) -> LogForm {
    let lambda = Scalar::new(rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0));
    loop {
        let mut coeffs: Vec<AngularPart> = (0..k).map(|_| random_angular(n, rng)).collect();
        let top = random_angular(n, rng);
        if top.is_zero() {
            continue;
        }
        coeffs.push(top);
        let f = LogForm::new(n, lambda, coeffs);
        if f.order() == k {
            return f;
        }
    }
}

pub fn random_form<R: Rng>(rng: &mut R) -> LogForm {
    let n = rng.random_range(1..=3);
    let k = rng.random_range(0..=4);
    random_form_with(n, k, rng)
}

/// The fixed suite of 200 forms shared by the acceptance criteria.
pub fn suite() -> Vec<LogForm> {
    let mut rng = rng(2024);
    (0..200).map(|_| random_form(&mut rng)).collect()
}

/// Random string following the input grammar.
pub fn random_expression<R: Rng>(rng: &mut R, depth: u32) -> String {
    let terms = rng.random_range(1..=3);
    let mut out = String::new();
    for t in 0..terms {
        if t > 0 {
            out.push_str(if rng.random_bool(0.5) { " + " } else { " - " });
        }
        let factors = rng.random_range(1..=3);
        for j in 0..factors {
            if j > 0 {
                out.push_str(if rng.random_bool(0.7) { "*" } else { "/" });
            }
            if rng.random_bool(0.2) {
                out.push('-');
            }
            let choice = if depth == 0 {
                rng.random_range(0..4)
            } else {
                rng.random_range(0..5)
            };
            match choice {
                0 => out.push_str(&format!("{}", rng.random_range(0..100) as f64 / 4.0)),
                1 => out.push('r'),
                2 => out.push_str("log(r)"),
                3 => out.push_str(&format!("x{}", rng.random_range(1..=3))),
                _ => out.push_str(&format!("({})", random_expression(rng, depth - 1))),
            }
            if rng.random_bool(0.4) {
                out.push('^');
                match rng.random_range(0..3) {
                    0 => out.push_str(&format!("{}", rng.random_range(0..9))),
                    1 => out.push_str(&format!("(-{})", rng.random_range(1..20) as f64 / 2.0)),
                    _ => out.push_str(&format!(
                        "({}{}{}i)",
                        rng.random_range(-4..5),
                        if rng.random_bool(0.5) { "+" } else { "-" },
                        rng.random_range(0..5) as f64 / 2.0
                    )),
                }
            }
        }
    }
    out
}
