//! Complex scalars and the small combinatorial helpers shared by the
//! operator modules.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex number; degrees `λ` and all form coefficients use it.
pub type Scalar = Complex64;

pub const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub const ONE: Scalar = Complex64::new(1.0, 0.0);

/// `a^λ = exp(λ · ln a)` for real `a > 0`.
pub fn real_pow(a: f64, lambda: Scalar) -> Scalar {
    (lambda * a.ln()).exp()
}

pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `(i+m)! / i!`, the falling-factorial weight of an `m`-fold log shift.
pub fn shift_weight(i: usize, m: usize) -> f64 {
    ((i + 1)..=(i + m)).fold(1.0, |acc, v| acc * v as f64)
}

/// Parses `"2"`, `"-1.5"`, `"1+2i"`, `"(0.5-3i)"`, `"2i"` into a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = || Error::InvalidArgument(format!("not a complex number: {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(&s);
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Scalar::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Scalar::new(re, im))
}
