//! Plain-text renderings of the reports, carrying the same numbers as JSON.

use std::fmt::Write;

use qahd::json::format_f64;
use qahd::operators::VerificationReport;
use qahd::pairing::PairingReport;
use qahd::spectral::DilationMatrix;
use qahd::{LogForm, MultiForm, Scalar};

pub fn complex(z: Scalar) -> String {
    if z.im == 0.0 {
        return format_f64(z.re);
    }
    let sign = if z.im < 0.0 { "-" } else { "+" };
    format!("{}{}{}i", format_f64(z.re), sign, format_f64(z.im.abs()))
}

pub fn form(f: &LogForm) -> String {
    if f.is_zero() {
        return "  0".to_string();
    }
    let mut out = format!("  degree {} order {}", complex(f.raw_degree()), f.order());
    for (j, h) in f.coeffs().iter().enumerate() {
        if h.is_empty() {
            continue;
        }
        let terms: Vec<String> = h
            .terms()
            .map(|(atom, c)| format!("({})*{}", complex(*c), atom))
            .collect();
        let _ = write!(out, "\n    log^{j} r: {}", terms.join(" + "));
    }
    out
}

pub fn multi(m: &MultiForm) -> String {
    if m.is_zero() {
        return "0".to_string();
    }
    m.components()
        .iter()
        .map(form)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn verification(r: &VerificationReport) -> String {
    let c = &r.criteria;
    format!(
        "degree {} order {}\n\
         definitional         {}\n\
         dilation_nilpotency  {}\n\
         euler_nilpotency     {}\n\
         structural           {}\n\
         verdict              {}",
        complex(r.degree),
        r.order,
        format_f64(c.definitional),
        format_f64(c.dilation_nilpotency),
        format_f64(c.euler_nilpotency),
        c.structural,
        r.verdict
    )
}

pub fn pairing(r: &PairingReport) -> String {
    format!(
        "degree {} order {} a {}\nlhs {}\nrhs {}\nresidual {}\nverdict {}",
        complex(r.degree),
        r.order,
        format_f64(r.a),
        complex(r.lhs),
        complex(r.rhs),
        format_f64(r.residual),
        r.verdict
    )
}

pub fn matrix(m: &DilationMatrix) -> String {
    let n = m.size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| complex(m.entry(i, j)))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
