use super::Expr;
use crate::scalar::Scalar;

/// Prints `e` in the input language.
///
/// The printer emits no `/` and parenthesizes every nested sum or product,
/// so `parse(render(e))` rebuilds exactly [`canonical_sort`]`(e)`.
pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, &canonical_sort(e));
    out
}

/// The tree the printer's output parses back to: single-child and empty
/// sums and products collapse, and negative real constants become negated
/// positive ones. Child order is preserved.
pub fn canonical_sort(e: &Expr) -> Expr {
    match e {
        Expr::Constant(c) => {
            let c = Scalar::new(zero_sign(c.re), zero_sign(c.im));
            if c.im == 0.0 && c.re < 0.0 {
                Expr::negate(Expr::constant(-c.re))
            } else {
                Expr::Constant(c)
            }
        }
        Expr::Variable(_) | Expr::Radius | Expr::LogRadius => e.clone(),
        Expr::Sum(items) => match items.len() {
            0 => Expr::constant(0.0),
            1 => canonical_sort(&items[0]),
            _ => Expr::Sum(items.iter().map(canonical_sort).collect()),
        },
        Expr::Product(items) => match items.len() {
            0 => Expr::constant(1.0),
            1 => canonical_sort(&items[0]),
            _ => Expr::Product(items.iter().map(canonical_sort).collect()),
        },
        Expr::Power(base, p) => Expr::power(
            canonical_sort(base),
            Scalar::new(zero_sign(p.re), zero_sign(p.im)),
        ),
        Expr::Negate(inner) => Expr::negate(canonical_sort(inner)),
    }
}

fn zero_sign(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Sum(items) => {
            for (i, item) in items.iter().enumerate() {
                match (i, item) {
                    (0, _) => write_summand_first(out, item),
                    (_, Expr::Negate(inner)) => {
                        out.push_str(" - ");
                        write_term(out, inner);
                    }
                    _ => {
                        out.push_str(" + ");
                        write_term(out, item);
                    }
                }
            }
        }
        _ => write_term(out, e),
    }
}

fn write_summand_first(out: &mut String, e: &Expr) {
    write_term(out, e);
}

/// A `term` position: products print bare, sums need parentheses.
fn write_term(out: &mut String, e: &Expr) {
    match e {
        Expr::Product(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" * ");
                }
                write_factor(out, item);
            }
        }
        _ => write_factor(out, e),
    }
}

/// A `factor` position: `-base`, `base^exp` or a parenthesized group.
fn write_factor(out: &mut String, e: &Expr) {
    match e {
        Expr::Negate(inner) => {
            out.push('-');
            match &**inner {
                Expr::Power(..) => write_factor(out, inner),
                other => write_base(out, other),
            }
        }
        Expr::Power(base, p) => {
            write_base(out, base);
            out.push('^');
            write_exponent(out, *p);
        }
        _ => write_base(out, e),
    }
}

fn write_base(out: &mut String, e: &Expr) {
    match e {
        Expr::Constant(c) if c.im != 0.0 => write_complex(out, *c),
        Expr::Constant(c) => out.push_str(&number(c.re)),
        Expr::Variable(i) => {
            out.push('x');
            out.push_str(&i.to_string());
        }
        Expr::Radius => out.push('r'),
        Expr::LogRadius => out.push_str("log(r)"),
        _ => {
            out.push('(');
            write_expr(out, e);
            out.push(')');
        }
    }
}

fn write_exponent(out: &mut String, p: Scalar) {
    if p.im != 0.0 {
        write_complex(out, p);
    } else if p.re < 0.0 {
        out.push_str("(-");
        out.push_str(&number(-p.re));
        out.push(')');
    } else {
        out.push_str(&number(p.re));
    }
}

fn write_complex(out: &mut String, z: Scalar) {
    out.push('(');
    if z.re < 0.0 {
        out.push('-');
    }
    out.push_str(&number(z.re.abs()));
    out.push(if z.im < 0.0 { '-' } else { '+' });
    out.push_str(&number(z.im.abs()));
    out.push_str("i)");
}

/// Shortest decimal that parses back to `v` (no exponent notation).
fn number(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn documented_renderings() {
        assert_eq!(
            render(&Expr::power(Expr::Radius, Scalar::new(2.0, 0.0))),
            "r^2"
        );
        assert_eq!(render(&parse("r^2", 2).unwrap()), "r^2");
        assert_eq!(
            render(&Expr::Product(vec![Expr::constant(3.0), Expr::LogRadius])),
            "3 * log(r)"
        );
    }

    #[test]
    fn negative_and_complex_pieces() {
        assert_eq!(
            render(&parse("x1^2/r^2 * r^(-1+0i)", 2).unwrap()),
            "x1^2 * r^(-2) * r^(-1)"
        );
        assert_eq!(render(&parse("r^(0.5-2i)", 1).unwrap()), "r^(0.5-2i)");
        assert_eq!(render(&Expr::constant(-3.0)), "-3");
        assert_eq!(
            render(&Expr::Product(vec![
                Expr::Constant(Scalar::new(-1.0, 2.0)),
                Expr::Radius
            ])),
            "(-1+2i) * r"
        );
    }

    #[test]
    fn nested_groups_keep_structure() {
        for s in [
            "r - (x1 + 2) * -r^2",
            "-(r * x1) + (r + (log(r) - 1))",
            "(r^2)^(-0.5) - -(-r)",
            "r - x1 * x2",
            "((r))",
        ] {
            let e = parse(s, 2).unwrap();
            let again = parse(&render(&e), 2).unwrap();
            assert_eq!(again, e, "{s} -> {}", render(&e));
        }
    }

    #[test]
    fn canonical_sort_is_what_reparses() {
        let e = Expr::Sum(vec![
            Expr::Product(vec![Expr::constant(-2.5)]),
            Expr::Sum(vec![]),
            Expr::power(Expr::constant(-2.0), Scalar::new(3.0, 0.0)),
        ]);
        let back = parse(&render(&e), 1).unwrap();
        assert_eq!(back, canonical_sort(&e));
    }
}
