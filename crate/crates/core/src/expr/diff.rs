use super::{pow, Expr};
use crate::scalar::{Scalar, ONE, ZERO};

/// Symbolic `∂e/∂x_i`, simplified.
///
/// Uses `∂r/∂x_i = x_i r^{-1}` and `∂(log r)/∂x_i = x_i r^{-2}`; the result
/// stays inside the grammar.
pub fn differentiate(e: &Expr, i: usize) -> Expr {
    simplify(&derive(e, i))
}

fn derive(e: &Expr, i: usize) -> Expr {
    match e {
        Expr::Constant(_) => Expr::constant(0.0),
        Expr::Variable(j) => Expr::constant(if *j == i { 1.0 } else { 0.0 }),
        Expr::Radius => Expr::Product(vec![
            Expr::Variable(i),
            Expr::power(Expr::Radius, Scalar::new(-1.0, 0.0)),
        ]),
        Expr::LogRadius => Expr::Product(vec![
            Expr::Variable(i),
            Expr::power(Expr::Radius, Scalar::new(-2.0, 0.0)),
        ]),
        Expr::Sum(items) => Expr::Sum(items.iter().map(|t| derive(t, i)).collect()),
        Expr::Product(items) => Expr::Sum(
            (0..items.len())
                .map(|k| {
                    let mut factors = items.clone();
                    factors[k] = derive(&items[k], i);
                    Expr::Product(factors)
                })
                .collect(),
        ),
        Expr::Power(base, p) => Expr::Product(vec![
            Expr::Constant(*p),
            Expr::power((**base).clone(), p - ONE),
            derive(base, i),
        ]),
        Expr::Negate(inner) => Expr::negate(derive(inner, i)),
    }
}

/// Light algebraic cleanup: flattens nested sums and products, drops zero
/// summands and unit factors, folds constants and merges repeated powers of
/// `r`, `log r` and each `x_i` inside a product.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Constant(_) | Expr::Variable(_) | Expr::Radius | Expr::LogRadius => e.clone(),
        Expr::Negate(inner) => match simplify(inner) {
            Expr::Constant(c) => Expr::Constant(-c),
            Expr::Negate(x) => *x,
            other => Expr::negate(other),
        },
        Expr::Power(base, p) => simplify_power(simplify(base), *p),
        Expr::Sum(items) => {
            let mut flat = Vec::new();
            let mut constant = ZERO;
            for item in items.iter().map(simplify) {
                match item {
                    Expr::Sum(inner) => flat.extend(inner),
                    Expr::Constant(c) => constant += c,
                    other => flat.push(other),
                }
            }
            if constant != ZERO {
                flat.push(Expr::Constant(constant));
            }
            match flat.len() {
                0 => Expr::constant(0.0),
                1 => flat.pop().expect("one summand"),
                _ => Expr::Sum(flat),
            }
        }
        Expr::Product(items) => simplify_product(items),
    }
}

fn simplify_power(base: Expr, p: Scalar) -> Expr {
    if p == ZERO {
        return Expr::constant(1.0);
    }
    if p == ONE {
        return base;
    }
    match base {
        Expr::Constant(c) => Expr::Constant(pow(c, p)),
        Expr::Power(inner, q) if matches!(*inner, Expr::Radius) || is_integer(p) => {
            simplify_power(*inner, q * p)
        }
        other => Expr::power(other, p),
    }
}

fn is_integer(p: Scalar) -> bool {
    p.im == 0.0 && p.re.fract() == 0.0
}

fn simplify_product(items: &[Expr]) -> Expr {
    let mut constant = ONE;
    let mut negate = false;
    // (base, accumulated exponent) in first-seen order
    let mut powers: Vec<(Expr, Scalar)> = Vec::new();
    let mut others: Vec<Expr> = Vec::new();

    let mut stack: Vec<Expr> = items.iter().rev().map(simplify).collect();
    while let Some(item) = stack.pop() {
        match item {
            Expr::Product(inner) => stack.extend(inner.into_iter().rev()),
            Expr::Constant(c) => constant *= c,
            Expr::Negate(inner) => {
                negate = !negate;
                stack.push(*inner);
            }
            Expr::Radius | Expr::LogRadius | Expr::Variable(_) => add_power(&mut powers, item, ONE),
            Expr::Power(base, p)
                if matches!(*base, Expr::Radius)
                    || (is_integer(p) && matches!(*base, Expr::LogRadius | Expr::Variable(_))) =>
            {
                add_power(&mut powers, *base, p)
            }
            other => others.push(other),
        }
    }
    if constant == ZERO {
        return Expr::constant(0.0);
    }
    if negate {
        constant = -constant;
    }

    let mut factors = Vec::new();
    if constant != ONE {
        factors.push(Expr::Constant(constant));
    }
    for (base, p) in powers {
        match simplify_power(base, p) {
            c if c.is_one_constant() => {}
            f => factors.push(f),
        }
    }
    factors.extend(others);
    match factors.len() {
        0 => Expr::constant(1.0),
        1 => factors.pop().expect("one factor"),
        _ => Expr::Product(factors),
    }
}

fn add_power(powers: &mut Vec<(Expr, Scalar)>, base: Expr, p: Scalar) {
    if let Some(slot) = powers.iter_mut().find(|(b, q)| {
        *b == base && (matches!(base, Expr::Radius) || (is_integer(*q) && is_integer(p)))
    }) {
        slot.1 += p;
    } else {
        powers.push((base, p));
    }
}
