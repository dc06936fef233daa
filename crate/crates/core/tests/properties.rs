mod common;

use proptest::prelude::*;
use qahd::expr::{canonical_sort, differentiate, eval_expr, parse, render};
use qahd::identify::{multi_probe, prony_recover, sample_ray};
use qahd::logform::{angular_is_zero, canonicalize, AngularPart, Atom, LogForm};
use qahd::operators::{dilate, ode_g1, op_power, OpKind};
use qahd::pairing::{pair, QuadratureSpec, TestFunction};
use qahd::sampling::{norm, probe_point, probe_points, unit_direction};
use qahd::scalar::{factorial, real_pow, Scalar, ZERO};
use qahd::spectral::{build_r, coefficient_action, nilpotent_action, ShiftMatrix};
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// `Σ x_i²/r² − 1`, which vanishes on the sphere.
fn pythagorean(n: usize) -> AngularPart {
    let mut h = AngularPart::constant(n, Scalar::new(-1.0, 0.0));
    for i in 0..n {
        h = h.add(&AngularPart::atom(
            Atom::coordinate(n, i + 1).pow(2),
            Scalar::new(1.0, 0.0),
        ));
    }
    h
}

fn relative_gap(f: &LogForm, g: &LogForm) -> f64 {
    f.sub(g).unwrap().norm() / f.norm().max(g.norm()).max(1.0)
}

/// Sums of `c x^α r^μ log^j r` with small exponents, kept smooth enough
/// for finite differences.
fn smooth_expression<R: Rng>(n: usize, rng: &mut R) -> String {
    let terms: Vec<String> = (0..rng.random_range(1..=3))
        .map(|_| {
            let mut t = format!("{}", rng.random_range(-8..=8) as f64 / 4.0);
            for i in 1..=n {
                let p = rng.random_range(0..=2);
                if p > 0 {
                    t.push_str(&format!("*x{i}^{p}"));
                }
            }
            t.push_str(&format!("*r^({})", rng.random_range(-6..=6) as f64 / 2.0));
            if rng.random_bool(0.5) {
                t.push_str(&format!("*log(r)^{}", rng.random_range(1..=2)));
            }
            t
        })
        .collect();
    terms.join(" + ")
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn render_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let text = common::random_expression(&mut rng, 2);
        let e = parse(&text, 3).unwrap();
        let again = parse(&render(&e), 3).unwrap();
        prop_assert_eq!(again, canonical_sort(&e));
    }

    #[test]
    fn monomials_are_homogeneous(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let alpha: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3)).collect();
        let mu = Scalar::new(rng.random_range(-8..=8) as f64 / 2.0, rng.random_range(-4..=4) as f64 / 2.0);
        let mut text = format!("r^({}{:+}i)", mu.re, mu.im);
        for (i, p) in alpha.iter().enumerate() {
            text.push_str(&format!("*x{}^{p}", i + 1));
        }
        let e = parse(&text, n).unwrap();
        let degree = mu + alpha.iter().sum::<u32>() as f64;
        let x = probe_point(n, &mut rng);
        let base = eval_expr(&e, &x).unwrap();
        for a in [0.5, 2.0, 10.0] {
            let ax: Vec<f64> = x.iter().map(|c| a * c).collect();
            let expected = real_pow(a, degree) * base;
            let got = eval_expr(&e, &ax).unwrap();
            prop_assert!((got - expected).norm() <= 1e-12 * expected.norm());
        }
    }

    #[test]
    fn derivative_matches_finite_differences(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let e = parse(&smooth_expression(n, &mut rng), n).unwrap();
        let i = rng.random_range(1..=n);
        let x = probe_point(n, &mut rng);
        let exact = eval_expr(&differentiate(&e, i), &x).unwrap();
        let central = |h: f64| {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[i - 1] += h;
            minus[i - 1] -= h;
            (eval_expr(&e, &plus).unwrap() - eval_expr(&e, &minus).unwrap()) / (2.0 * h)
        };
        let h = 1e-3 * norm(&x);
        let d1 = central(h);
        let d2 = central(h / 2.0);
        let d3 = central(h / 4.0);
        let r1 = (d2 * 4.0 - d1) / 3.0;
        let r2 = (d3 * 4.0 - d2) / 3.0;
        let richardson = (r2 * 16.0 - r1) / 15.0;
        // the natural size of a derivative at this point
        let scale = exact.norm().max(eval_expr(&e, &x).unwrap().norm() / norm(&x));
        prop_assert!((richardson - exact).norm() <= 1e-7 * scale.max(1e-300));
    }

    #[test]
    fn canonical_form_evaluates_like_the_expression(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let e = parse(&common::random_expression(&mut rng, 1), 3).unwrap();
        let Ok(m) = canonicalize(&e, 3) else {
            // quotients by sums leave the class
            return Ok(());
        };
        for x in probe_points(3, 20, &mut rng) {
            let direct = eval_expr(&e, &x).unwrap();
            let canonical = m.eval(&x).unwrap();
            prop_assert!((direct - canonical).norm() <= 1e-11 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn canonicalize_is_linear(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_expression(&mut rng, 1);
        let b = common::random_expression(&mut rng, 1);
        let (Ok(fa), Ok(fb)) = (canonicalize(&parse(&a, 3).unwrap(), 3), canonicalize(&parse(&b, 3).unwrap(), 3)) else {
            return Ok(());
        };
        let sum = canonicalize(&parse(&format!("({a}) + ({b})"), 3).unwrap(), 3).unwrap();
        let gap = fa.add(&fb).add(&sum.scale(Scalar::new(-1.0, 0.0)));
        prop_assert!(gap.is_zero());
    }

    #[test]
    fn pythagorean_multiples_vanish(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let g = common::random_angular(n, &mut rng);
        prop_assert!(angular_is_zero(&pythagorean(n).mul(&g)));
    }

    #[test]
    fn order_ignores_the_pythagorean_relation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let k = rng.random_range(0..=4);
        let f = common::random_form_with(n, k, &mut rng);
        let j = rng.random_range(0..=k + 1);
        let extra = pythagorean(n).mul(&common::random_angular(n, &mut rng));
        let mut coeffs: Vec<AngularPart> = (0..=k + 1).map(|i| f.coeff(i)).collect();
        coeffs[j] = coeffs[j].add(&extra);
        let g = LogForm::new(n, f.raw_degree(), coeffs);
        prop_assert_eq!(g.order(), k);
    }

    #[test]
    fn exponential_formula(seed in any::<u64>(), a in 0.05f64..20.0) {
        let f = common::random_form(&mut common::rng(seed));
        let lambda = f.raw_degree();
        let mut sum = LogForm::zero(f.dimension());
        for m in 0..=f.order() {
            let term = op_power(OpKind::EulerMinusLambda { lambda: None }, m, &f)
                .unwrap()
                .scale(real_pow(a, lambda) * a.ln().powi(m as i32) / factorial(m));
            sum = sum.add(&term).unwrap();
        }
        prop_assert!(relative_gap(&dilate(&f, a).unwrap(), &sum) < 1e-12);
    }

    #[test]
    fn dilation_is_a_group_action(seed in any::<u64>(), a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let f = common::random_form(&mut common::rng(seed));
        let twice = dilate(&dilate(&f, a).unwrap(), b).unwrap();
        prop_assert!(relative_gap(&twice, &dilate(&f, a * b).unwrap()) < 1e-12);
    }

    #[test]
    fn euler_nilpotency_index_is_the_order(seed in any::<u64>()) {
        let f = common::random_form(&mut common::rng(seed));
        let kind = OpKind::EulerMinusLambda { lambda: None };
        prop_assert!(!op_power(kind, f.order(), &f).unwrap().is_zero());
        prop_assert!(op_power(kind, f.order() + 1, &f).unwrap().is_zero());
    }

    #[test]
    fn delta_annihilates_past_the_order(seed in any::<u64>(), a in 0.1f64..10.0) {
        let f = common::random_form(&mut common::rng(seed));
        let g = op_power(OpKind::Delta { a, mu: None }, f.order() + 1, &f).unwrap();
        prop_assert!(g.norm() <= 1e-10 * f.norm());
    }

    #[test]
    fn order_one_forms_solve_the_scalar_ode(seed in any::<u64>(), a in 0.1f64..10.0) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let f = common::random_form_with(n, 1, &mut rng);
        let x = probe_point(n, &mut rng);
        let scale = 1.0 + real_pow(a.max(1.0), f.raw_degree()).norm() * f.norm() * (1.0 + a.ln().abs());
        prop_assert!(ode_g1(&f, a, &x).unwrap().norm() < 1e-10 * scale);
    }

    #[test]
    fn shift_matrix_is_nilpotent(size in 1usize..=12) {
        let t = ShiftMatrix::new(size).matrix();
        let mut p = t.clone();
        for _ in 1..size {
            p = &p * &t;
        }
        prop_assert!(p.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn dilation_matrix_factors_commute(size in 1usize..=8, a in 0.1f64..10.0, re in -3.0f64..3.0, im in -2.0f64..2.0) {
        let lambda = Scalar::new(re, im);
        let r = build_r(a, lambda, size).unwrap().matrix().clone();
        let t = ShiftMatrix::new(size).matrix();
        let left = (&t * &r).map(|z| z * a.ln());
        let right = (&r * &t).map(|z| z * a.ln());
        let diff = &r - nalgebra::DMatrix::identity(size, size).map(|z: Scalar| z * real_pow(a, lambda));
        let bound = 1e-13 * r.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!((&diff - &left).iter().all(|z| z.norm() < bound));
        prop_assert!((&left - &right).iter().all(|z| z.norm() < bound));
    }

    #[test]
    fn delta_powers_have_strict_bands(size in 1usize..=8, a in 0.1f64..10.0, re in -3.0f64..3.0, im in -2.0f64..2.0) {
        for k in 0..size {
            prop_assert_eq!(nilpotent_action(size, a, Scalar::new(re, im), k).unwrap(), 0.0);
        }
    }

    #[test]
    fn matrix_action_matches_dilate(seed in any::<u64>(), a in 0.1f64..10.0) {
        let f = common::random_form(&mut common::rng(seed));
        let size = f.order() + 2;
        let m = coefficient_action(a, f.raw_degree(), size).unwrap();
        let g = dilate(&f, a).unwrap();
        // probe each coefficient with the same angular point
        let omega = unit_direction(f.dimension(), &mut common::rng(seed ^ 1));
        let h: Vec<Scalar> = (0..size).map(|j| f.coeff(j).eval(&omega)).collect();
        let scale = g.norm().max(1.0) * f.coeffs().len() as f64;
        for i in 0..size {
            let via_matrix: Scalar = (0..size).map(|j| m[(i, j)] * h[j]).sum();
            prop_assert!((via_matrix - g.coeff(i).eval(&omega)).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn ray_samples_recover_degree_and_order(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let k = rng.random_range(0..=3);
        let f = common::random_form_with(n, k, &mut rng);
        let x0 = probe_point(n, &mut rng);
        let omega: Vec<f64> = x0.iter().map(|c| c / norm(&x0)).collect();
        prop_assume!(f.coeff(k).eval(&omega).norm() > 1e-2);
        let s = sample_ray(|x| f.eval(x), &x0, 0.1, 2 * (k + 1) + 3).unwrap();
        let fit = prony_recover(&s, k + 1).unwrap();
        prop_assert_eq!(fit.order, k);
        prop_assert!((fit.lambda - f.raw_degree()).norm() < 1e-6);
    }

    #[test]
    fn multi_probe_restores_the_order(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(2..=3);
        let k = rng.random_range(1..=3);
        // h_k = x1/r vanishes on a whole hyperplane of directions
        let mut f = common::random_form_with(n, k, &mut rng);
        let mut coeffs = f.coeffs().to_vec();
        coeffs[k] = AngularPart::atom(Atom::coordinate(n, 1), Scalar::new(1.0, 0.0));
        f = LogForm::new(n, f.raw_degree(), coeffs);
        let report = multi_probe(|x| f.eval(x), n, 0.1, 16, k + 1, seed).unwrap();
        prop_assert_eq!(report.k, k);
        prop_assert!((report.lambda - f.raw_degree()).norm() < 1e-6);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn pairing_is_linear(seed in any::<u64>(), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let f = common::random_form_with(n, rng.random_range(0..=2), &mut rng);
        let g = common::random_form_with(n, rng.random_range(0..=2), &mut rng).with_degree(f.raw_degree());
        let center: Vec<f64> = unit_direction(n, &mut rng).iter().map(|c| 2.0 * c).collect();
        let phi = TestFunction::new(center, 1.0).unwrap();
        let q = QuadratureSpec { radial: 16, angular: 16, polar: 8, ..QuadratureSpec::default() };
        let combined = f.scale(Scalar::new(alpha, 0.0)).add(&g.scale(Scalar::new(beta, 0.0))).unwrap();
        let (pf, pg) = (pair(&f, &phi, &q).unwrap(), pair(&g, &phi, &q).unwrap());
        let lhs = pair(&combined, &phi, &q).unwrap();
        let rhs = pf * alpha + pg * beta;
        let scale = pf.norm() * alpha.abs() + pg.norm() * beta.abs();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn pairing_matches_change_of_variables(seed in any::<u64>(), a in 0.5f64..3.0) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=3);
        let f = common::random_form_with(n, rng.random_range(0..=2), &mut rng);
        let dist = rng.random_range(1.5..3.0);
        let center: Vec<f64> = unit_direction(n, &mut rng).iter().map(|c| dist * c).collect();
        let phi = TestFunction::new(center, 1.0).unwrap();
        let q = QuadratureSpec::default();
        let direct = pair(&f, &phi.scaled(a), &q).unwrap();
        let substituted = pair(&dilate(&f, a).unwrap(), &phi, &q).unwrap() * a.powi(n as i32);
        prop_assert!((direct - substituted).norm() <= 1e-9 * (1.0 + direct.norm()));
    }
}
