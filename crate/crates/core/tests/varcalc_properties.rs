use std::f64::consts::FRAC_PI_2;

use nncalc::varcalc::{
    bump, el_residual_profile, first_variation, functional_eval, nn_partial, nn_partial_numeric,
    solve_direct, solve_el_bvp, Arg, DirectOptions, Lagrangian, Path, VariationalProblem,
    HARMONIC_LAGRANGIAN,
};
use nncalc::{parse, NNFunction, NNReal};
use proptest::prelude::*;

mod common;

use common::{ex, gauss_legendre, oracle, safe_expr, tame};

fn harmonic(ua: f64, ub: f64, ya: f64, yb: f64) -> VariationalProblem {
    VariationalProblem::new(
        Lagrangian::parse(HARMONIC_LAGRANGIAN).unwrap(),
        ex(ua),
        ex(ub),
        ex(ya),
        ex(yb),
    )
    .unwrap()
}

/// Conjugate solution of `Y″ + Y = 0` through `(ua, ya)` and `(ub, yb)`.
fn exact(ua: f64, ub: f64, ya: f64, yb: f64) -> impl Fn(f64) -> f64 {
    let s = (ub - ua).sin();
    move |u| (ya * (ub - u).sin() + yb * (u - ua).sin()) / s
}

fn max_error(path: &Path, y: impl Fn(f64) -> f64) -> f64 {
    (0..=path.n())
        .map(|i| (path.logs()[i] - y(path.node_log(i))).abs())
        .fold(0.0, f64::max)
}

fn interior_max(r: &[f64]) -> f64 {
    r[1..r.len() - 1].iter().cloned().fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_paths_satisfy_euler_lagrange(ya in -1.0f64..3.0, yb in -1.0f64..3.0) {
        let p = harmonic(0.0, FRAC_PI_2, ya, yb);
        let direct = solve_direct(&p, 200, &DirectOptions::default()).unwrap();
        let bvp = solve_el_bvp(&p, 400).unwrap();
        prop_assert!(interior_max(&el_residual_profile(&p, &direct.path).unwrap()) <= 5e-3);
        prop_assert!(interior_max(&el_residual_profile(&p, &bvp.path).unwrap()) <= 1e-4);
        let y = exact(0.0, FRAC_PI_2, ya, yb);
        prop_assert!(max_error(&bvp.path, &y) <= 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn extremal_has_vanishing_first_variation(s in 0.0f64..FRAC_PI_2, t in 0.0f64..FRAC_PI_2) {
        prop_assume!((s - t).abs() > 0.05);
        let p = harmonic(0.0, FRAC_PI_2, 1.0, 2.0);
        let y = NNFunction::from_expr(parse("cose(x) (+) e^2 (*) sine(x)").unwrap());
        let h = bump(ex(s.min(t)), ex(s.max(t))).unwrap();
        let v = first_variation(&p, &y, &h, 1e-11).unwrap();
        prop_assert!(v.log().abs() <= 1e-3, "{}", v);
    }
}

proptest! {

    #[test]
    fn functional_matches_classical_action(e in safe_expr(2)) {
        prop_assume!(tame(&e, 0.0, 1.0));
        let p = harmonic(0.0, 1.0, 0.0, 0.0);
        let y = NNFunction::from_expr(e.clone());
        let action = |u: f64| {
            let (y, dy) = oracle(&e, u);
            0.5 * (dy * dy - y * y)
        };
        let want = gauss_legendre(action, 0.0, 1.0, 200);
        let got = functional_eval(&p, &y, 1e-12).unwrap().log();
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn partials_agree_with_closed_forms(u in -2.0f64..2.0, y in -2.0f64..2.0, q in -2.0f64..2.0) {
        let l = Lagrangian::parse(HARMONIC_LAGRANGIAN).unwrap();
        let (x, yv, yd) = (ex(u), ex(y), ex(q));
        for (arg, want) in [(Arg::X, 0.0), (Arg::Y, -y), (Arg::Yd, q)] {
            let sym = nn_partial(&l, arg, x, yv, yd).unwrap().log();
            let num = nn_partial_numeric(&l, arg, x, yv, yd).unwrap().log();
            prop_assert!((sym - want).abs() <= 1e-12);
            prop_assert!((sym - num).abs() <= 1e-7, "{:?}: {} vs {}", arg, sym, num);
        }
    }
}

#[test]
fn grid_refinement_is_second_order() {
    let y = exact(0.0, FRAC_PI_2, 1.0, 2.0);
    let p = harmonic(0.0, FRAC_PI_2, 1.0, 2.0);
    let direct = |n| max_error(&solve_direct(&p, n, &DirectOptions::default()).unwrap().path, &y);
    let bvp = |n| max_error(&solve_el_bvp(&p, n).unwrap().path, &y);
    assert!(direct(25) / direct(50) >= 3.0);
    assert!(bvp(25) / bvp(50) >= 3.0);
}

#[test]
fn harmonic_lagrangian_on_constant_curve() {
    let p = harmonic(0.0, 2.0 * std::f64::consts::PI, 1.0, 1.0);
    let y = NNFunction::from_expr(parse("e").unwrap());
    let v = functional_eval(&p, &y, 1e-12).unwrap();
    assert!(v.approx_eq(NNReal::from_log(-std::f64::consts::PI).unwrap(), 1e-10));
}
