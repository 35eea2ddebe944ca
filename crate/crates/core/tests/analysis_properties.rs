use nncalc::analysis::{
    exp_series, nn_deriv_conj, nn_deriv_limit, nn_deriv_symbolic, nn_integral, DEFAULT_H_LOG,
};
use nncalc::{Expr, NNFunction, NNReal};
use proptest::prelude::*;

mod common;

use common::{ex, gauss_legendre, oracle, safe_expr, tame};

const TOL: f64 = 1e-11;

fn integral(e: &Expr, ua: f64, ub: f64) -> f64 {
    nn_integral(&NNFunction::from_expr(e.clone()), ex(ua), ex(ub), TOL)
        .unwrap()
        .log()
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nondegenerate", |(s, t)| (s - t).abs() > 1e-3)
        .prop_map(|(s, t)| (s.min(t), s.max(t)))
}

proptest! {
    #[test]
    fn symbolic_derivative_matches_conjugation(e in safe_expr(3), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.2, 1.2));
        let f = NNFunction::from_expr(e.clone());
        let sym = nn_deriv_symbolic(&e).eval(ex(u)).unwrap().log();
        let conj = nn_deriv_conj(&f, ex(u), DEFAULT_H_LOG).unwrap();
        prop_assume!(conj.converged);
        prop_assert!((sym - conj.value.log()).abs() <= 1e-6 * sym.abs().max(1.0));
    }

    #[test]
    fn symbolic_derivative_matches_forward_mode(e in safe_expr(4), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let (_, want) = oracle(&e, u);
        let got = nn_deriv_symbolic(&e).eval(ex(u)).unwrap().log();
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0));
    }

    #[test]
    fn limit_and_conjugation_agree(e in safe_expr(3), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.2, 1.2));
        let f = NNFunction::from_expr(e);
        let limit = nn_deriv_limit(&f, ex(u), None).unwrap();
        let conj = nn_deriv_conj(&f, ex(u), DEFAULT_H_LOG).unwrap();
        prop_assume!(limit.converged && conj.converged);
        let (l, c) = (limit.value.log(), conj.value.log());
        prop_assert!((l - c).abs() <= 1e-5 * c.abs().max(1.0), "{} vs {}", l, c);
    }

    #[test]
    fn power_rule(n in 1i32..=5, u in -2.0f64..2.0) {
        let d = nn_deriv_symbolic(&Expr::x().npow(n)).eval(ex(u)).unwrap();
        let want = ex(u).pow(n - 1).unwrap().scale(n as f64).unwrap();
        prop_assert!(d.approx_eq(want, 1e-12));
    }

    #[test]
    fn integral_matches_classical_quadrature(e in safe_expr(3), (ua, ub) in interval()) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let want = gauss_legendre(|u| oracle(&e, u).0, ua, ub, 200);
        prop_assert!((integral(&e, ua, ub) - want).abs() <= 1e-8 * want.abs().max(1.0));
    }

    #[test]
    fn integral_is_additive_and_oriented(e in safe_expr(2), (ua, ub) in interval(), t in 0.0f64..1.0) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let uc = ua + t * (ub - ua);
        let whole = integral(&e, ua, ub);
        let split = integral(&e, ua, uc) + integral(&e, uc, ub);
        prop_assert!((whole - split).abs() <= 1e-9);
        prop_assert!((integral(&e, ub, ua) + whole).abs() <= 1e-9);
    }

    #[test]
    fn integral_is_linear(
        f in safe_expr(2),
        g in safe_expr(2),
        c in -1.0f64..1.0,
        (ua, ub) in interval(),
    ) {
        prop_assume!(tame(&f, -1.0, 1.0) && tame(&g, -1.0, 1.0));
        let (i_f, i_g) = (integral(&f, ua, ub), integral(&g, ua, ub));
        let sum = integral(&f.clone().oplus(g.clone()), ua, ub);
        let diff = integral(&f.clone().ominus(g), ua, ub);
        let scaled = integral(&Expr::constant(ex(c)).odot(f), ua, ub);
        prop_assert!((sum - (i_f + i_g)).abs() <= 1e-9);
        prop_assert!((diff - (i_f - i_g)).abs() <= 1e-9);
        prop_assert!((scaled - c * i_f).abs() <= 1e-9);
    }

    #[test]
    fn integral_bounds_and_monotonicity(
        f in safe_expr(2),
        h in safe_expr(2),
        (ua, ub) in interval(),
    ) {
        prop_assume!(tame(&f, -1.0, 1.0) && tame(&h, -1.0, 1.0));
        let grid: Vec<(f64, f64)> = (0..=400)
            .map(|i| oracle(&f, ua + (ub - ua) * i as f64 / 400.0))
            .collect();
        let slope = grid.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        let pad = slope * (ub - ua) / 400.0;
        let m = grid.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - pad;
        let big = grid.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + pad;
        let i_f = integral(&f, ua, ub);
        // m ⊙ (b ⊖ a) ≤ ∫̃ f ≤ M ⊙ (b ⊖ a)
        prop_assert!(m * (ub - ua) <= i_f + 1e-10 && i_f <= big * (ub - ua) + 1e-10);
        // exp(h) > 1, so f ⊕ exp(h) ≥ f
        let g = f.oplus(h.exp_of());
        prop_assert!(i_f <= integral(&g, ua, ub) + 1e-10);
    }
}

#[test]
fn exp_series_converges_at_sample_points() {
    for u in [-1.0f64, 0.5, 1.0] {
        let x = ex(u);
        let err = (exp_series(x, 30).unwrap().log() - u.exp()).abs();
        assert!(err <= 1e-12, "u = {u}: {err}");
    }
    // the degree-0 sum is the single term e ⊙ x^{{0}} = e
    assert_eq!(exp_series(NNReal::ZERO, 0).unwrap(), NNReal::ONE);
}
