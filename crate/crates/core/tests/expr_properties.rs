use nncalc::{parse, Expr, NNFunction};
use proptest::prelude::*;

mod common;

use common::{any_expr, ex, oracle, safe_expr, tame};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pretty_output_reparses_to_the_same_tree(e in any_expr(6)) {
        let text = e.pretty();
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }
}

proptest! {
    #[test]
    fn eval_matches_classical_oracle(e in safe_expr(4), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let (want, _) = oracle(&e, u);
        let got = e.eval(ex(u)).unwrap().log();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn simplify_preserves_values(e in safe_expr(4), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let x = ex(u);
        let (a, b) = (e.eval(x).unwrap().log(), e.simplify().eval(x).unwrap().log());
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn symbolic_function_wraps_expression(e in safe_expr(3), u in -1.0f64..1.0) {
        prop_assume!(tame(&e, -1.0, 1.0));
        let f = NNFunction::from_expr(e.clone());
        prop_assert_eq!(f.eval_log_at(u).unwrap(), e.eval(ex(u)).unwrap().log());
        prop_assert!(f.is_symbolic());
    }
}

#[test]
fn size_counts_nodes() {
    let e: Expr = parse("x (+) cose(e^2 (*) x)").unwrap();
    assert_eq!(e.size(), 6);
}
