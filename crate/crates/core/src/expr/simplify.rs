//! Constant folding and NN identity rewrites.
//!
//! Rewrites preserve the value wherever the input is defined; some may
//! enlarge the domain (`1 ⊙ ln(x)` becomes `1` even where `ln(x) ≤ 0`).

use super::Expr;
use crate::real::NNReal;

const MAX_PASSES: usize = 32;

impl Expr {
    pub fn simplify(&self) -> Expr {
        let mut cur = self.clone();
        for _ in 0..MAX_PASSES {
            let next = pass(&cur);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}

fn is_nn_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.log() == 0.0)
}

fn is_nn_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.log() == 1.0)
}

fn as_const(e: &Expr) -> Option<NNReal> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

/// `c ⊙ u` with a constant left factor (either `c` itself or `c ⊙ u`).
fn const_factor(e: &Expr) -> bool {
    match e {
        Expr::Const(_) => true,
        Expr::ODot(l, _) => matches!(**l, Expr::Const(_)),
        _ => false,
    }
}

fn fold(e: Expr) -> Expr {
    if matches!(e, Expr::Const(_)) || !e.is_constant() {
        return e;
    }
    match e.eval_env(&[]) {
        Ok(c) => Expr::Const(c),
        Err(_) => e,
    }
}

fn pass(e: &Expr) -> Expr {
    let node = match e {
        Expr::Const(_) | Expr::Var(_) => return e.clone(),
        Expr::OPlus(l, r) => rewrite_oplus(pass(l), pass(r)),
        Expr::OMinus(l, r) => rewrite_ominus(pass(l), pass(r)),
        Expr::ODot(l, r) => rewrite_odot(pass(l), pass(r)),
        Expr::OSlash(l, r) => rewrite_oslash(pass(l), pass(r)),
        Expr::NNPow(b, n) => match (pass(b), *n) {
            (b, 1) => b,
            (_, 0) => Expr::Const(NNReal::ONE),
            (b, n) => b.npow(n),
        },
        Expr::ExpOf(u) => match pass(u) {
            Expr::LnOf(inner) => *inner,
            u => u.exp_of(),
        },
        Expr::LnOf(u) => match pass(u) {
            Expr::ExpOf(inner) => *inner,
            u => u.ln_of(),
        },
        Expr::CosE(u) => pass(u).cos_e(),
        Expr::SinE(u) => pass(u).sin_e(),
    };
    fold(node)
}

fn rewrite_oplus(l: Expr, r: Expr) -> Expr {
    if is_nn_zero(&r) {
        return l;
    }
    if is_nn_zero(&l) {
        return r;
    }
    // a ⊕ (1 ⊖ b) = a ⊖ b
    if let Expr::OMinus(z, b) = &r {
        if is_nn_zero(z) {
            return l.ominus((**b).clone());
        }
    }
    if let Expr::OMinus(z, b) = &l {
        if is_nn_zero(z) {
            return r.ominus((**b).clone());
        }
    }
    l.oplus(r)
}

fn rewrite_ominus(l: Expr, r: Expr) -> Expr {
    if is_nn_zero(&r) {
        return l;
    }
    if l == r {
        return Expr::Const(NNReal::ZERO);
    }
    // a ⊖ (1 ⊖ b) = a ⊕ b
    if let Expr::OMinus(z, b) = &r {
        if is_nn_zero(z) {
            return l.oplus((**b).clone());
        }
    }
    l.ominus(r)
}

fn rewrite_odot(l: Expr, r: Expr) -> Expr {
    if is_nn_one(&r) {
        return l;
    }
    if is_nn_one(&l) {
        return r;
    }
    if is_nn_zero(&l) || is_nn_zero(&r) {
        return Expr::Const(NNReal::ZERO);
    }
    // constants to the left
    if as_const(&r).is_some() && as_const(&l).is_none() {
        return rewrite_odot(r, l);
    }
    if let Some(c) = as_const(&l) {
        match r {
            // c ⊙ (d ⊙ u) = (c ⊙ d) ⊙ u
            Expr::ODot(rl, rr) if as_const(&rl).is_some() => {
                let d = as_const(&rl).unwrap_or(NNReal::ONE);
                return match c.odot(d) {
                    Ok(cd) => rewrite_odot(Expr::Const(cd), *rr),
                    Err(_) => l.odot(Expr::ODot(rl, rr)),
                };
            }
            // distribute a constant over ⊕/⊖ when it meets another constant factor
            Expr::OPlus(a, b) if const_factor(&a) || const_factor(&b) => {
                return rewrite_oplus(
                    rewrite_odot(l.clone(), *a),
                    rewrite_odot(l, *b),
                );
            }
            Expr::OMinus(a, b) if const_factor(&a) || const_factor(&b) => {
                return rewrite_ominus(
                    rewrite_odot(l.clone(), *a),
                    rewrite_odot(l, *b),
                );
            }
            r => return fold(l.odot(r)),
        }
    }
    l.odot(r)
}

fn rewrite_oslash(l: Expr, r: Expr) -> Expr {
    if is_nn_one(&r) {
        return l;
    }
    // u ⊘ c = e^{1/ln c} ⊙ u
    if let Some(c) = as_const(&r) {
        if c.log() != 0.0 {
            if let Ok(inv) = c.inv() {
                return rewrite_odot(Expr::Const(inv), l);
            }
        }
    }
    l.oslash(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, parse_with_vars};

    fn simp(text: &str) -> String {
        parse_with_vars(text, &["x", "y", "yd", "ydd"])
            .unwrap()
            .simplify()
            .pretty()
    }

    #[test]
    fn identities() {
        assert_eq!(simp("x (+) 1"), "x");
        assert_eq!(simp("1 (+) x"), "x");
        assert_eq!(simp("x (*) e"), "x");
        assert_eq!(simp("x (*) 1"), "1");
        assert_eq!(simp("x (-) x"), "1");
        assert_eq!(simp("npow(x, 1)"), "x");
        assert_eq!(simp("npow(x, 0)"), "e");
        assert_eq!(simp("ln(exp(x))"), "x");
        assert_eq!(simp("e (+) e"), "e^2");
        assert_eq!(simp("x (/) e^2"), "e^0.5 (*) x");
    }

    #[test]
    fn folds_harmonic_partials() {
        // √e ⊙ (1 ⊖ e² ⊙ y) = 1 ⊖ y and √e ⊙ (e² ⊙ ỹ) = ỹ
        assert_eq!(simp("e^0.5 (*) (1 (-) e^2 (*) y)"), "1 (-) y");
        assert_eq!(simp("e^0.5 (*) (e^2 (*) yd)"), "yd");
        assert_eq!(simp("ydd (-) (1 (-) y)"), "ydd (+) y");
    }

    #[test]
    fn preserves_values() {
        for text in [
            "e^0.3 (*) (x (+) cose(x)) (-) (2 (*) x)",
            "npow(x (+) 2, 3) (/) e^1.5",
            "exp(ln(x (+) e^2)) (*) 3",
            "x (*) e (*) 2 (-) (1 (-) sine(x))",
        ] {
            let e = parse(text).unwrap();
            let s = e.simplify();
            for l in [-1.3, -0.2, 0.4, 1.7] {
                let x = NNReal::from_log(l).unwrap();
                let a = e.eval(x).unwrap().log();
                let b = s.eval(x).unwrap().log();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{text}: {a} vs {b}");
            }
        }
    }
}
