//! Symbolic NN antiderivatives: the standard table extended by linearity.
//!
//! | integrand        | representative `F` (full answer `F ⊕ c`) |
//! |------------------|------------------------------------------|
//! | `k` (constant)   | `k ⊙ x`  (`1` when `k = 1`)              |
//! | `eⁿ`             | `xⁿ = eⁿ ⊙ x`                            |
//! | `x^{{n}}`        | `e^{1/(n+1)} ⊙ x^{{n+1}}`, `n ≠ -1`      |
//! | `e ⊘ x`          | `ln(x)`                                  |
//! | `e^{a⊙x}`        | `a^{{-1}} ⊙ e^{a⊙x}`, `a ≠ 1`            |
//! | `e^{r x²}`       | `e^{r x²/2}`                             |
//!
//! Linearity: `∫(f ⊕ g) = ∫f ⊕ ∫g`, `∫(f ⊖ g) = ∫f ⊖ ∫g`, `∫c ⊙ f = c ⊙ ∫f`.

use crate::expr::Expr;
use crate::real::NNReal;

/// A constant-free antiderivative representative.
#[derive(Clone, Debug, PartialEq)]
pub struct Antiderivative {
    pub expr: Expr,
}

const VAR: &str = "x";
const CONSTANCY_GRID: usize = 64;

fn is_var(e: &Expr) -> bool {
    matches!(e, Expr::Var(n) if n == VAR)
}

fn konst(e: &Expr) -> Option<NNReal> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

/// Looks up `∫̃ e d̃x` in the table (up to linearity). `None` when the shape
/// is not covered.
pub fn nn_antideriv_symbolic(e: &Expr) -> Option<Antiderivative> {
    let s = e.simplify();
    let found = antideriv(&s).or_else(|| constant_on_grid(&s))?;
    Some(Antiderivative {
        expr: found.simplify(),
    })
}

fn linear_in_x(k: NNReal) -> Expr {
    Expr::Const(k).odot(Expr::x())
}

fn antideriv(e: &Expr) -> Option<Expr> {
    if e.is_constant() {
        let k = e.eval_env(&[]).ok()?;
        return Some(linear_in_x(k));
    }
    match e {
        Expr::Var(_) if is_var(e) => power_rule(1),
        Expr::NNPow(b, n) if is_var(b) => power_rule(*n),
        Expr::OSlash(c, x) if is_var(x) => {
            let c = konst(c)?;
            Some(Expr::Const(c).odot(Expr::x().ln_of()))
        }
        Expr::ExpOf(inner) => exp_entry(inner),
        Expr::OPlus(f, g) => Some(antideriv(f)?.oplus(antideriv(g)?)),
        Expr::OMinus(f, g) => Some(antideriv(f)?.ominus(antideriv(g)?)),
        Expr::ODot(l, r) => {
            let (c, f) = match (konst(l), konst(r)) {
                (Some(c), _) => (c, r),
                (_, Some(c)) => (c, l),
                _ => return None,
            };
            Some(Expr::Const(c).odot(antideriv(f)?))
        }
        _ => None,
    }
}

fn power_rule(n: i32) -> Option<Expr> {
    if n == -1 {
        return Some(Expr::x().ln_of());
    }
    let m = n.checked_add(1)?;
    let coeff = NNReal::from_log(1.0 / m as f64).ok()?;
    Some(Expr::Const(coeff).odot(Expr::x().npow(m)))
}

fn exp_entry(inner: &Expr) -> Option<Expr> {
    // e^x = e^{e ⊙ x}
    if is_var(inner) {
        return Some(inner.clone().exp_of());
    }
    match inner {
        // e^{a ⊙ x}
        Expr::ODot(a, x) if is_var(x) => {
            let a = konst(a)?;
            let inv = a.inv().ok()?;
            Some(Expr::Const(inv).odot(inner.clone().exp_of()))
        }
        // e^{r x²} with x² = e² ⊙ x
        Expr::OPlus(l, r) => {
            let (rc, sq) = match (konst(l), konst(r)) {
                (Some(c), _) => (c, &**r),
                (_, Some(c)) => (c, &**l),
                _ => return None,
            };
            match sq {
                Expr::ODot(two, x) if is_var(x) && konst(two).map(|c| c.log()) == Some(2.0) => {
                    let half = rc.ominus(NNReal::from_value(2.0).ok()?).ok()?;
                    Some(Expr::Const(half).oplus(sq.clone()).exp_of())
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// A function whose NN derivative is identically `1` is constant.
fn constant_on_grid(e: &Expr) -> Option<Expr> {
    let d = e.derivative(VAR);
    let all_one = (0..CONSTANCY_GRID).all(|i| {
        let u = -4.0 + 8.0 * i as f64 / (CONSTANCY_GRID - 1) as f64;
        NNReal::from_log(u)
            .ok()
            .and_then(|x| d.eval(x).ok())
            .is_some_and(|v| v.log().abs() <= 1e-12)
    });
    if !all_one {
        return None;
    }
    let k = e.eval(NNReal::ONE).ok()?;
    Some(linear_in_x(k))
}
