//! Symbolic NN differentiation.
//!
//! The derivative of a node `v` with respect to a variable `t` is
//! `exp(∂ ln v / ∂ ln t)`. With the sum, difference, product and chain rules
//! the recursion below covers every node kind:
//!
//! | node            | derivative                                   |
//! |-----------------|----------------------------------------------|
//! | `c`             | `1`                                          |
//! | `t`             | `e`                                          |
//! | `f ⊕ g`         | `f̃ ⊕ g̃`                                      |
//! | `f ⊖ g`         | `f̃ ⊖ g̃`                                      |
//! | `f ⊙ g`         | `(f̃ ⊙ g) ⊕ (f ⊙ g̃)`                          |
//! | `f ⊘ g`         | `((f̃ ⊙ g) ⊖ (f ⊙ g̃)) ⊘ g^{{2}}`              |
//! | `u^{{n}}`       | `eⁿ ⊙ u^{{n-1}} ⊙ ũ`                         |
//! | `e^{u}`         | `e^{u} ⊙ ũ`                                  |
//! | `ln(u)`         | `ũ ⊘ u`                                      |
//! | `cos_e(u)`      | `(1 ⊖ sin_e(u)) ⊙ ũ`                         |
//! | `sin_e(u)`      | `cos_e(u) ⊙ ũ`                               |

use super::Expr;
use crate::real::NNReal;

impl Expr {
    /// Unsimplified NN partial derivative with respect to `var`.
    pub fn derivative_raw(&self, var: &str) -> Expr {
        let one = || Expr::Const(NNReal::ZERO);
        match self {
            Expr::Const(_) => one(),
            Expr::Var(name) => {
                if name == var {
                    Expr::Const(NNReal::ONE)
                } else {
                    one()
                }
            }
            Expr::OPlus(f, g) => f.derivative_raw(var).oplus(g.derivative_raw(var)),
            Expr::OMinus(f, g) => f.derivative_raw(var).ominus(g.derivative_raw(var)),
            Expr::ODot(f, g) => {
                let left = f.derivative_raw(var).odot((**g).clone());
                let right = (**f).clone().odot(g.derivative_raw(var));
                left.oplus(right)
            }
            Expr::OSlash(f, g) => {
                let num = f
                    .derivative_raw(var)
                    .odot((**g).clone())
                    .ominus((**f).clone().odot(g.derivative_raw(var)));
                num.oslash((**g).clone().npow(2))
            }
            Expr::NNPow(u, n) => {
                if *n == 0 {
                    return one();
                }
                let coeff = Expr::Const(NNReal::from_log(*n as f64).unwrap_or(NNReal::ONE));
                coeff
                    .odot((**u).clone().npow(n - 1))
                    .odot(u.derivative_raw(var))
            }
            Expr::ExpOf(u) => self.clone().odot(u.derivative_raw(var)),
            Expr::LnOf(u) => u.derivative_raw(var).oslash((**u).clone()),
            Expr::CosE(u) => one()
                .ominus((**u).clone().sin_e())
                .odot(u.derivative_raw(var)),
            Expr::SinE(u) => (**u).clone().cos_e().odot(u.derivative_raw(var)),
        }
    }

    /// Simplified NN partial derivative with respect to `var`.
    pub fn derivative(&self, var: &str) -> Expr {
        self.derivative_raw(var).simplify()
    }
}
