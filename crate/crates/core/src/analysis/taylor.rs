//! NN Taylor polynomials
//! `Pₙ(x) = ⊕ₖ e^{1/k!} ⊙ f̃⁽ᵏ⁾(a) ⊙ (x ⊖ a)^{{k}}` and the classical series
//! of `eˣ` and `cos_e` written in NN form.

use super::deriv::{log_derivative_n, nn_deriv_n};
use crate::error::{NNError, Result};
use crate::function::NNFunction;
use crate::real::{nn_sum, NNReal};

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorPolynomial {
    pub center: NNReal,
    pub degree: u32,
    /// `coefficients[k] = f̃⁽ᵏ⁾(center)`.
    pub coefficients: Vec<NNReal>,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Builds the degree-`n` Taylor polynomial of `f` around `a`.
pub fn taylor_poly(f: &NNFunction, a: NNReal, n: u32) -> Result<TaylorPolynomial> {
    let coefficients = (0..=n)
        .map(|k| nn_deriv_n(f, k, a).map(|d| d.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(TaylorPolynomial {
        center: a,
        degree: n,
        coefficients,
    })
}

impl TaylorPolynomial {
    /// `Pₙ(x)`.
    pub fn eval(&self, x: NNReal) -> Result<NNReal> {
        let offset = x.ominus(self.center)?;
        let terms = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let k = k as u32;
                c.scale(1.0 / factorial(k))?.odot(offset.pow(k as i32)?)
            })
            .collect::<Result<Vec<_>>>()?;
        nn_sum(terms)
    }
}

pub fn taylor_eval(p: &TaylorPolynomial, x: NNReal) -> Result<NNReal> {
    p.eval(x)
}

/// Lagrange remainder bound in log space:
/// `sup_c |ln f̃⁽ⁿ⁺¹⁾(c)| / (n+1)! · |ln(x ⊖ a)|ⁿ⁺¹`, with the supremum
/// taken over `grid_points` log-uniform points between `a` and `x`.
pub fn taylor_remainder_bound(
    f: &NNFunction,
    a: NNReal,
    x: NNReal,
    n: u32,
    grid_points: usize,
) -> Result<f64> {
    if grid_points < 2 {
        return Err(NNError::InvalidParameter("grid needs at least two points".into()));
    }
    let (lo, hi) = (a.log().min(x.log()), a.log().max(x.log()));
    let mut sup: f64 = 0.0;
    for i in 0..grid_points {
        let u = lo + (hi - lo) * i as f64 / (grid_points - 1) as f64;
        let d = match f.expr() {
            Some(_) => nn_deriv_n(f, n + 1, NNReal::from_log(u)?)?.value.log(),
            None => log_derivative_n(|t| f.eval_log_at(t), n + 1, u)?.0,
        };
        sup = sup.max(d.abs());
    }
    Ok(sup / factorial(n + 1) * (x.log() - a.log()).abs().powi(n as i32 + 1))
}

/// Partial NN sum `⊕_{k=0}^{n} e^{1/k!} ⊙ x^{{k}}` of the series of `eˣ`.
pub fn exp_series(x: NNReal, n: u32) -> Result<NNReal> {
    nn_sum(
        (0..=n)
            .map(|k| x.pow(k as i32)?.scale(1.0 / factorial(k)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Partial NN sum `⊕_{k=0}^{n} e^{(-1)ᵏ/(2k)!} ⊙ x^{{2k}}` of the series of
/// `cos_e`.
pub fn cos_e_series(x: NNReal, n: u32) -> Result<NNReal> {
    nn_sum(
        (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                x.pow(2 * k as i32)?.scale(sign / factorial(2 * k))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn ex(l: f64) -> NNReal {
        NNReal::from_log(l).unwrap()
    }

    #[test]
    fn first_order_poly_of_exp() {
        let f = NNFunction::from_expr(parse("exp(x)").unwrap());
        let p = taylor_poly(&f, NNReal::ZERO, 1).unwrap();
        assert_eq!(p.coefficients, vec![NNReal::ONE, NNReal::ONE]);
        // P₁(x) = e ⊕ x
        for l in [-0.5, 0.1, 0.9] {
            let x = ex(l);
            let expect = NNReal::ONE.oplus(x).unwrap();
            assert!(p.eval(x).unwrap().approx_eq(expect, 1e-14));
        }
    }

    #[test]
    fn degree_zero_is_constant() {
        let f = NNFunction::from_expr(parse("sine(x) (+) 3").unwrap());
        let a = ex(0.7);
        let p = taylor_poly(&f, a, 0).unwrap();
        for l in [-1.0, 0.0, 2.0] {
            assert_eq!(p.eval(ex(l)).unwrap(), f.eval(a).unwrap());
        }
    }

    #[test]
    fn remainder_bound_covers_actual_error() {
        let f = NNFunction::from_expr(parse("sine(x)").unwrap());
        let a = ex(0.2);
        let x = ex(1.1);
        for n in 1..6 {
            let p = taylor_poly(&f, a, n).unwrap();
            let err = (p.eval(x).unwrap().log() - f.eval(x).unwrap().log()).abs();
            let bound = taylor_remainder_bound(&f, a, x, n, 200).unwrap();
            assert!(err <= bound * (1.0 + 1e-9) + 1e-15, "n={n}: {err} > {bound}");
        }
    }

    #[test]
    fn series_converge() {
        for l in [-1.0, 0.5, 1.0] {
            let x = ex(l);
            let target = ex(l.exp());
            assert!(exp_series(x, 25).unwrap().approx_eq(target, 1e-12));
            let target = ex(l.cos());
            assert!(cos_e_series(x, 12).unwrap().approx_eq(target, 1e-12));
        }
    }
}
