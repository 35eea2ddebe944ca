//! NN derivatives.
//!
//! With `u = ln x` and `F(u) = ln f(eᵘ)` the defining limit
//! `lim_{h→1} (f(x ⊕ h) ⊖ f(x)) ⊘ h` equals `exp(F′(u))`, and the n-th NN
//! derivative is `exp(F⁽ⁿ⁾(u))`. Three engines are provided: symbolic
//! (through [`Expr::derivative`]), the limit quotient itself, and
//! finite differences of the conjugate `F`.

use crate::error::{NNError, Result};
use crate::expr::Expr;
use crate::function::NNFunction;
use crate::real::NNReal;

/// Default log-space step of the conjugation engine.
pub const DEFAULT_H_LOG: f64 = 1e-3;
/// Agreement tolerance used to flag non-converged numeric derivatives.
pub const DEFAULT_DERIV_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivMethod {
    Symbolic,
    Limit,
    Conjugation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeResult {
    pub value: NNReal,
    pub method: DerivMethod,
    /// Log-space error estimate, zero for symbolic results.
    pub estimated_error: f64,
    pub converged: bool,
}

impl DerivativeResult {
    fn numeric(log: f64, method: DerivMethod, err: f64) -> Result<Self> {
        Ok(DerivativeResult {
            value: NNReal::from_log(log)?,
            method,
            estimated_error: err,
            converged: err <= DEFAULT_DERIV_TOL * log.abs().max(1.0),
        })
    }
}

/// Symbolic NN derivative of a single-variable expression in `x`.
pub fn nn_deriv_symbolic(e: &Expr) -> Expr {
    e.derivative("x")
}

/// Central difference of `g` at `u` with two Richardson levels; returns
/// the extrapolated slope and an error estimate.
pub(crate) fn conj_log_derivative<G>(g: G, u: f64, h: Option<f64>) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let h = h.unwrap_or(DEFAULT_H_LOG);
    let central = |h: f64| -> Result<f64> { Ok((g(u + h)? - g(u - h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(h / 2.0)?;
    let d4 = central(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    Ok((r2, (r2 - r1).abs()))
}

/// Conjugation engine: `exp(F′(ln x))` by central differences of
/// `F(u) = ln f(eᵘ)` with log-step `h_log`.
pub fn nn_deriv_conj(f: &NNFunction, x: NNReal, h_log: f64) -> Result<DerivativeResult> {
    if !(h_log > 0.0) {
        return Err(NNError::InvalidParameter(format!(
            "log step must be positive, got {h_log}"
        )));
    }
    let (d, err) = conj_log_derivative(|u| f.eval_log_at(u), x.log(), Some(h_log))?;
    DerivativeResult::numeric(d, DerivMethod::Conjugation, err)
}

/// Default NN step sequence `h_k = exp(2^{-k})`, `k = 3..=20`.
pub fn default_limit_steps() -> Vec<NNReal> {
    (3..=20)
        .map(|k| NNReal::from_log(2f64.powi(-k)).expect("finite"))
        .collect()
}

/// Limit engine: evaluates the quotient `(f(x ⊕ h) ⊖ f(x)) ⊘ h` along a
/// step sequence decreasing to the NN zero, applies one Richardson
/// extrapolation to consecutive quotients and keeps the most stable pair.
pub fn nn_deriv_limit(
    f: &NNFunction,
    x: NNReal,
    steps: Option<&[NNReal]>,
) -> Result<DerivativeResult> {
    let default;
    let steps = match steps {
        Some(s) => s,
        None => {
            default = default_limit_steps();
            &default
        }
    };
    if steps.len() < 3 {
        return Err(NNError::InvalidParameter(
            "the limit engine needs at least three steps".into(),
        ));
    }
    for w in steps.windows(2) {
        if !(w[1] < w[0]) {
            return Err(NNError::InvalidParameter(
                "steps must be strictly decreasing".into(),
            ));
        }
    }
    if steps.iter().any(|h| h.log() <= 0.0) {
        return Err(NNError::InvalidParameter("steps must exceed 1".into()));
    }

    let fx = f.eval(x)?;
    let mut quotients = Vec::with_capacity(steps.len());
    for &h in steps {
        let q = f.eval(x.oplus(h)?)?.ominus(fx)?.oslash(h)?;
        quotients.push((h.log(), q.log()));
    }
    // Forward quotients carry an O(δ) error; eliminate it pairwise.
    let extrapolated: Vec<f64> = quotients
        .windows(2)
        .map(|w| {
            let ((d0, q0), (d1, q1)) = (w[0], w[1]);
            (d0 * q1 - d1 * q0) / (d0 - d1)
        })
        .collect();
    let (best, err) = extrapolated
        .windows(2)
        .map(|w| (w[1], (w[1] - w[0]).abs()))
        .fold((f64::NAN, f64::INFINITY), |acc, cur| {
            if cur.1 < acc.1 {
                cur
            } else {
                acc
            }
        });
    DerivativeResult::numeric(best, DerivMethod::Limit, err)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// n-th derivative of `g` at `u` by the central n-th difference with one
/// Richardson level; returns value and error estimate.
pub(crate) fn log_derivative_n<G>(g: G, n: u32, u: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    if n == 0 {
        return Ok((g(u)?, 0.0));
    }
    let diff = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let offset = (n as f64 / 2.0 - j as f64) * h;
            acc += sign * binomial(n, j) * g(u + offset)?;
        }
        Ok(acc / h.powi(n as i32))
    };
    let h = 2.0 * f64::EPSILON.powf(1.0 / (n as f64 + 4.0));
    let coarse = diff(h)?;
    let fine = diff(h / 2.0)?;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok((value, (value - fine).abs()))
}

/// n-th NN derivative `f̃⁽ⁿ⁾(x)`; `n = 0` returns `f(x)`.
///
/// Expressions are differentiated symbolically; other functions use nested
/// conjugation (a central n-th difference of `F`). Numeric results for
/// `n ≥ 3` are noisy and say so through `estimated_error`.
pub fn nn_deriv_n(f: &NNFunction, n: u32, x: NNReal) -> Result<DerivativeResult> {
    if n == 0 {
        return Ok(DerivativeResult {
            value: f.eval(x)?,
            method: DerivMethod::Symbolic,
            estimated_error: 0.0,
            converged: true,
        });
    }
    if let Some(e) = f.expr() {
        let mut d = e.clone();
        for _ in 0..n {
            d = nn_deriv_symbolic(&d);
        }
        return Ok(DerivativeResult {
            value: d.eval(x)?,
            method: DerivMethod::Symbolic,
            estimated_error: 0.0,
            converged: true,
        });
    }
    let (v, err) = log_derivative_n(|u| f.eval_log_at(u), n, x.log())?;
    DerivativeResult::numeric(v, DerivMethod::Conjugation, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn ex(l: f64) -> NNReal {
        NNReal::from_log(l).unwrap()
    }
    fn func(text: &str) -> NNFunction {
        NNFunction::from_expr(parse(text).unwrap())
    }
    fn opaque(text: &str) -> NNFunction {
        let e = parse(text).unwrap();
        NNFunction::from_fn(move |x| e.eval(x))
    }

    #[test]
    fn limit_engine_examples() {
        let r = nn_deriv_limit(&func("x"), NNReal::from_value(7.0).unwrap(), None).unwrap();
        assert!(r.value.approx_eq(NNReal::ONE, 1e-8), "{r:?}");
        assert!(r.converged);
        let r = nn_deriv_limit(&func("exp(x)"), NNReal::from_value(2.0).unwrap(), None).unwrap();
        assert!(r.value.approx_eq(ex(2.0), 1e-7), "{r:?}");
        let r = nn_deriv_limit(&func("cose(x)"), NNReal::ZERO, None).unwrap();
        assert!(r.value.approx_eq(NNReal::ZERO, 1e-8), "{r:?}");
    }

    #[test]
    fn limit_engine_rejects_bad_steps() {
        let f = func("x");
        let bad = [ex(0.1), ex(0.2), ex(0.05)];
        assert!(nn_deriv_limit(&f, NNReal::ONE, Some(&bad)).is_err());
        let below = [ex(0.1), ex(-0.2), ex(-0.3)];
        assert!(nn_deriv_limit(&f, NNReal::ONE, Some(&below)).is_err());
    }

    #[test]
    fn conjugation_engine_examples() {
        let r = nn_deriv_conj(&opaque("ln(x)"), ex(2.0), DEFAULT_H_LOG).unwrap();
        assert!(r.value.approx_eq(ex(0.5), 1e-10), "{r:?}");
        let r = nn_deriv_conj(&opaque("npow(x, 3)"), NNReal::ONE, DEFAULT_H_LOG).unwrap();
        assert!(r.value.approx_eq(ex(3.0), 1e-10), "{r:?}");
        // classical square x² = e² ⊙ x
        let sq = NNFunction::from_fn(|x| NNReal::from_value(x.value() * x.value()));
        for l in [-2.0, 0.0, 1.5] {
            let r = nn_deriv_conj(&sq, ex(l), DEFAULT_H_LOG).unwrap();
            assert!(r.value.approx_eq(ex(2.0), 1e-10), "{r:?}");
        }
        assert!(nn_deriv_conj(&sq, NNReal::ONE, 0.0).is_err());
    }

    #[test]
    fn higher_order() {
        let f = func("exp(x)");
        assert_eq!(nn_deriv_n(&f, 0, ex(0.3)).unwrap().value, f.eval(ex(0.3)).unwrap());
        let r = nn_deriv_n(&f, 2, NNReal::ZERO).unwrap();
        assert!(r.value.approx_eq(NNReal::ONE, 1e-14));
        let r = nn_deriv_n(&func("cose(x)"), 2, NNReal::ZERO).unwrap();
        assert!(r.value.approx_eq(ex(-1.0), 1e-14));
        let r = nn_deriv_n(&opaque("cose(x)"), 2, NNReal::ZERO).unwrap();
        assert!(r.value.approx_eq(ex(-1.0), 1e-8), "{r:?}");
        assert_eq!(r.method, DerivMethod::Conjugation);
        let r = nn_deriv_n(&opaque("sine(x)"), 3, NNReal::ZERO).unwrap();
        assert!(r.value.approx_eq(ex(-1.0), 1e-6), "{r:?}");
    }
}
