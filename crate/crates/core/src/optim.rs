//! Static optimization in the NN field: balls, descent directions,
//! stationarity and a fixed-step NN gradient method.

use std::io::Write;

use crate::error::{NNError, Result};
use crate::function::NNFunction;
use crate::real::NNReal;

/// Log-tolerance under which `f̃(x)` counts as the NN zero.
const FLAT_TOL: f64 = 1e-12;

/// Default stationarity tolerance on `|ln f̃(x)|`.
pub const DEFAULT_STATIONARITY_TOL: f64 = 1e-8;

/// The closed ball `{x : d(x, center) ≤ radius}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: NNReal,
    pub radius: NNReal,
}

impl Ball {
    pub fn new(center: NNReal, radius: NNReal) -> Result<Self> {
        if radius.log() <= 0.0 {
            return Err(NNError::InvalidParameter(format!(
                "ball radius must exceed 1, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }
}

pub fn in_ball(x: NNReal, b: &Ball) -> bool {
    x.dist(b.center) <= b.radius
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentReport {
    pub direction: NNReal,
    /// `f̃(x) ⊙ direction`.
    pub directional_slope: NNReal,
    pub is_descent: bool,
}

/// The steepest direction `d = 1 ⊖ f̃(x)` and its slope `f̃(x) ⊙ d`, which
/// is below 1 whenever `f̃(x) ≠ 1`.
pub fn descent_direction(f: &NNFunction, x: NNReal) -> Result<DescentReport> {
    let df = f.deriv_at(x)?;
    if df.log().abs() <= FLAT_TOL {
        return Ok(DescentReport {
            direction: NNReal::ZERO,
            directional_slope: NNReal::ZERO,
            is_descent: false,
        });
    }
    let direction = NNReal::ZERO.ominus(df)?;
    let directional_slope = df.odot(direction)?;
    Ok(DescentReport {
        direction,
        directional_slope,
        is_descent: directional_slope < NNReal::ZERO,
    })
}

/// True iff `f(x ⊕ ε ⊙ d) < f(x)` for every `ε` of `eps_grid`, a strictly
/// decreasing sequence above 1.
pub fn empirical_descent_check(
    f: &NNFunction,
    x: NNReal,
    d: NNReal,
    eps_grid: &[NNReal],
) -> Result<bool> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| e.log() <= 0.0) {
        return Err(NNError::InvalidParameter(
            "epsilon grid must be non-empty and above 1".into(),
        ));
    }
    if eps_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(NNError::InvalidParameter(
            "epsilon grid must be strictly decreasing".into(),
        ));
    }
    let fx = f.eval(x)?;
    for &eps in eps_grid {
        if f.eval(x.oplus(eps.odot(d)?)?)? >= fx {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `d(f̃(x), 1)`; equals 1 exactly at stationary points.
pub fn stationarity_residual(f: &NNFunction, x: NNReal) -> Result<NNReal> {
    Ok(f.deriv_at(x)?.abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub x_log: f64,
    pub f_log: f64,
    pub residual_log: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentRun {
    pub x: NNReal,
    /// One row per visited iterate, starting with `x₀`.
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub converged: bool,
}

impl DescentRun {
    /// Writes the trace as CSV with header `iter,x_log,f_log,residual_log`.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| NNError::Input(e.to_string());
        w.write_record(["iter", "x_log", "f_log", "residual_log"])
            .map_err(io)?;
        for r in &self.trace {
            w.write_record([
                r.iter.to_string(),
                r.x_log.to_string(),
                r.f_log.to_string(),
                r.residual_log.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| NNError::Input(e.to_string()))
    }
}

/// Fixed-step NN gradient method `xₖ₊₁ = xₖ ⊕ η ⊙ (1 ⊖ f̃(xₖ))`.
///
/// Stops once `|ln f̃(xₖ)| ≤ tol` or after `max_iter` steps; the latter
/// leaves `converged` false. In logs this is classical gradient descent on
/// `t ↦ ln f(eᵗ)` with step `ln η`.
pub fn nn_gradient_descent(
    f: &NNFunction,
    x0: NNReal,
    eta: NNReal,
    max_iter: usize,
    tol: f64,
) -> Result<DescentRun> {
    if eta.log() <= 0.0 {
        return Err(NNError::InvalidParameter(format!(
            "step must exceed 1, got {eta}"
        )));
    }
    if !(tol > 0.0) {
        return Err(NNError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut x = x0;
    let mut trace = Vec::new();
    for iter in 0..=max_iter {
        let df = f.deriv_at(x)?;
        trace.push(TraceRow {
            iter,
            x_log: x.log(),
            f_log: f.eval(x)?.log(),
            residual_log: df.log().abs(),
        });
        if df.log().abs() <= tol {
            return Ok(DescentRun {
                x,
                trace,
                iterations: iter,
                converged: true,
            });
        }
        if iter == max_iter {
            break;
        }
        x = x.oplus(eta.odot(NNReal::ZERO.ominus(df)?)?)?;
    }
    Ok(DescentRun {
        x,
        trace,
        iterations: max_iter,
        converged: false,
    })
}
