//! The action functional, the Euler–Lagrange residual and the first
//! variation.

use std::fmt;
use std::io::Write;

use super::lagrangian::Arg;
use super::problem::{Curve, Path, VariationalProblem};
use super::variation::{make_variation, Variation};
use crate::analysis::deriv::conj_log_derivative;
use crate::analysis::quad::adaptive_simpson;
use crate::error::{NNError, Result};
use crate::expr::Expr;
use crate::function::NNFunction;
use crate::real::NNReal;

/// Log-step for differentiating the action along a variation.
const VARIATION_STEP: f64 = 1e-2;

fn inadmissible() -> NNError {
    NNError::Domain("path does not match the problem's interval and boundary values".into())
}

/// `ℱ[y] = ∫̃ₐᵇ L(x, y, ỹ) d̃x`.
///
/// For functions `ỹ` is the (symbolic or numeric) NN derivative and the
/// integral is adaptive to `tol`; for paths the node slopes are used and
/// the integral is the trapezoidal rule in `u = ln x`.
pub fn functional_eval<'a>(
    p: &VariationalProblem,
    y: impl Into<Curve<'a>>,
    tol: f64,
) -> Result<NNReal> {
    let l = &p.lagrangian;
    match y.into() {
        Curve::Function(f) => {
            let breaks: Vec<f64> = f.breakpoints().iter().map(|b| b.log()).collect();
            let q = adaptive_simpson(
                |u| {
                    let x = NNReal::from_log(u)?;
                    l.lambda(u, f.eval(x)?.log(), f.deriv_at(x)?.log())
                },
                p.a.log(),
                p.b.log(),
                tol,
                &breaks,
            )?;
            NNReal::from_log(q.value)
        }
        Curve::Path(path) => {
            if !path.is_admissible_for(p) {
                return Err(inadmissible());
            }
            let slopes = path.slopes();
            let n = path.n();
            let mut sum = 0.0;
            for i in 0..=n {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                sum += w * l.lambda(path.node_log(i), path.logs()[i], slopes[i])?;
            }
            NNReal::from_log(sum * path.h())
        }
    }
}

/// `d(L̃_y, d̃/d̃x L̃_ỹ)` along `y` at `x`; 1 where the Euler–Lagrange
/// equation holds.
///
/// For a path `x` must be a grid node.
pub fn el_residual<'a>(p: &VariationalProblem, y: impl Into<Curve<'a>>, x: NNReal) -> Result<NNReal> {
    match y.into() {
        Curve::Function(f) => NNReal::from_log(function_residual(p, f, x)?),
        Curve::Path(path) => {
            let i = path.node_index(x).ok_or_else(|| {
                NNError::InvalidParameter(format!("{x} is not a node of the path"))
            })?;
            NNReal::from_log(el_residual_profile(p, path)?[i])
        }
    }
}

fn function_residual(p: &VariationalProblem, f: &NNFunction, x: NNReal) -> Result<f64> {
    let l = &p.lagrangian;
    let u = x.log();
    let y = f.eval(x)?.log();
    let dy = f.deriv_at(x)?.log();
    let (ly, _) = l.gradient(u, y, dy)?;
    let total = match (l.expr(), f.expr()) {
        (Some(_), Some(_)) => {
            let ddy = f.derivative().deriv_at(x)?.log();
            let h = l.hessian(u, y, dy)?;
            h.pu + h.yp * dy + h.pp * ddy
        }
        _ => {
            let q = |t: f64| {
                let xt = NNReal::from_log(t)?;
                Ok(l.gradient(t, f.eval(xt)?.log(), f.deriv_at(xt)?.log())?.1)
            };
            conj_log_derivative(q, u, None)?.0
        }
    };
    Ok((ly - total).abs())
}

/// Log residuals `|Λ_Y − dΛ_P/du|` at every node of `path`.
///
/// `Λ_P` is taken at element midpoints (mean value, difference slope) and
/// differenced across each node; at the two ends a second-order one-sided
/// stencil over the first three midpoints is used. `Λ_Y` uses the node
/// slopes of [`Path::slopes`].
pub fn el_residual_profile(p: &VariationalProblem, path: &Path) -> Result<Vec<f64>> {
    let l = &p.lagrangian;
    let (n, h) = (path.n(), path.h());
    if n < 3 {
        return Err(NNError::InvalidParameter(
            "residual profile needs at least three intervals".into(),
        ));
    }
    let y = path.logs();
    let slopes = path.slopes();
    let q = (0..n)
        .map(|i| {
            let um = 0.5 * (path.node_log(i) + path.node_log(i + 1));
            Ok(l.gradient(um, 0.5 * (y[i] + y[i + 1]), (y[i + 1] - y[i]) / h)?.1)
        })
        .collect::<Result<Vec<f64>>>()?;
    (0..=n)
        .map(|i| {
            let dq = if i == 0 {
                (-2.0 * q[0] + 3.0 * q[1] - q[2]) / h
            } else if i == n {
                (2.0 * q[n - 1] - 3.0 * q[n - 2] + q[n - 3]) / h
            } else {
                (q[i] - q[i - 1]) / h
            };
            let ly = l.gradient(path.node_log(i), y[i], slopes[i])?.0;
            Ok((ly - dq).abs())
        })
        .collect()
}

/// A symbolic Euler–Lagrange equation `lhs = 1` over `x`, `y`, `yd`, `ydd`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm {
    pub lhs: Expr,
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 1", self.lhs)
    }
}

/// `d̃/d̃x L̃_ỹ ⊖ L̃_y = 1` with the total derivative expanded by the chain
/// rule; `None` for opaque Lagrangians.
pub fn el_reduced_form(p: &VariationalProblem) -> Option<ReducedForm> {
    let l = &p.lagrangian;
    let ly = l.partial_expr(Arg::Y)?;
    let lp = l.partial_expr(Arg::Yd)?;
    let total = lp
        .derivative("x")
        .oplus(lp.derivative("y").odot(Expr::var("yd")))
        .oplus(lp.derivative("yd").odot(Expr::var("ydd")));
    Some(ReducedForm {
        lhs: total.ominus(ly).simplify(),
    })
}

/// NN derivative at `ε = 1` of `ε ↦ ℱ[y ⊕ ε ⊙ h]`.
pub fn first_variation<'a>(
    p: &VariationalProblem,
    y: impl Into<Curve<'a>>,
    h: &NNFunction,
    tol: f64,
) -> Result<NNReal> {
    let y = y.into();
    if let Curve::Path(path) = y {
        if !path.is_admissible_for(p) {
            return Err(inadmissible());
        }
    }
    // validates the endpoint values of h
    Variation::new(h.clone(), NNReal::ONE, p.a, p.b)?;
    let phi = |s: f64| -> Result<f64> {
        let v = Variation::new(h.clone(), NNReal::from_log(s)?, p.a, p.b)?;
        match y {
            Curve::Function(f) => Ok(functional_eval(p, &make_variation(f, &v)?, tol)?.log()),
            Curve::Path(path) => Ok(functional_eval(p, &make_variation(path, &v)?, tol)?.log()),
        }
    };
    let (d, _) = conj_log_derivative(phi, 0.0, Some(VARIATION_STEP))?;
    NNReal::from_log(d)
}

/// Writes `path` as CSV with columns `x,y,y_log,el_residual_log`.
pub fn write_solution_csv<W: Write>(p: &VariationalProblem, path: &Path, out: W) -> Result<()> {
    let residuals = el_residual_profile(p, path)?;
    let io = |e: csv::Error| NNError::Input(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "y_log", "el_residual_log"]).map_err(io)?;
    for (i, r) in residuals.iter().enumerate() {
        let y = path.logs()[i];
        w.write_record([
            path.node_log(i).exp().to_string(),
            y.exp().to_string(),
            y.to_string(),
            r.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| NNError::Input(e.to_string()))
}
