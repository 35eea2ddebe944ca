//! Lagrangians `L(x, y, ỹ)` and their NN partial derivatives.
//!
//! The NN partial with respect to an argument is `exp(∂ ln L / ∂ ln arg)`
//! with the other arguments fixed. In conjugate coordinates
//! `Λ(u, Y, P) = ln L(eᵘ, e^Y, e^P)` it is the classical partial of `Λ`.

use std::fmt;
use std::sync::Arc;

use crate::analysis::deriv::{conj_log_derivative, log_derivative_n};
use crate::error::{NNError, Result};
use crate::expr::{parse_with_vars, Expr, LAGRANGIAN_VARS};
use crate::real::NNReal;

type Callable3 = Arc<dyn Fn(NNReal, NNReal, NNReal) -> Result<NNReal> + Send + Sync>;

/// Argument slot of a Lagrangian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arg {
    X,
    Y,
    Yd,
}

impl Arg {
    pub fn var(self) -> &'static str {
        match self {
            Arg::X => "x",
            Arg::Y => "y",
            Arg::Yd => "yd",
        }
    }
}

/// Second partials of `Λ` needed by the solvers and the residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hessian {
    pub yy: f64,
    pub yp: f64,
    pub pp: f64,
    pub pu: f64,
}

#[derive(Clone)]
pub struct Lagrangian {
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Symbolic(Arc<Symbolic>),
    Callable(Callable3),
}

struct Symbolic {
    expr: Expr,
    ly: Expr,
    lp: Expr,
    lyy: Expr,
    lyp: Expr,
    lpp: Expr,
    lpu: Expr,
}

impl Lagrangian {
    /// Wraps an expression over `x`, `y` and `yd`.
    pub fn from_expr(expr: Expr) -> Result<Self> {
        if let Some(bad) = foreign_var(&expr) {
            return Err(NNError::InvalidParameter(format!(
                "Lagrangian may only use x, y and yd, found `{bad}`"
            )));
        }
        let ly = expr.derivative("y");
        let lp = expr.derivative("yd");
        let sym = Symbolic {
            lyy: ly.derivative("y"),
            lyp: ly.derivative("yd"),
            lpp: lp.derivative("yd"),
            lpu: lp.derivative("x"),
            ly,
            lp,
            expr,
        };
        Ok(Lagrangian {
            kind: Kind::Symbolic(Arc::new(sym)),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_expr(parse_with_vars(text, LAGRANGIAN_VARS)?)
    }

    /// An opaque Lagrangian; partials are computed numerically.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(NNReal, NNReal, NNReal) -> Result<NNReal> + Send + Sync + 'static,
    {
        Lagrangian {
            kind: Kind::Callable(Arc::new(f)),
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.kind {
            Kind::Symbolic(s) => Some(&s.expr),
            Kind::Callable(_) => None,
        }
    }

    /// Simplified symbolic NN partial, when the Lagrangian is an expression.
    pub fn partial_expr(&self, which: Arg) -> Option<Expr> {
        match &self.kind {
            Kind::Symbolic(s) => Some(match which {
                Arg::Y => s.ly.clone(),
                Arg::Yd => s.lp.clone(),
                Arg::X => s.expr.derivative("x"),
            }),
            Kind::Callable(_) => None,
        }
    }

    pub fn eval(&self, x: NNReal, y: NNReal, yd: NNReal) -> Result<NNReal> {
        match &self.kind {
            Kind::Symbolic(s) => s.expr.eval_env(&env(x, y, yd)),
            Kind::Callable(f) => f(x, y, yd),
        }
    }

    /// `Λ(u, Y, P)`.
    pub fn lambda(&self, u: f64, y: f64, p: f64) -> Result<f64> {
        let (x, y, yd) = lift(u, y, p)?;
        match &self.kind {
            Kind::Symbolic(s) => s.expr.eval_log(&env(x, y, yd)),
            Kind::Callable(f) => Ok(f(x, y, yd)?.log()),
        }
    }

    /// `(Λ_Y, Λ_P)`.
    pub fn gradient(&self, u: f64, y: f64, p: f64) -> Result<(f64, f64)> {
        match &self.kind {
            Kind::Symbolic(s) => {
                let (x, yv, yd) = lift(u, y, p)?;
                let e = env(x, yv, yd);
                Ok((s.ly.eval_log(&e)?, s.lp.eval_log(&e)?))
            }
            Kind::Callable(_) => Ok((
                self.numeric_first(Arg::Y, u, y, p)?,
                self.numeric_first(Arg::Yd, u, y, p)?,
            )),
        }
    }

    pub fn hessian(&self, u: f64, y: f64, p: f64) -> Result<Hessian> {
        match &self.kind {
            Kind::Symbolic(s) => {
                let (x, yv, yd) = lift(u, y, p)?;
                let e = env(x, yv, yd);
                Ok(Hessian {
                    yy: s.lyy.eval_log(&e)?,
                    yp: s.lyp.eval_log(&e)?,
                    pp: s.lpp.eval_log(&e)?,
                    pu: s.lpu.eval_log(&e)?,
                })
            }
            Kind::Callable(_) => self.numeric_hessian(u, y, p),
        }
    }

    /// `∂Λ/∂arg` by finite differences, regardless of representation.
    pub fn numeric_first(&self, which: Arg, u: f64, y: f64, p: f64) -> Result<f64> {
        let at = coordinate(which, u, y, p);
        let g = |t: f64| {
            let (u, y, p) = replace(which, (u, y, p), t);
            self.lambda(u, y, p)
        };
        Ok(conj_log_derivative(g, at, None)?.0)
    }

    fn numeric_hessian(&self, u: f64, y: f64, p: f64) -> Result<Hessian> {
        let second = |which: Arg| {
            let g = |t: f64| {
                let (u, y, p) = replace(which, (u, y, p), t);
                self.lambda(u, y, p)
            };
            Ok::<f64, NNError>(log_derivative_n(g, 2, coordinate(which, u, y, p))?.0)
        };
        let lp_along = |which: Arg| {
            let g = |t: f64| {
                let (u, y, p) = replace(which, (u, y, p), t);
                self.numeric_first(Arg::Yd, u, y, p)
            };
            Ok::<f64, NNError>(conj_log_derivative(g, coordinate(which, u, y, p), Some(1e-2))?.0)
        };
        Ok(Hessian {
            yy: second(Arg::Y)?,
            pp: second(Arg::Yd)?,
            yp: lp_along(Arg::Y)?,
            pu: lp_along(Arg::X)?,
        })
    }
}

impl fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Symbolic(s) => write!(f, "Lagrangian({})", s.expr),
            Kind::Callable(_) => f.write_str("Lagrangian(<callable>)"),
        }
    }
}

fn foreign_var(e: &Expr) -> Option<String> {
    match e {
        Expr::Const(_) => None,
        Expr::Var(n) => (!LAGRANGIAN_VARS.contains(&n.as_str())).then(|| n.clone()),
        Expr::OPlus(l, r) | Expr::OMinus(l, r) | Expr::ODot(l, r) | Expr::OSlash(l, r) => {
            foreign_var(l).or_else(|| foreign_var(r))
        }
        Expr::NNPow(u, _) | Expr::ExpOf(u) | Expr::LnOf(u) | Expr::CosE(u) | Expr::SinE(u) => {
            foreign_var(u)
        }
    }
}

fn lift(u: f64, y: f64, p: f64) -> Result<(NNReal, NNReal, NNReal)> {
    Ok((NNReal::from_log(u)?, NNReal::from_log(y)?, NNReal::from_log(p)?))
}

fn env(x: NNReal, y: NNReal, yd: NNReal) -> [(&'static str, NNReal); 3] {
    [("x", x), ("y", y), ("yd", yd)]
}

fn coordinate(which: Arg, u: f64, y: f64, p: f64) -> f64 {
    match which {
        Arg::X => u,
        Arg::Y => y,
        Arg::Yd => p,
    }
}

fn replace(which: Arg, (u, y, p): (f64, f64, f64), t: f64) -> (f64, f64, f64) {
    match which {
        Arg::X => (t, y, p),
        Arg::Y => (u, t, p),
        Arg::Yd => (u, y, t),
    }
}

/// NN partial `L̃_arg` at `(x, y, yd)`; symbolic for expression Lagrangians.
pub fn nn_partial(l: &Lagrangian, which: Arg, x: NNReal, y: NNReal, yd: NNReal) -> Result<NNReal> {
    match l.partial_expr(which) {
        Some(e) => e.eval_env(&env(x, y, yd)),
        None => nn_partial_numeric(l, which, x, y, yd),
    }
}

/// NN partial by central differences of `Λ` in the chosen log-coordinate.
pub fn nn_partial_numeric(
    l: &Lagrangian,
    which: Arg,
    x: NNReal,
    y: NNReal,
    yd: NNReal,
) -> Result<NNReal> {
    NNReal::from_log(l.numeric_first(which, x.log(), y.log(), yd.log())?)
}
