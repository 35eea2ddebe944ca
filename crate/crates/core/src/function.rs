//! Evaluatable positive functions of one positive variable.

use std::fmt;
use std::sync::Arc;

use crate::analysis::deriv::conj_log_derivative;
use crate::error::Result;
use crate::expr::Expr;
use crate::real::NNReal;

type Callable = Arc<dyn Fn(NNReal) -> Result<NNReal> + Send + Sync>;

/// A positive function: either an [`Expr`] in a designated variable or an
/// opaque callable, optionally paired with its known NN derivative.
///
/// `breakpoints` lists points where the function or its derivative is not
/// smooth; quadrature splits there.
#[derive(Clone)]
pub struct NNFunction {
    kind: Kind,
    breakpoints: Vec<NNReal>,
}

#[derive(Clone)]
enum Kind {
    Expr { expr: Arc<Expr>, var: String },
    Callable { f: Callable, deriv: Option<Callable> },
}

impl NNFunction {
    pub fn from_expr(expr: Expr) -> Self {
        Self::from_expr_in(expr, "x")
    }

    pub fn from_expr_in(expr: Expr, var: &str) -> Self {
        NNFunction {
            kind: Kind::Expr {
                expr: Arc::new(expr),
                var: var.to_string(),
            },
            breakpoints: Vec::new(),
        }
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(NNReal) -> Result<NNReal> + Send + Sync + 'static,
    {
        NNFunction {
            kind: Kind::Callable {
                f: Arc::new(f),
                deriv: None,
            },
            breakpoints: Vec::new(),
        }
    }

    /// A callable together with its exact NN derivative.
    pub fn with_derivative<F, D>(f: F, deriv: D) -> Self
    where
        F: Fn(NNReal) -> Result<NNReal> + Send + Sync + 'static,
        D: Fn(NNReal) -> Result<NNReal> + Send + Sync + 'static,
    {
        NNFunction {
            kind: Kind::Callable {
                f: Arc::new(f),
                deriv: Some(Arc::new(deriv)),
            },
            breakpoints: Vec::new(),
        }
    }

    /// Same-valued function built from a log-space map `ln x ↦ ln f(x)`.
    pub fn from_log_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self::from_fn(move |x| NNReal::from_log(f(x.log())?))
    }

    pub fn with_breakpoints(mut self, points: Vec<NNReal>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn breakpoints(&self) -> &[NNReal] {
        &self.breakpoints
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.kind {
            Kind::Expr { expr, .. } => Some(expr),
            Kind::Callable { .. } => None,
        }
    }

    pub fn eval(&self, x: NNReal) -> Result<NNReal> {
        match &self.kind {
            Kind::Expr { expr, var } => expr.eval_env(&[(var.as_str(), x)]),
            Kind::Callable { f, .. } => f(x),
        }
    }

    /// `ln f(e^u)`, the conjugate of `f`.
    pub fn eval_log_at(&self, u: f64) -> Result<f64> {
        Ok(self.eval(NNReal::from_log(u)?)?.log())
    }

    /// NN derivative at `x`: exact when symbolic or supplied, otherwise by
    /// the conjugation finite difference.
    pub fn deriv_at(&self, x: NNReal) -> Result<NNReal> {
        match &self.kind {
            Kind::Expr { .. } | Kind::Callable { deriv: Some(_), .. } => {
                self.derivative().eval(x)
            }
            Kind::Callable { deriv: None, .. } => {
                let (d, _) = conj_log_derivative(|u| self.eval_log_at(u), x.log(), None)?;
                NNReal::from_log(d)
            }
        }
    }

    /// The derivative as a function: symbolic for expressions, the supplied
    /// derivative when known, numeric otherwise.
    pub fn derivative(&self) -> NNFunction {
        match &self.kind {
            Kind::Expr { expr, var } => NNFunction {
                kind: Kind::Expr {
                    expr: Arc::new(expr.derivative(var)),
                    var: var.clone(),
                },
                breakpoints: self.breakpoints.clone(),
            },
            Kind::Callable { deriv: Some(d), .. } => NNFunction {
                kind: Kind::Callable {
                    f: d.clone(),
                    deriv: None,
                },
                breakpoints: self.breakpoints.clone(),
            },
            Kind::Callable { deriv: None, .. } => {
                let inner = self.clone();
                NNFunction::from_fn(move |x| inner.deriv_at(x))
                    .with_breakpoints(self.breakpoints.clone())
            }
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.kind, Kind::Expr { .. })
    }
}

impl From<Expr> for NNFunction {
    fn from(e: Expr) -> Self {
        NNFunction::from_expr(e)
    }
}

impl fmt::Debug for NNFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Expr { expr, var } => write!(f, "NNFunction({var} ↦ {expr})"),
            Kind::Callable { deriv, .. } => write!(
                f,
                "NNFunction(<callable>{})",
                if deriv.is_some() { " with derivative" } else { "" }
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn symbolic_and_numeric_derivatives_agree() {
        let sym = NNFunction::from_expr(parse("sine(x) (+) npow(x, 2)").unwrap());
        let opaque = {
            let s = sym.clone();
            NNFunction::from_fn(move |x| s.eval(x))
        };
        for l in [-1.0, 0.3, 1.9] {
            let x = NNReal::from_log(l).unwrap();
            let a = sym.deriv_at(x).unwrap();
            let b = opaque.deriv_at(x).unwrap();
            assert!(a.approx_eq(b, 1e-9), "{a:?} {b:?}");
        }
    }
}
