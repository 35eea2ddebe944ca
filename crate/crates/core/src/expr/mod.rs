//! Expression trees for positive functions.
//!
//! An [`Expr`] is built from NN constants, named variables, the four NN
//! operators and the function inventory `exp`, `ln`, `cos_e`, `sin_e` and
//! NN integer powers. Every node denotes a strictly positive real wherever it
//! is defined. Domain violations surface lazily, at evaluation.

mod deriv;
mod parse;
mod pretty;
mod simplify;

use std::fmt;

use crate::error::{NNError, Result};
use crate::real::NNReal;

pub use parse::{parse, parse_with_vars, LAGRANGIAN_VARS};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(NNReal),
    Var(String),
    OPlus(Box<Expr>, Box<Expr>),
    OMinus(Box<Expr>, Box<Expr>),
    ODot(Box<Expr>, Box<Expr>),
    OSlash(Box<Expr>, Box<Expr>),
    /// NN integer power `u^{{n}}`.
    NNPow(Box<Expr>, i32),
    /// `e^{u}`, classical exponential of the value of `u`.
    ExpOf(Box<Expr>),
    /// `ln(u)`; a positive value only where `u > 1`.
    LnOf(Box<Expr>),
    /// `cos_e(u) = e^{cos(ln u)}`.
    CosE(Box<Expr>),
    /// `sin_e(u) = e^{sin(ln u)}`.
    SinE(Box<Expr>),
}

/// Variable bindings for evaluation.
pub type Env<'a> = [(&'a str, NNReal)];

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn x() -> Expr {
        Expr::var("x")
    }

    pub fn constant(c: NNReal) -> Expr {
        Expr::Const(c)
    }

    pub fn oplus(self, rhs: Expr) -> Expr {
        Expr::OPlus(Box::new(self), Box::new(rhs))
    }

    pub fn ominus(self, rhs: Expr) -> Expr {
        Expr::OMinus(Box::new(self), Box::new(rhs))
    }

    pub fn odot(self, rhs: Expr) -> Expr {
        Expr::ODot(Box::new(self), Box::new(rhs))
    }

    pub fn oslash(self, rhs: Expr) -> Expr {
        Expr::OSlash(Box::new(self), Box::new(rhs))
    }

    pub fn npow(self, n: i32) -> Expr {
        Expr::NNPow(Box::new(self), n)
    }

    pub fn exp_of(self) -> Expr {
        Expr::ExpOf(Box::new(self))
    }

    pub fn ln_of(self) -> Expr {
        Expr::LnOf(Box::new(self))
    }

    pub fn cos_e(self) -> Expr {
        Expr::CosE(Box::new(self))
    }

    pub fn sin_e(self) -> Expr {
        Expr::SinE(Box::new(self))
    }

    /// Evaluates a single-variable expression at `x`.
    pub fn eval(&self, x: NNReal) -> Result<NNReal> {
        self.eval_env(&[("x", x)])
    }

    pub fn eval_env(&self, env: &Env<'_>) -> Result<NNReal> {
        NNReal::from_log(self.eval_log(env)?)
    }

    /// Evaluates and returns the natural log of the value.
    pub fn eval_log(&self, env: &Env<'_>) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => c.log(),
            Expr::Var(name) => env
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.log())
                .ok_or_else(|| NNError::Domain(format!("unbound variable `{name}`")))?,
            Expr::OPlus(l, r) => l.eval_log(env)? + r.eval_log(env)?,
            Expr::OMinus(l, r) => l.eval_log(env)? - r.eval_log(env)?,
            Expr::ODot(l, r) => l.eval_log(env)? * r.eval_log(env)?,
            Expr::OSlash(l, r) => {
                let d = r.eval_log(env)?;
                if d == 0.0 {
                    return Err(NNError::DivisionByOne);
                }
                l.eval_log(env)? / d
            }
            Expr::NNPow(b, n) => {
                let base = b.eval_log(env)?;
                if *n < 0 && base == 0.0 {
                    return Err(NNError::DivisionByOne);
                }
                base.powi(*n)
            }
            Expr::ExpOf(u) => u.eval_log(env)?.exp(),
            Expr::LnOf(u) => {
                let inner = u.eval_log(env)?;
                if inner <= 0.0 {
                    return Err(NNError::Domain(format!(
                        "ln of {} is not positive",
                        inner.exp()
                    )));
                }
                inner.ln()
            }
            Expr::CosE(u) => u.eval_log(env)?.cos(),
            Expr::SinE(u) => u.eval_log(env)?.sin(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NNError::Range(format!("`{self}` overflowed")))
        }
    }

    /// True if `name` occurs anywhere in the tree.
    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(n) => n == name,
            Expr::OPlus(l, r) | Expr::OMinus(l, r) | Expr::ODot(l, r) | Expr::OSlash(l, r) => {
                l.depends_on(name) || r.depends_on(name)
            }
            Expr::NNPow(u, _)
            | Expr::ExpOf(u)
            | Expr::LnOf(u)
            | Expr::CosE(u)
            | Expr::SinE(u) => u.depends_on(name),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) => false,
            Expr::OPlus(l, r) | Expr::OMinus(l, r) | Expr::ODot(l, r) | Expr::OSlash(l, r) => {
                l.is_constant() && r.is_constant()
            }
            Expr::NNPow(u, _)
            | Expr::ExpOf(u)
            | Expr::LnOf(u)
            | Expr::CosE(u)
            | Expr::SinE(u) => u.is_constant(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::OPlus(l, r) | Expr::OMinus(l, r) | Expr::ODot(l, r) | Expr::OSlash(l, r) => {
                1 + l.size() + r.size()
            }
            Expr::NNPow(u, _)
            | Expr::ExpOf(u)
            | Expr::LnOf(u)
            | Expr::CosE(u)
            | Expr::SinE(u) => 1 + u.size(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}
