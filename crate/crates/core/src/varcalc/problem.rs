//! Problems, discrete paths and the problem-file format.

use serde::{Deserialize, Serialize};

use super::lagrangian::Lagrangian;
use crate::error::{NNError, Result};
use crate::function::NNFunction;
use crate::real::NNReal;

/// Minimize `∫̃ₐᵇ L(x, y, ỹ) d̃x` over positive `y` with `y(a) = ya`,
/// `y(b) = yb`.
#[derive(Clone, Debug)]
pub struct VariationalProblem {
    pub lagrangian: Lagrangian,
    pub a: NNReal,
    pub b: NNReal,
    pub ya: NNReal,
    pub yb: NNReal,
}

impl VariationalProblem {
    pub fn new(lagrangian: Lagrangian, a: NNReal, b: NNReal, ya: NNReal, yb: NNReal) -> Result<Self> {
        if !(a < b) {
            return Err(NNError::InvalidParameter(format!(
                "interval needs a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(VariationalProblem {
            lagrangian,
            a,
            b,
            ya,
            yb,
        })
    }

    /// Reads the JSON problem format: `lagrangian` is expression text over
    /// `x`, `y`, `yd`; `a`, `b`, `ya`, `yb` are numbers or literal strings
    /// such as `"e^1.5"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| NNError::Input(e.to_string()))?;
        Self::new(
            Lagrangian::parse(&file.lagrangian)?,
            file.a.value()?,
            file.b.value()?,
            file.ya.value()?,
            file.yb.value()?,
        )
    }

    /// Writes the JSON problem format; fails for opaque Lagrangians.
    pub fn to_json(&self) -> Result<String> {
        let expr = self.lagrangian.expr().ok_or_else(|| {
            NNError::InvalidParameter("only expression Lagrangians can be serialized".into())
        })?;
        let lit = |v: NNReal| Literal::Text(v.to_log_string());
        let file = ProblemFile {
            lagrangian: expr.pretty(),
            a: lit(self.a),
            b: lit(self.b),
            ya: lit(self.ya),
            yb: lit(self.yb),
        };
        serde_json::to_string_pretty(&file).map_err(|e| NNError::Input(e.to_string()))
    }

    /// The log-linear path between the boundary values.
    pub fn initial_path(&self, n: usize) -> Result<Path> {
        let (ya, yb) = (self.ya.log(), self.yb.log());
        let logs = (0..=n)
            .map(|i| ya + (yb - ya) * i as f64 / n as f64)
            .collect();
        Path::from_logs(self.a, self.b, logs)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    lagrangian: String,
    a: Literal,
    b: Literal,
    ya: Literal,
    yb: Literal,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Number(f64),
    Text(String),
}

impl Literal {
    fn value(&self) -> Result<NNReal> {
        match self {
            Literal::Number(v) if *v > 0.0 => NNReal::from_value(*v),
            Literal::Number(v) => Err(NNError::Input(format!("{v} is not positive"))),
            Literal::Text(s) => s.parse(),
        }
    }
}

/// Positive values on the log-uniform grid `uᵢ = ln a + i·h`, stored as
/// logs.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    u_a: f64,
    u_b: f64,
    logs: Vec<f64>,
}

impl Path {
    /// `values[i]` sits at node `i`; at least three nodes.
    pub fn new(a: NNReal, b: NNReal, values: &[NNReal]) -> Result<Self> {
        Self::from_logs(a, b, values.iter().map(|v| v.log()).collect())
    }

    pub fn from_logs(a: NNReal, b: NNReal, logs: Vec<f64>) -> Result<Self> {
        if !(a < b) {
            return Err(NNError::InvalidParameter("path needs a < b".into()));
        }
        if logs.len() < 3 {
            return Err(NNError::InvalidParameter(
                "a path needs at least two intervals".into(),
            ));
        }
        if logs.iter().any(|l| !l.is_finite()) {
            return Err(NNError::Range("path value out of range".into()));
        }
        Ok(Path {
            u_a: a.log(),
            u_b: b.log(),
            logs,
        })
    }

    /// Samples `f` at the `n + 1` nodes.
    pub fn sample(f: &NNFunction, a: NNReal, b: NNReal, n: usize) -> Result<Self> {
        let h = (b.log() - a.log()) / n as f64;
        let logs = (0..=n)
            .map(|i| f.eval_log_at(a.log() + i as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        Self::from_logs(a, b, logs)
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.logs.len() - 1
    }

    /// Log-space grid spacing.
    pub fn h(&self) -> f64 {
        (self.u_b - self.u_a) / self.n() as f64
    }

    pub fn a(&self) -> NNReal {
        NNReal::from_log(self.u_a).expect("finite")
    }

    pub fn b(&self) -> NNReal {
        NNReal::from_log(self.u_b).expect("finite")
    }

    pub fn node_log(&self, i: usize) -> f64 {
        if i == self.n() {
            self.u_b
        } else {
            self.u_a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<NNReal> {
        (0..=self.n())
            .map(|i| NNReal::from_log(self.node_log(i)).expect("finite"))
            .collect()
    }

    pub fn values(&self) -> Vec<NNReal> {
        self.logs
            .iter()
            .map(|&l| NNReal::from_log(l).expect("finite"))
            .collect()
    }

    /// `ln yᵢ`.
    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    /// `ln ỹ` at the nodes: central differences inside, second-order
    /// one-sided differences at the ends.
    pub fn slopes(&self) -> Vec<f64> {
        node_derivative(&self.logs, self.h())
    }

    /// Index of the node at `x`, if `x` is one.
    pub fn node_index(&self, x: NNReal) -> Option<usize> {
        let t = (x.log() - self.u_a) / self.h();
        let i = t.round();
        ((t - i).abs() <= 1e-9 && i >= 0.0 && i as usize <= self.n()).then_some(i as usize)
    }

    /// Piecewise-linear interpolation of `ln y` at log-coordinate `u`.
    pub fn interpolate_log(&self, u: f64) -> f64 {
        let t = ((u - self.u_a) / self.h()).clamp(0.0, self.n() as f64);
        let i = (t.floor() as usize).min(self.n() - 1);
        let w = t - i as f64;
        self.logs[i] * (1.0 - w) + self.logs[i + 1] * w
    }

    pub(crate) fn with_logs(&self, logs: Vec<f64>) -> Path {
        Path {
            u_a: self.u_a,
            u_b: self.u_b,
            logs,
        }
    }

    /// True when the grid spans `[a, b]` and the ends carry `ya`, `yb`.
    pub fn is_admissible_for(&self, p: &VariationalProblem) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(1.0);
        close(self.u_a, p.a.log())
            && close(self.u_b, p.b.log())
            && close(self.logs[0], p.ya.log())
            && close(self.logs[self.n()], p.yb.log())
    }
}

/// Derivative of grid samples: central inside, one-sided second order at
/// the ends.
fn node_derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len() - 1;
    (0..=n)
        .map(|i| {
            if i == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else if i == n {
                (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h)
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// A candidate `y`: a function or a discrete path.
#[derive(Clone, Copy, Debug)]
pub enum Curve<'a> {
    Function(&'a NNFunction),
    Path(&'a Path),
}

impl<'a> From<&'a NNFunction> for Curve<'a> {
    fn from(f: &'a NNFunction) -> Self {
        Curve::Function(f)
    }
}

impl<'a> From<&'a Path> for Curve<'a> {
    fn from(p: &'a Path) -> Self {
        Curve::Path(p)
    }
}
