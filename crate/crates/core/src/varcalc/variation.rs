//! Multiplicative variations `y ⊕ ε ⊙ h`, bump functions and the
//! fundamental-lemma probe.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::problem::Path;
use crate::analysis::integral::nn_integral_odot;
use crate::error::{NNError, Result};
use crate::function::NNFunction;
use crate::real::NNReal;

/// Endpoint tolerance (log space) for `h(a) = h(b) = 1`.
const ENDPOINT_TOL: f64 = 1e-12;
/// Bump-weighted mean of `ln f` above which the probe reports `f ≢ 1`.
const PROBE_THRESHOLD: f64 = 1e-8;

/// A variation direction `h`, pinned to 1 at `a` and `b`, with its size `ε`.
#[derive(Clone, Debug)]
pub struct Variation {
    pub h: NNFunction,
    pub epsilon: NNReal,
}

impl Variation {
    pub fn new(h: NNFunction, epsilon: NNReal, a: NNReal, b: NNReal) -> Result<Self> {
        for end in [a, b] {
            let v = h.eval(end)?;
            if v.log().abs() > ENDPOINT_TOL {
                return Err(NNError::InvalidParameter(format!(
                    "variation must equal 1 at the endpoints, h({end}) = {v}"
                )));
            }
        }
        Ok(Variation { h, epsilon })
    }
}

/// Curves that can be perturbed pointwise by a variation.
pub trait Perturb: Sized {
    fn perturbed(&self, v: &Variation) -> Result<Self>;
}

impl Perturb for NNFunction {
    fn perturbed(&self, v: &Variation) -> Result<Self> {
        let s = v.epsilon.log();
        let (y, h) = (self.clone(), v.h.clone());
        let (dy, dh) = (self.clone(), v.h.clone());
        let mut breaks = self.breakpoints().to_vec();
        breaks.extend_from_slice(v.h.breakpoints());
        Ok(NNFunction::with_derivative(
            move |x| NNReal::from_log(y.eval(x)?.log() + s * h.eval(x)?.log()),
            move |x| NNReal::from_log(dy.deriv_at(x)?.log() + s * dh.deriv_at(x)?.log()),
        )
        .with_breakpoints(breaks))
    }
}

impl Perturb for Path {
    fn perturbed(&self, v: &Variation) -> Result<Self> {
        let s = v.epsilon.log();
        let n = self.n();
        let logs = (0..=n)
            .map(|i| {
                let h = v.h.eval_log_at(self.node_log(i))?;
                let h = if i == 0 || i == n { 0.0 } else { h };
                Ok(self.logs()[i] + s * h)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_logs(logs))
    }
}

/// `y ⊕ ε ⊙ h`, pointwise.
pub fn make_variation<T: Perturb>(y: &T, v: &Variation) -> Result<T> {
    y.perturbed(v)
}

/// `h(x) = (x ⊖ x₁) ⊙ (x₂ ⊖ x)` on `[x₁, x₂]` and 1 elsewhere.
pub fn bump(x1: NNReal, x2: NNReal) -> Result<NNFunction> {
    if !(x1 < x2) {
        return Err(NNError::InvalidParameter(format!(
            "bump needs x1 < x2, got {x1} and {x2}"
        )));
    }
    let (u1, u2) = (x1.log(), x2.log());
    let inside = move |u: f64| u > u1 && u < u2;
    Ok(NNFunction::with_derivative(
        move |x| {
            let u = x.log();
            NNReal::from_log(if inside(u) { (u - u1) * (u2 - u) } else { 0.0 })
        },
        move |x| {
            let u = x.log();
            NNReal::from_log(if inside(u) { u1 + u2 - 2.0 * u } else { 0.0 })
        },
    )
    .with_breakpoints(vec![x1, x2]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeVerdict {
    /// `∫̃ f ⊙ bump(x₁, x₂)` differs from 1.
    Detected {
        x1: NNReal,
        x2: NNReal,
        integral: NNReal,
    },
    ConsistentWithOne,
}

/// Tests `f ≡ 1` on `[a, b]` against `trials` random bumps.
///
/// Each trial draws a log-uniform subinterval and integrates `f ⊙ bump`;
/// `f ≢ 1` is reported when the bump-weighted mean of `ln f` exceeds
/// `1e-8` in magnitude.
pub fn fundamental_lemma_probe(
    f: &NNFunction,
    a: NNReal,
    b: NNReal,
    trials: usize,
    seed: u64,
) -> Result<ProbeVerdict> {
    if !(a < b) {
        return Err(NNError::InvalidParameter("probe needs a < b".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ua, ub) = (a.log(), b.log());
    for _ in 0..trials {
        let (s, t) = (rng.gen_range(ua..ub), rng.gen_range(ua..ub));
        let (u1, u2) = (s.min(t), s.max(t));
        if u2 - u1 <= 1e-9 * (ub - ua) {
            continue;
        }
        let (x1, x2) = (NNReal::from_log(u1)?, NNReal::from_log(u2)?);
        let weight = (u2 - u1).powi(3) / 6.0;
        let integral = nn_integral_odot(f, &bump(x1, x2)?, x1, x2, 1e-3 * PROBE_THRESHOLD * weight)?;
        if (integral.log() / weight).abs() > PROBE_THRESHOLD {
            return Ok(ProbeVerdict::Detected { x1, x2, integral });
        }
    }
    Ok(ProbeVerdict::ConsistentWithOne)
}
