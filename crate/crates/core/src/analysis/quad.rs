//! Adaptive Simpson quadrature on the real line.

use crate::error::{NNError, Result};

/// Default absolute tolerance for log-space integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 4;
/// Integrand evaluations allowed before the integral is declared unresolved.
const MAX_EVALS: usize = 1 << 21;
/// Relative rounding level below which panel differences are noise.
const ROUNDING: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel error estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct State<'f, F> {
    f: &'f mut F,
    evals: usize,
    err: f64,
    failed: bool,
    exhausted: bool,
    /// Accumulated rounding level of accepted panels.
    floor: f64,
}

impl<F: FnMut(f64) -> Result<f64>> State<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(NNError::Domain(format!("integrand is not finite at {x}")));
        }
        Ok(v)
    }

    fn panel(&mut self, a: f64, b: f64, fa: f64, fb: f64) -> Result<Panel> {
        let m = 0.5 * (a + b);
        let fm = self.eval(m)?;
        Ok(Panel {
            a,
            m,
            b,
            fa,
            fm,
            fb,
            whole: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        })
    }

    fn recurse(&mut self, p: Panel, tol: f64, depth: u32) -> Result<f64> {
        let left = self.panel(p.a, p.m, p.fa, p.fm)?;
        let right = self.panel(p.m, p.b, p.fm, p.fb)?;
        let delta = left.whole + right.whole - p.whole;
        // an absolute tolerance below rounding level of the panel is unreachable
        let noise = ROUNDING * (left.whole.abs() + right.whole.abs());
        let tol = tol.max(noise);
        if self.evals >= MAX_EVALS {
            self.exhausted = true;
        }
        if delta.abs() <= 15.0 * tol
            || depth >= MAX_DEPTH
            || self.exhausted
            || (p.b - p.a).abs() < 1e-13
        {
            if delta.abs() > 15.0 * tol {
                self.failed = true;
            }
            self.err += delta.abs() / 15.0;
            self.floor += noise;
            return Ok(left.whole + right.whole + delta / 15.0);
        }
        Ok(self.recurse(left, tol / 2.0, depth + 1)? + self.recurse(right, tol / 2.0, depth + 1)?)
    }
}

/// Integrates `f` over `[a, b]` (either orientation) to absolute tolerance
/// `tol`, splitting first at `breaks` (points strictly inside are used,
/// others ignored).
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64, breaks: &[f64]) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(NNError::InvalidParameter(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut knots: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut edges = vec![lo];
    edges.extend(knots);
    edges.push(hi);
    // Uniform pre-splitting of every segment keeps narrow features visible.
    let mut panels = Vec::new();
    for w in edges.windows(2) {
        for k in 0..INITIAL_PANELS {
            let t0 = w[0] + (w[1] - w[0]) * k as f64 / INITIAL_PANELS as f64;
            let t1 = w[0] + (w[1] - w[0]) * (k + 1) as f64 / INITIAL_PANELS as f64;
            panels.push((t0, t1));
        }
    }
    let total = hi - lo;

    let mut st = State {
        f: &mut f,
        evals: 0,
        err: 0.0,
        failed: false,
        exhausted: false,
        floor: 0.0,
    };
    let mut value = 0.0;
    for (p0, p1) in panels {
        let share = tol * (p1 - p0) / total;
        let f0 = st.eval(p0)?;
        let f1 = st.eval(p1)?;
        let panel = st.panel(p0, p1, f0, f1)?;
        value += st.recurse(panel, share, 0)?;
    }
    // Depth-limited panels are tolerated when the total estimate still fits.
    if st.exhausted || (st.failed && st.err > tol + st.floor) {
        return Err(NNError::Quadrature {
            tol,
            estimate: st.err,
        });
    }
    Ok(QuadResult {
        value: sign * value,
        error_estimate: st.err,
        evaluations: st.evals,
    })
}
