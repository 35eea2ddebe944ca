//! Numerical solution of the variational problem in conjugate coordinates
//! `u = ln x`, `Y = ln y`.
//!
//! * [`solve_direct`] minimizes the discrete action
//!   `S = h Σᵢ ½[Λ(uᵢ, Yᵢ, Pᵢ) + Λ(uᵢ₊₁, Yᵢ₊₁, Pᵢ)]`, `Pᵢ = (Yᵢ₊₁ − Yᵢ)/h`,
//!   by gradient descent preconditioned with a `Λ_PP`-weighted stiffness
//!   matrix and Armijo backtracking.
//! * [`solve_el_bvp`] applies damped Newton to the conservative collocation
//!   `(q_{i+½} − q_{i−½})/h = Λ_Y(uᵢ, Yᵢ, (Yᵢ₊₁ − Yᵢ₋₁)/2h)` with
//!   `q = Λ_P` at element midpoints, then checks that the linearization is
//!   not resonant.

use super::lagrangian::Lagrangian;
use super::problem::{Path, VariationalProblem};
use crate::error::{NNError, Result};
use crate::linalg::{dot, norm, Tridiagonal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Bvp,
}

impl SolveMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::Direct => "direct",
            SolveMethod::Bvp => "bvp",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub path: Path,
    pub method: SolveMethod,
    pub iterations: usize,
    pub converged: bool,
    /// Final stopping quantity: dual gradient norm (direct) or max
    /// collocation residual (BVP).
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectOptions {
    pub max_iter: usize,
    /// Bound on the preconditioned gradient norm `√(gᵀK⁻¹g)`.
    pub tol: f64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions {
            max_iter: 5000,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BvpOptions {
    pub max_iter: usize,
    /// Bound on the max-norm of the collocation residual.
    pub tol: f64,
}

impl Default for BvpOptions {
    fn default() -> Self {
        BvpOptions {
            max_iter: 100,
            tol: 1e-9,
        }
    }
}

struct Grid {
    u0: f64,
    h: f64,
    n: usize,
}

impl Grid {
    fn of(p: &VariationalProblem, n: usize) -> Self {
        Grid {
            u0: p.a.log(),
            h: (p.b.log() - p.a.log()) / n as f64,
            n,
        }
    }

    fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.h
    }
}

/// Interior unknowns plus pinned ends.
fn full(p: &VariationalProblem, inner: &[f64]) -> Vec<f64> {
    let mut y = Vec::with_capacity(inner.len() + 2);
    y.push(p.ya.log());
    y.extend_from_slice(inner);
    y.push(p.yb.log());
    y
}

fn action(l: &Lagrangian, g: &Grid, y: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for i in 0..g.n {
        let pi = (y[i + 1] - y[i]) / g.h;
        s += l.lambda(g.u(i), y[i], pi)? + l.lambda(g.u(i + 1), y[i + 1], pi)?;
    }
    Ok(0.5 * g.h * s)
}

fn action_gradient(l: &Lagrangian, g: &Grid, y: &[f64]) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; g.n + 1];
    for i in 0..g.n {
        let pi = (y[i + 1] - y[i]) / g.h;
        let (ly0, lp0) = l.gradient(g.u(i), y[i], pi)?;
        let (ly1, lp1) = l.gradient(g.u(i + 1), y[i + 1], pi)?;
        let lp = 0.5 * (lp0 + lp1);
        grad[i] += 0.5 * g.h * ly0 - lp;
        grad[i + 1] += 0.5 * g.h * ly1 + lp;
    }
    Ok(grad[1..g.n].to_vec())
}

fn preconditioner(l: &Lagrangian, g: &Grid, y: &[f64]) -> Result<Tridiagonal> {
    let weights = (0..g.n)
        .map(|i| {
            let pi = (y[i + 1] - y[i]) / g.h;
            let um = g.u(i) + 0.5 * g.h;
            Ok(l.hessian(um, 0.5 * (y[i] + y[i + 1]), pi)?.pp.abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let top = weights.iter().copied().fold(1.0, f64::max);
    let floor = 1e-6 * top;
    let w: Vec<f64> = weights.iter().map(|w| w.max(floor) / g.h).collect();
    let m = g.n - 1;
    let mut k = Tridiagonal::zeros(m);
    for j in 0..m {
        k.diag[j] = w[j] + w[j + 1];
        if j + 1 < m {
            k.upper[j] = -w[j + 1];
            k.lower[j] = -w[j + 1];
        }
    }
    Ok(k)
}

/// Direct method on `n` log-uniform intervals (`n ≥ 8`).
pub fn solve_direct(p: &VariationalProblem, n: usize, opts: &DirectOptions) -> Result<Solution> {
    if n < 8 {
        return Err(NNError::InvalidParameter(format!(
            "direct solver needs at least 8 intervals, got {n}"
        )));
    }
    let l = &p.lagrangian;
    let g = Grid::of(p, n);
    let start = p.initial_path(n)?;
    let mut inner = start.logs()[1..n].to_vec();
    let mut y = full(p, &inner);
    let mut s = action(l, &g, &y)?;
    let mut dual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations <= opts.max_iter {
        let grad = action_gradient(l, &g, &y)?;
        let dir = preconditioner(l, &g, &y)?.solve(&grad)?;
        let gd = dot(&grad, &dir);
        dual = gd.max(0.0).sqrt();
        if dual <= opts.tol {
            converged = true;
            break;
        }
        if iterations == opts.max_iter {
            break;
        }
        let slack = 1e-14 * (1.0 + s.abs());
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = inner.iter().zip(&dir).map(|(v, d)| v - t * d).collect();
            let ty = full(p, &trial);
            if let Ok(ts) = action(l, &g, &ty) {
                if ts <= s - 1e-4 * t * gd + slack {
                    inner = trial;
                    y = ty;
                    s = ts;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
    }
    Ok(Solution {
        path: start.with_logs(y),
        method: SolveMethod::Direct,
        iterations,
        converged,
        residual: dual,
    })
}

fn collocation(l: &Lagrangian, g: &Grid, y: &[f64]) -> Result<(Vec<f64>, Tridiagonal)> {
    let h = g.h;
    // midpoint fluxes and their derivatives in the left/right node values
    let mut q = Vec::with_capacity(g.n);
    let mut dq = Vec::with_capacity(g.n);
    for i in 0..g.n {
        let um = g.u(i) + 0.5 * h;
        let (ym, pm) = (0.5 * (y[i] + y[i + 1]), (y[i + 1] - y[i]) / h);
        q.push(l.gradient(um, ym, pm)?.1);
        let hs = l.hessian(um, ym, pm)?;
        dq.push((0.5 * hs.yp - hs.pp / h, 0.5 * hs.yp + hs.pp / h));
    }
    let m = g.n - 1;
    let mut r = vec![0.0; m];
    let mut jac = Tridiagonal::zeros(m);
    for k in 0..m {
        let i = k + 1;
        let c = (y[i + 1] - y[i - 1]) / (2.0 * h);
        let (ly, _) = l.gradient(g.u(i), y[i], c)?;
        let hs = l.hessian(g.u(i), y[i], c)?;
        r[k] = (q[i] - q[i - 1]) / h - ly;
        jac.diag[k] = (dq[i].0 - dq[i - 1].1) / h - hs.yy;
        if k > 0 {
            jac.lower[k - 1] = -dq[i - 1].0 / h + hs.yp / (2.0 * h);
        }
        if k + 1 < m {
            jac.upper[k] = dq[i].1 / h - hs.yp / (2.0 * h);
        }
    }
    Ok((r, jac))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Smallest eigenvalue modulus of `jac` by inverse iteration.
fn smallest_modulus(jac: &Tridiagonal) -> Result<f64> {
    let m = jac.len();
    let mut v: Vec<f64> = (0..m)
        .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5)
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut mu = f64::INFINITY;
    for _ in 0..60 {
        let w = jac.solve(&v)?;
        let nw = norm(&w);
        if !(nw.is_finite() && nw > 0.0) {
            return Ok(0.0);
        }
        mu = 1.0 / nw;
        v = w.into_iter().map(|x| x / nw).collect();
    }
    Ok(mu)
}

/// Compares the smallest collocation eigenvalue on `n` and `2n`
/// intervals; an extrapolated value indistinguishable from zero marks a
/// resonant problem.
fn resonance_check(l: &Lagrangian, p: &VariationalProblem, path: &Path) -> Result<()> {
    let n = path.n();
    let coarse = Grid::of(p, n);
    let fine = Grid::of(p, 2 * n);
    let fine_y: Vec<f64> = (0..=2 * n)
        .map(|i| path.interpolate_log(fine.u(i)))
        .collect();
    let resonant = |e: NNError| match e {
        NNError::WellPosedness(msg) => NNError::WellPosedness(format!(
            "collocation system is singular ({msg}); the boundary-value problem is resonant"
        )),
        other => other,
    };
    let mu_n = smallest_modulus(&collocation(l, &coarse, path.logs())?.1).map_err(resonant)?;
    let mu_2n = smallest_modulus(&collocation(l, &fine, &fine_y)?.1).map_err(resonant)?;
    let limit = (4.0 * mu_2n - mu_n) / 3.0;
    if limit.abs() <= (mu_n - mu_2n).abs() {
        return Err(NNError::WellPosedness(format!(
            "smallest eigenvalue of the linearized Euler-Lagrange operator tends to zero \
             ({mu_n:.3e} on {n} intervals, {mu_2n:.3e} on {} intervals); \
             the boundary-value problem is resonant and has no unique solution",
            2 * n
        )));
    }
    Ok(())
}

/// Euler–Lagrange collocation with default options.
pub fn solve_el_bvp(p: &VariationalProblem, n: usize) -> Result<Solution> {
    solve_el_bvp_with(p, n, &BvpOptions::default())
}

pub fn solve_el_bvp_with(p: &VariationalProblem, n: usize, opts: &BvpOptions) -> Result<Solution> {
    if n < 4 {
        return Err(NNError::InvalidParameter(format!(
            "collocation needs at least 4 intervals, got {n}"
        )));
    }
    let l = &p.lagrangian;
    let g = Grid::of(p, n);
    let start = p.initial_path(n)?;
    let mut y = start.logs().to_vec();
    let (mut r, mut jac) = collocation(l, &g, &y)?;
    let mut rn = norm(&r);
    let mut iterations = 0;
    let mut converged = max_abs(&r) <= opts.tol;
    while !converged && iterations < opts.max_iter {
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = match jac.solve(&neg) {
            Ok(s) => s,
            Err(NNError::WellPosedness(msg)) => {
                return Err(NNError::WellPosedness(format!(
                    "collocation Jacobian is singular ({msg}); the boundary-value problem is resonant"
                )))
            }
            Err(e) => return Err(e),
        };
        iterations += 1;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = y.clone();
            for (k, s) in step.iter().enumerate() {
                trial[k + 1] += t * s;
            }
            if let Ok((tr, tj)) = collocation(l, &g, &trial) {
                let tn = norm(&tr);
                if tn <= (1.0 - 1e-4 * t) * rn || max_abs(&tr) <= opts.tol {
                    y = trial;
                    r = tr;
                    jac = tj;
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        let small_step = t == 1.0 && max_abs(&step) <= 1e-13 * (1.0 + max_abs(&y));
        converged = max_abs(&r) <= opts.tol || (accepted && small_step);
        if !accepted {
            break;
        }
    }
    let path = start.with_logs(y);
    resonance_check(l, p, &path)?;
    Ok(Solution {
        path,
        method: SolveMethod::Bvp,
        iterations,
        converged,
        residual: max_abs(&r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::NNReal;
    use crate::varcalc::{el_residual_profile, HARMONIC_LAGRANGIAN};
    use std::f64::consts::PI;

    fn ex(l: f64) -> NNReal {
        NNReal::from_log(l).unwrap()
    }
    fn problem(text: &str, b: f64, ya: f64, yb: f64) -> VariationalProblem {
        VariationalProblem::new(Lagrangian::parse(text).unwrap(), NNReal::ZERO, ex(b), ex(ya), ex(yb))
            .unwrap()
    }
    fn max_error(s: &Solution, exact: impl Fn(f64) -> f64) -> f64 {
        (0..=s.path.n())
            .map(|i| (s.path.logs()[i] - exact(s.path.node_log(i))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn collocation_jacobian_matches_differences() {
        let l = Lagrangian::parse("exp(y (*) yd) (+) npow(yd, 4) (*) x").unwrap();
        let p = VariationalProblem::new(l, ex(0.2), ex(1.0), ex(0.3), ex(0.9)).unwrap();
        let g = Grid::of(&p, 6);
        let y: Vec<f64> = (0..=6).map(|i| 0.3 + 0.1 * i as f64 + 0.05 * (i as f64).sin()).collect();
        let (r, jac) = collocation(&p.lagrangian, &g, &y).unwrap();
        let eps = 1e-6;
        for j in 0..5 {
            let mut yp = y.clone();
            yp[j + 1] += eps;
            let (rp, _) = collocation(&p.lagrangian, &g, &yp).unwrap();
            for k in 0..5 {
                let fd = (rp[k] - r[k]) / eps;
                let exact = match k as i64 - j as i64 {
                    0 => jac.diag[k],
                    1 => jac.lower[j],
                    -1 => jac.upper[k],
                    _ => 0.0,
                };
                assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "({k},{j}) {fd} {exact}");
            }
        }
    }

    #[test]
    fn bvp_recovers_closed_form() {
        let p = problem(HARMONIC_LAGRANGIAN, PI / 2.0, 1.0, 2.0);
        let s = solve_el_bvp(&p, 400).unwrap();
        assert!(s.converged);
        let err = max_error(&s, |u| u.cos() + 2.0 * u.sin());
        assert!(err <= 1e-4, "{err}");
        let res = el_residual_profile(&p, &s.path).unwrap();
        let worst = res[1..400].iter().copied().fold(0.0, f64::max);
        assert!(worst <= 1e-4, "{worst} {:?}", &res[..4]);
    }

    #[test]
    fn bvp_second_order_convergence() {
        let p = problem(HARMONIC_LAGRANGIAN, PI / 2.0, 1.0, 2.0);
        let exact = |u: f64| u.cos() + 2.0 * u.sin();
        let e1 = max_error(&solve_el_bvp(&p, 50).unwrap(), exact);
        let e2 = max_error(&solve_el_bvp(&p, 100).unwrap(), exact);
        assert!(e1 / e2 >= 3.0, "{e1} {e2}");
    }

    #[test]
    fn bvp_detects_resonance() {
        let p = problem(HARMONIC_LAGRANGIAN, 2.0 * PI, 1.0, -1.0);
        assert!(matches!(solve_el_bvp(&p, 400), Err(NNError::WellPosedness(_))));
    }

    #[test]
    fn straight_lines() {
        let p = problem("npow(yd, 2)", 2.0, 1.0, 3.0);
        let s = solve_el_bvp(&p, 40).unwrap();
        assert!(max_error(&s, |u| 1.0 + u) < 1e-10);
        let p = problem("npow(yd, 2)", 2.0, 1.0, 1.0);
        let s = solve_direct(&p, 40, &DirectOptions::default()).unwrap();
        assert!(s.converged);
        assert!(max_error(&s, |_| 1.0) < 1e-12);
    }

    #[test]
    fn direct_recovers_closed_form() {
        let p = problem(HARMONIC_LAGRANGIAN, PI / 2.0, 1.0, 2.0);
        let s = solve_direct(&p, 200, &DirectOptions::default()).unwrap();
        assert!(s.converged, "{s:?}");
        let err = max_error(&s, |u| u.cos() + 2.0 * u.sin());
        assert!(err <= 1e-3, "{err}");
        assert!(solve_direct(&p, 7, &DirectOptions::default()).is_err());
    }
}
