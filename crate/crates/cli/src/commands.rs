//! The computational subcommands.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use nncalc::analysis::{
    nn_antideriv_symbolic, nn_deriv_conj, nn_deriv_limit, nn_deriv_n, nn_integral_detailed,
    taylor_poly, taylor_remainder_bound, DerivativeResult, DEFAULT_H_LOG, DEFAULT_QUAD_TOL,
};
use nncalc::optim::{nn_gradient_descent, DEFAULT_STATIONARITY_TOL};
use nncalc::varcalc::{
    el_residual, el_residual_profile, functional_eval, solve_direct, solve_el_bvp_with,
    BvpOptions, DirectOptions, Lagrangian, Solution, VariationalProblem, HARMONIC_LAGRANGIAN,
};
use nncalc::{parse, Expr, NNError, NNFunction, NNReal};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::report::{num, OutputArgs, Report, Scale, Table};

/// A rendered report plus an optional failure that sets the exit code
/// after the report is written.
pub struct Run {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl From<Report> for Run {
    fn from(report: Report) -> Self {
        Run {
            report,
            failure: None,
        }
    }
}

/// Evaluation points: explicit `--x` values or a log-uniform grid.
#[derive(Args, Clone, Debug)]
pub struct GridArgs {
    /// Evaluation point (repeatable), e.g. `2`, `e`, `e^-1.5`.
    #[arg(long = "x")]
    pub x: Vec<NNReal>,
    /// Left end of a log-uniform grid.
    #[arg(long)]
    pub a: Option<NNReal>,
    /// Right end of a log-uniform grid.
    #[arg(long)]
    pub b: Option<NNReal>,
    /// Number of grid points.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
}

impl GridArgs {
    fn points(&self) -> CliResult<Vec<NNReal>> {
        if !self.x.is_empty() {
            return Ok(self.x.clone());
        }
        match (self.a, self.b) {
            (Some(a), Some(b)) => log_grid(a, b, self.points),
            (None, None) => Ok(Vec::new()),
            _ => Err(invalid("--a and --b must be given together")),
        }
    }
}

fn invalid(msg: &str) -> CliError {
    NNError::InvalidParameter(msg.into()).into()
}

/// `n` log-uniform points from `a` to `b` inclusive.
fn log_grid(a: NNReal, b: NNReal, n: usize) -> CliResult<Vec<NNReal>> {
    if n < 2 {
        return Err(invalid("a grid needs at least two points"));
    }
    if !(a < b) {
        return Err(invalid("a grid needs a < b"));
    }
    let (ua, ub) = (a.log(), b.log());
    (0..n)
        .map(|i| {
            let u = if i == n - 1 {
                ub
            } else {
                ua + (ub - ua) * i as f64 / (n - 1) as f64
            };
            Ok(NNReal::from_log(u)?)
        })
        .collect()
}

fn expression(text: &str) -> CliResult<Expr> {
    Ok(parse(text)?)
}

fn check_tol(tol: f64) -> CliResult<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(invalid("tolerance must be positive"))
    }
}

#[derive(Args, Clone, Debug)]
pub struct EvalArgs {
    /// Expression in x, e.g. `e^2 (*) sine(x)`.
    #[arg(long)]
    pub expr: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn eval(args: &EvalArgs, scale: Scale) -> CliResult<Run> {
    let e = expression(&args.expr)?;
    let points = args.grid.points()?;
    if points.is_empty() {
        return Err(invalid("give --x or --a/--b"));
    }
    let mut r = Report::new("eval");
    r.field("expr", e.pretty());
    let mut rows = Vec::with_capacity(points.len());
    for &x in &points {
        let v = e.eval(x)?;
        if points.len() == 1 {
            r.line(scale.literal(v));
            r.table_in_text = false;
        }
        rows.push(vec![scale.number(x)?, scale.number(v)?]);
    }
    r.table = Some(Table {
        columns: vec![scale.name("x"), scale.name("value")],
        rows,
    });
    Ok(r.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Symbolic,
    Limit,
    Conjugation,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Symbolic => "symbolic",
            Engine::Limit => "limit",
            Engine::Conjugation => "conjugation",
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct DiffArgs {
    #[arg(long)]
    pub expr: String,
    /// Derivative order.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Engine for the numeric table (first order only).
    #[arg(long, value_enum, default_value_t = Engine::Conjugation)]
    pub engine: Engine,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn diff(args: &DiffArgs, scale: Scale) -> CliResult<Run> {
    let e = expression(&args.expr)?;
    let mut d = e.simplify();
    for _ in 0..args.order {
        d = d.derivative("x");
    }
    let mut r = Report::new("diff");
    r.field("expr", e.pretty());
    r.field("order", args.order);
    r.field("derivative", d.pretty());
    r.line(d.pretty());
    let points = args.grid.points()?;
    if points.is_empty() {
        return Ok(r.into());
    }
    let f = NNFunction::from_expr(e);
    let engine = if args.order == 1 { args.engine } else { Engine::Symbolic };
    r.field("engine", engine.name());
    let mut rows = Vec::with_capacity(points.len());
    for &x in &points {
        let res: DerivativeResult = match engine {
            _ if args.order != 1 => nn_deriv_n(&f, args.order, x)?,
            Engine::Symbolic => nn_deriv_n(&f, 1, x)?,
            Engine::Limit => nn_deriv_limit(&f, x, None)?,
            Engine::Conjugation => nn_deriv_conj(&f, x, DEFAULT_H_LOG)?,
        };
        rows.push(vec![
            scale.number(x)?,
            scale.number(res.value)?,
            num(res.estimated_error)?,
        ]);
    }
    r.table = Some(Table {
        columns: vec![scale.name("x"), scale.name("deriv"), "est_error".into()],
        rows,
    });
    Ok(r.into())
}

#[derive(Args, Clone, Debug)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub expr: String,
    /// Look the integrand up in the antiderivative table.
    #[arg(long)]
    pub symbolic: bool,
    /// Lower limit.
    #[arg(long)]
    pub a: Option<NNReal>,
    /// Upper limit.
    #[arg(long)]
    pub b: Option<NNReal>,
    /// Log-space quadrature tolerance.
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn integrate(args: &IntegrateArgs, scale: Scale) -> CliResult<Run> {
    let e = expression(&args.expr)?;
    let mut r = Report::new("integrate");
    r.field("expr", e.pretty());
    if !args.symbolic && args.a.is_none() && args.b.is_none() {
        return Err(invalid("give --symbolic or an interval --a/--b"));
    }
    if args.symbolic {
        match nn_antideriv_symbolic(&e) {
            Some(anti) => {
                r.line(anti.expr.pretty());
                r.field("antiderivative", anti.expr.pretty());
            }
            None => {
                r.line("no antiderivative in the table");
                r.field("antiderivative", Value::Null);
            }
        }
    }
    match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let q = nn_integral_detailed(&NNFunction::from_expr(e), a, b, check_tol(args.tol)?)?;
            let v = NNReal::from_log(q.value)?;
            r.line(scale.literal(v));
            r.field(scale.name("a"), scale.number(a)?);
            r.field(scale.name("b"), scale.number(b)?);
            r.field(scale.name("value"), scale.number(v)?);
            r.field("error_estimate", num(q.error_estimate)?);
        }
        (None, None) => {}
        _ => return Err(invalid("--a and --b must be given together")),
    }
    Ok(r.into())
}

#[derive(Args, Clone, Debug)]
pub struct TaylorArgs {
    #[arg(long)]
    pub expr: String,
    /// Expansion point.
    #[arg(long)]
    pub center: NNReal,
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn taylor(args: &TaylorArgs, scale: Scale) -> CliResult<Run> {
    let e = expression(&args.expr)?;
    let f = NNFunction::from_expr(e.clone());
    let p = taylor_poly(&f, args.center, args.degree)?;
    let mut r = Report::new("taylor");
    r.field("expr", e.pretty());
    r.field(scale.name("center"), scale.number(args.center)?);
    r.field("degree", args.degree);
    let coeffs = p
        .coefficients
        .iter()
        .map(|&c| scale.number(c))
        .collect::<CliResult<Vec<_>>>()?;
    r.field(scale.name("coefficients"), coeffs);
    let literals: Vec<String> = p.coefficients.iter().map(|&c| scale.literal(c)).collect();
    r.line(format!("coefficients: {}", literals.join(" ")));
    let points = args.grid.points()?;
    if !points.is_empty() {
        let mut rows = Vec::with_capacity(points.len());
        for &x in &points {
            rows.push(vec![
                scale.number(x)?,
                scale.number(p.eval(x)?)?,
                scale.number(f.eval(x)?)?,
                num(taylor_remainder_bound(&f, args.center, x, args.degree, 33)?)?,
            ]);
        }
        r.table = Some(Table {
            columns: vec![
                scale.name("x"),
                scale.name("taylor"),
                scale.name("f"),
                "remainder_bound_log".into(),
            ],
            rows,
        });
    }
    Ok(r.into())
}

#[derive(Args, Clone, Debug)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub expr: String,
    /// Starting point.
    #[arg(long)]
    pub x0: NNReal,
    /// Step size, above 1.
    #[arg(long, default_value = "e^0.1")]
    pub eta: NNReal,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Stop once |ln f̃(x)| is at most this.
    #[arg(long, default_value_t = DEFAULT_STATIONARITY_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn optimize(args: &OptimizeArgs, scale: Scale) -> CliResult<Run> {
    let e = expression(&args.expr)?;
    let f = NNFunction::from_expr(e.clone());
    let run = nn_gradient_descent(&f, args.x0, args.eta, args.max_iter, check_tol(args.tol)?)?;
    let last = run.trace.last().expect("trace holds x0");
    let mut r = Report::new("optimize");
    r.field("expr", e.pretty());
    r.field(scale.name("x"), scale.number(run.x)?);
    r.field(scale.name("f"), scale.number(f.eval(run.x)?)?);
    r.field("residual_log", num(last.residual_log)?);
    r.field("iterations", run.iterations);
    r.field("converged", run.converged);
    r.line(format!("x = {}", scale.literal(run.x)));
    r.line(format!("iterations: {}", run.iterations));
    r.line(format!("converged: {}", run.converged));
    let mut rows = Vec::with_capacity(run.trace.len());
    for t in &run.trace {
        let x = NNReal::from_log(t.x_log)?;
        let fx = NNReal::from_log(t.f_log)?;
        rows.push(vec![
            t.iter.into(),
            scale.number(x)?,
            scale.number(fx)?,
            num(t.residual_log)?,
        ]);
    }
    r.table = Some(Table {
        columns: vec![
            "iter".into(),
            scale.name("x"),
            scale.name("f"),
            "residual_log".into(),
        ],
        rows,
    });
    let failure = (!run.converged).then(|| {
        CliError::NotConverged(format!(
            "gradient descent did not reach tolerance {} in {} iterations",
            args.tol, args.max_iter
        ))
    });
    Ok(Run { report: r, failure })
}

/// A variational problem from a file or from flags.
#[derive(Args, Clone, Debug)]
pub struct ProblemArgs {
    /// Problem file (JSON with lagrangian, a, b, ya, yb).
    #[arg(long)]
    pub problem: Option<PathBuf>,
    /// Lagrangian over x, y and yd when no problem file is given.
    #[arg(long, default_value = HARMONIC_LAGRANGIAN)]
    pub lagrangian: String,
    #[arg(long)]
    pub a: Option<NNReal>,
    #[arg(long)]
    pub b: Option<NNReal>,
    #[arg(long)]
    pub ya: Option<NNReal>,
    #[arg(long)]
    pub yb: Option<NNReal>,
}

impl ProblemArgs {
    fn load(&self) -> CliResult<VariationalProblem> {
        if let Some(path) = &self.problem {
            return Ok(VariationalProblem::from_json(&fs::read_to_string(path)?)?);
        }
        match (self.a, self.b, self.ya, self.yb) {
            (Some(a), Some(b), Some(ya), Some(yb)) => Ok(VariationalProblem::new(
                Lagrangian::parse(&self.lagrangian)?,
                a,
                b,
                ya,
                yb,
            )?),
            _ => Err(invalid("give --problem or all of --a, --b, --ya, --yb")),
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct ResidualArgs {
    /// Candidate curve y(x).
    #[arg(long)]
    pub expr: String,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Number of interior log-uniform points.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Log-space tolerance for the functional value.
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn residual(args: &ResidualArgs, scale: Scale) -> CliResult<Run> {
    let p = args.problem.load()?;
    let e = expression(&args.expr)?;
    let y = NNFunction::from_expr(e.clone());
    if args.points == 0 {
        return Err(invalid("need at least one point"));
    }
    let (ua, ub) = (p.a.log(), p.b.log());
    let mut rows = Vec::with_capacity(args.points);
    let mut worst: f64 = 0.0;
    for i in 1..=args.points {
        let x = NNReal::from_log(ua + (ub - ua) * i as f64 / (args.points + 1) as f64)?;
        let res = el_residual(&p, &y, x)?;
        worst = worst.max(res.log());
        rows.push(vec![scale.number(x)?, num(res.log())?]);
    }
    let value = functional_eval(&p, &y, check_tol(args.tol)?)?;
    let (end_a, end_b) = (y.eval(p.a)?, y.eval(p.b)?);
    let mut r = Report::new("residual");
    r.field("expr", e.pretty());
    r.field("max_residual_log", num(worst)?);
    r.field("functional_value_log", num(value.log())?);
    r.field(scale.name("y_at_a"), scale.number(end_a)?);
    r.field(scale.name("y_at_b"), scale.number(end_b)?);
    r.field(scale.name("ya"), scale.number(p.ya)?);
    r.field(scale.name("yb"), scale.number(p.yb)?);
    r.line(format!("max residual (log): {worst:e}"));
    r.line(format!("functional value: {}", scale.literal(value)));
    r.line(format!(
        "y(a) = {} (boundary {}), y(b) = {} (boundary {})",
        scale.literal(end_a),
        scale.literal(p.ya),
        scale.literal(end_b),
        scale.literal(p.yb)
    ));
    r.table = Some(Table {
        columns: vec![scale.name("x"), "residual_log".into()],
        rows,
    });
    Ok(r.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Bvp,
}

#[derive(Args, Clone, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Method::Bvp)]
    pub method: Method,
    /// Number of grid nodes, endpoints included.
    #[arg(long, default_value_t = 201)]
    pub n_nodes: usize,
    /// Solver stopping tolerance (solver default when omitted).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write the summary JSON to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn solve(args: &SolveArgs, scale: Scale) -> CliResult<Run> {
    let p = args.problem.load()?;
    if args.n_nodes < 5 {
        return Err(invalid("need at least 5 nodes"));
    }
    let n = args.n_nodes - 1;
    let sol: Solution = match args.method {
        Method::Direct => {
            let mut opts = DirectOptions::default();
            if let Some(t) = args.tol {
                opts.tol = check_tol(t)?;
            }
            solve_direct(&p, n, &opts)?
        }
        Method::Bvp => {
            let mut opts = BvpOptions::default();
            if let Some(t) = args.tol {
                opts.tol = check_tol(t)?;
            }
            solve_el_bvp_with(&p, n, &opts)?
        }
    };
    let residuals = el_residual_profile(&p, &sol.path)?;
    let worst = residuals[1..residuals.len() - 1]
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let value = functional_eval(&p, &sol.path, DEFAULT_QUAD_TOL)?;

    let mut r = Report::new("solve");
    r.field("method", sol.method.name());
    r.field("n_nodes", sol.path.n() + 1);
    r.field("iterations", sol.iterations);
    r.field("converged", sol.converged);
    r.field("functional_value_log", num(value.log())?);
    r.field("max_residual_log", num(worst)?);
    r.field("solver_residual", num(sol.residual)?);
    r.line(format!("method: {}", sol.method.name()));
    r.line(format!("nodes: {}", sol.path.n() + 1));
    r.line(format!("iterations: {}", sol.iterations));
    r.line(format!("converged: {}", sol.converged));
    r.line(format!("functional value: {}", scale.literal(value)));
    r.line(format!("max residual (log): {worst:e}"));
    if let Some(path) = &args.summary {
        let text = serde_json::to_string_pretty(&r.to_json())
            .map_err(|e| NNError::Input(e.to_string()))?;
        fs::write(path, text + "\n")?;
    }
    let mut rows = Vec::with_capacity(sol.path.n() + 1);
    for (i, (x, y)) in sol.path.nodes().into_iter().zip(sol.path.values()).enumerate() {
        rows.push(vec![num(x.value())?, num(y.value())?, num(y.log())?, num(residuals[i])?]);
    }
    // the rows are the solution file; text and JSON carry the summary
    r.table = Some(Table {
        columns: vec!["x".into(), "y".into(), "y_log".into(), "el_residual_log".into()],
        rows,
    });
    r.table_in_text = false;
    r.table_in_json = false;
    let failure = (!sol.converged).then(|| {
        CliError::NotConverged(format!(
            "{} solver stopped at residual {:e} after {} iterations",
            sol.method.name(),
            sol.residual,
            sol.iterations
        ))
    });
    Ok(Run { report: r, failure })
}
