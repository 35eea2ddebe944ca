//! `nncalc`: bigeometric calculus from the command line.

mod commands;
mod demo;
mod error;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{
    DiffArgs, EvalArgs, IntegrateArgs, OptimizeArgs, ResidualArgs, Run, SolveArgs, TaylorArgs,
};
use crate::demo::DemoArgs;
use crate::error::CliResult;
use crate::report::OutputArgs;

#[derive(Parser)]
#[command(name = "nncalc", version, about = "Bigeometric (NN) calculus from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in x.
    Eval(EvalArgs),
    /// Symbolic and numeric NN derivatives.
    Diff(DiffArgs),
    /// Antiderivatives and definite NN integrals.
    Integrate(IntegrateArgs),
    /// NN Taylor polynomials with remainder bounds.
    Taylor(TaylorArgs),
    /// NN gradient descent.
    Optimize(OptimizeArgs),
    /// Euler-Lagrange residual of a candidate curve.
    Residual(ResidualArgs),
    /// Solve a variational problem.
    Solve(SolveArgs),
    /// Reproduce the worked examples and report each check.
    DemoPaper(DemoArgs),
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Eval(a) => &a.output,
            Command::Diff(a) => &a.output,
            Command::Integrate(a) => &a.output,
            Command::Taylor(a) => &a.output,
            Command::Optimize(a) => &a.output,
            Command::Residual(a) => &a.output,
            Command::Solve(a) => &a.output,
            Command::DemoPaper(a) => &a.output,
        }
    }

    fn run(&self) -> CliResult<Run> {
        let scale = self.output().scale();
        match self {
            Command::Eval(a) => commands::eval(a, scale),
            Command::Diff(a) => commands::diff(a, scale),
            Command::Integrate(a) => commands::integrate(a, scale),
            Command::Taylor(a) => commands::taylor(a, scale),
            Command::Optimize(a) => commands::optimize(a, scale),
            Command::Residual(a) => commands::residual(a, scale),
            Command::Solve(a) => commands::solve(a, scale),
            Command::DemoPaper(a) => demo::demo_paper(a, scale),
        }
    }
}

fn emit(cmd: &Command, run: &Run) -> CliResult<()> {
    let out = cmd.output();
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            run.report.render(out.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            run.report.render(out.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.command.run().and_then(|run| {
        emit(&cli.command, &run)?;
        Ok(run)
    });
    match result {
        Ok(Run { failure: None, .. }) => ExitCode::SUCCESS,
        Ok(Run { failure: Some(e), .. }) | Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
