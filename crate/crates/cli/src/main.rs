//! `subspace`: command-line access to every toolkit operation.
//!
//! Exit codes: 0 on success (or a criterion that holds), 2 when the
//! criterion a subcommand answers is false, 1 on any error.

mod commands;
mod parse;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subspace_core::exactnum::DEFAULT_FACTOR_BOUND;
use subspace_core::surface::DEFAULT_MAX_ITER;
use subspace_core::verify::{criteria, DEFAULT_SEED};
use subspace_core::{Error, Result};

use commands::{approx, powers, surf, words};
use report::{Builder, Format, RunReport};

#[derive(Debug, Parser)]
#[command(name = "subspace", version, about = "Exact computations around the subspace theorem")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Iteration cap for the weight solvers.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Trial-division bound for factorizations.
    #[arg(long, global = true, default_value_t = DEFAULT_FACTOR_BOUND)]
    factor_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Subword complexity ρ(n).
    Complexity(words::ComplexityArgs),
    /// Two disjoint equal subwords.
    Repetition(words::RepetitionArgs),
    /// Run a finite automaton with output.
    Automaton(words::AutomatonArgs),
    /// Digit patterns, periodic approximations and subspace data.
    Abl(approx::AblArgs),
    /// Evaluate and combine power sums.
    PsEval(powers::EvalArgs),
    /// Exact q-th root of a power sum.
    PsRoot(powers::RootArgs),
    /// Progression on which a power sum is a q-th power.
    PsPisot(powers::PisotArgs),
    /// Universal Hilbert set candidate test.
    PsUhs(powers::UhsArgs),
    /// Dominant root test for Gaussian rationals.
    PsDominant(powers::DominantArgs),
    /// F(gamma_i) > a_i at every index.
    SurfCz(surf::CzArgs),
    /// The Autissier inequality at every index.
    SurfAut(surf::AutArgs),
    /// Search for weights satisfying the Autissier inequality.
    SurfLevin(surf::LevinArgs),
    /// Balanced integer weights by fixed-point iteration.
    SurfWeights(surf::WeightsArgs),
    /// Basis adapted to two filtrations.
    SurfFiltration(surf::FiltrationArgs),
    /// Riemann-Roch budget for a curve with r points at infinity.
    CurveBudget(surf::BudgetArgs),
    /// Valuations, absolute values and heights.
    Heights(approx::HeightsArgs),
    /// Run the reproduction suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Run only these criteria (comma-separated ids).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Complexity(_) => "complexity",
            Command::Repetition(_) => "repetition",
            Command::Automaton(_) => "automaton",
            Command::Abl(_) => "abl",
            Command::PsEval(_) => "ps-eval",
            Command::PsRoot(_) => "ps-root",
            Command::PsPisot(_) => "ps-pisot",
            Command::PsUhs(_) => "ps-uhs",
            Command::PsDominant(_) => "ps-dominant",
            Command::SurfCz(_) => "surf-cz",
            Command::SurfAut(_) => "surf-aut",
            Command::SurfLevin(_) => "surf-levin",
            Command::SurfWeights(_) => "surf-weights",
            Command::SurfFiltration(_) => "surf-filtration",
            Command::CurveBudget(_) => "curve-budget",
            Command::Heights(_) => "heights",
            Command::VerifyPaper(_) => "verify-paper",
        }
    }
}

fn verify(args: &VerifyArgs, seed: u64, b: &mut Builder) -> Result<()> {
    b.input("seed", seed.to_string());
    b.input("only", format!("{:?}", args.only));
    if let Some(bad) = args.only.iter().find(|id| !criteria().iter().any(|c| c.id == **id)) {
        return Err(Error::PreconditionFailed(format!("no criterion {bad}")));
    }
    let mut all = true;
    for c in criteria() {
        if !args.only.is_empty() && !args.only.contains(&c.id) {
            continue;
        }
        let outcome = c.run(seed);
        eprintln!("{}", outcome.line());
        all &= outcome.passed;
        b.verdict(format!("criterion {}", c.id), &outcome);
    }
    b.note("timings vary between runs; verdicts do not");
    b.criterion(all);
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<RunReport> {
    let mut b = Builder::new(cli.command.name());
    match &cli.command {
        Command::Complexity(a) => words::complexity_cmd(a, &mut b),
        Command::Repetition(a) => words::repetition_cmd(a, &mut b),
        Command::Automaton(a) => words::automaton_cmd(a, &mut b),
        Command::Abl(a) => approx::abl_cmd(a, &mut b),
        Command::PsEval(a) => powers::eval_cmd(a, &mut b),
        Command::PsRoot(a) => powers::root_cmd(a, &mut b),
        Command::PsPisot(a) => powers::pisot_cmd(a, &mut b),
        Command::PsUhs(a) => powers::uhs_cmd(a, cli.factor_bound, &mut b),
        Command::PsDominant(a) => powers::dominant_cmd(a, &mut b),
        Command::SurfCz(a) => surf::cz_cmd(a, &mut b),
        Command::SurfAut(a) => surf::aut_cmd(a, &mut b),
        Command::SurfLevin(a) => surf::levin_cmd(a, cli.max_iter, &mut b),
        Command::SurfWeights(a) => surf::weights_cmd(a, cli.max_iter, &mut b),
        Command::SurfFiltration(a) => surf::filtration_cmd(a, cli.seed, &mut b),
        Command::CurveBudget(a) => surf::budget_cmd(a, &mut b),
        Command::Heights(a) => approx::heights_cmd(a, cli.factor_bound, &mut b),
        Command::VerifyPaper(a) => verify(a, cli.seed, &mut b),
    }?;
    Ok(b.finish())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.format).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
