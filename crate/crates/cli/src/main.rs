//! `stepwise`: transform, evaluate, check and benchmark step-indexed
//! definitions from a program file.

mod render;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use stepwise_core::exec::{self, ExecConfig, Mode, DEFAULT_BIG, DEFAULT_DOMAIN_CAP, DEFAULT_SAFETY_CAP};
use stepwise_core::interp::Engine;
use stepwise_core::surface::parse_program;
use stepwise_core::totality::check_total;
use stepwise_core::value::Value;
use stepwise_core::verify::{check_all, CheckPlan, CheckReport};
use stepwise_core::Error;

use render::Out;

#[derive(Parser)]
#[command(name = "stepwise", version, about = "Step-indexed definitions of partial recursive functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generated definitions and equations.
    Transform { program: PathBuf, function: Option<String> },
    /// Evaluate the exported function on integer arguments.
    #[command(allow_negative_numbers = true)]
    Eval {
        program: PathBuf,
        function: String,
        #[arg(value_parser = parse_int)]
        args: Vec<BigInt>,
    },
    /// Run the property checks; exits 1 on any failure.
    Check { program: PathBuf, function: Option<String> },
    /// Step counts of one evaluation in every execution mode.
    #[command(allow_negative_numbers = true)]
    Bench {
        program: PathBuf,
        function: String,
        #[arg(value_parser = parse_int)]
        args: Vec<BigInt>,
    },
    /// Check the program's totality claims; exits 1 on any failure.
    Total { program: PathBuf, function: Option<String> },
}

#[derive(Args)]
struct Flags {
    /// Index handed to the indexed executable [default: 2^61-1]
    #[arg(long, global = true)]
    big: Option<u64>,
    /// Recursion depth bound [default: 10000000; 1000000 for check and total]
    #[arg(long, global = true)]
    safety_cap: Option<u64>,
    /// Largest index tried by the domain witness search
    #[arg(long, global = true, default_value_t = DEFAULT_DOMAIN_CAP)]
    domain_cap: u64,
    /// Random index instances for check
    #[arg(long, global = true, default_value_t = CheckPlan::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Per-argument inclusive ranges, e.g. -1..3,-1..6
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: Option<Grid>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    MachineReadable,
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("`{s}` is not an integer"))
}

#[derive(Clone)]
struct Grid(Vec<RangeInclusive<i64>>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let bound = |b: &str| b.trim().parse::<i64>().map_err(|_| format!("bad grid bound `{b}`"));
            match part.split_once("..") {
                Some((lo, hi)) => Ok(bound(lo)?..=bound(hi)?),
                None => bound(part).map(|v| v..=v),
            }
        })
        .collect::<Result<_, _>>()
        .map(Grid)
}

/// Exit status: failed checks, or an error to report.
enum Failure {
    Checks,
    Error(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Error(s)
    }
}

fn context(path: &Path, e: impl Into<Error>) -> Failure {
    match e.into() {
        // Parse errors carry their own line and column.
        Error::Parse(p) => Failure::Error(format!("{}:{p}", path.display())),
        other => Failure::Error(format!("{}: {other}", path.display())),
    }
}

fn load(path: &Path) -> Result<Engine, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    let program = parse_program(&text).map_err(|e| context(path, e))?;
    Engine::new(program).map_err(|e| context(path, e))
}

impl Flags {
    fn exec_config(&self) -> Result<ExecConfig, Failure> {
        ExecConfig::new(self.big.unwrap_or(DEFAULT_BIG), self.safety_cap.unwrap_or(DEFAULT_SAFETY_CAP), self.domain_cap)
            .map_err(Failure::Error)
    }

    fn plan(&self, arity: usize) -> CheckPlan {
        let grid = self.grid.clone().map(|g| g.0).unwrap_or_else(|| CheckPlan::default_grid(arity));
        CheckPlan {
            random_samples: self.samples,
            seed: self.seed,
            domain_cap: self.domain_cap,
            safety_cap: self.safety_cap.unwrap_or(CheckPlan::DEFAULT_SAFETY_CAP),
            big: self.big.unwrap_or(DEFAULT_BIG),
            ..CheckPlan::with_grid(grid)
        }
    }
}

/// The named function, or every function in program order.
fn selected(engine: &Engine, path: &Path, function: &Option<String>) -> Result<Vec<String>, Failure> {
    match function {
        Some(f) if engine.function(f).is_none() => {
            Err(Failure::Error(format!("{}: no function `{f}`", path.display())))
        }
        Some(f) => Ok(vec![f.clone()]),
        None => Ok(engine.transforms().iter().map(|t| t.source.name.clone()).collect()),
    }
}

fn values(args: &[BigInt]) -> Vec<Value> {
    args.iter().cloned().map(Value::from).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let flags = &cli.flags;
    let mut out = Out::new(flags.format == Format::MachineReadable);
    match &cli.command {
        Command::Transform { program, function } => {
            let engine = load(program)?;
            for f in selected(&engine, program, function)? {
                out.transform(engine.transform(&f).expect("selected"));
            }
        }
        Command::Eval { program, function, args } => {
            let engine = load(program)?;
            let v =
                exec::run(&engine, function, &values(args), &flags.exec_config()?).map_err(|e| context(program, e))?;
            out.value(function, &values(args), &v);
        }
        Command::Bench { program, function, args } => {
            let engine = load(program)?;
            let cfg = flags.exec_config()?;
            let args = values(args);
            let rows: Vec<_> =
                Mode::ALL.iter().map(|&mode| (mode, exec::count_steps(mode, &engine, function, &args, &cfg))).collect();
            // Lookup and arity errors are the same in every mode.
            if let Some((
                _,
                Err(e @ (stepwise_core::EvalError::UnknownFunction(_) | stepwise_core::EvalError::Arity { .. })),
            )) = rows.first()
            {
                return Err(context(program, e.clone()));
            }
            out.bench(function, &args, &rows);
            if rows.iter().any(|(_, r)| r.is_err()) {
                return Err(Failure::Error(format!("{}: evaluation failed in some mode", program.display())));
            }
        }
        Command::Check { program, function } => {
            let engine = load(program)?;
            let mut report = CheckReport::default();
            for f in selected(&engine, program, function)? {
                let plan = flags.plan(engine.function(&f).expect("selected").params.len());
                report.extend(check_all(&engine, &f, &plan).map_err(|e| context(program, e))?);
            }
            out.report(&report);
            if !report.passed() {
                return Err(Failure::Checks);
            }
        }
        Command::Total { program, function } => {
            let engine = load(program)?;
            let specs: Vec<_> = engine
                .program()
                .totality_specs
                .iter()
                .filter(|s| function.as_ref().is_none_or(|f| &s.fname == f))
                .cloned()
                .collect();
            if specs.is_empty() {
                return Err(Failure::Error(format!("{}: no def::total forms to check", program.display())));
            }
            let mut report = CheckReport::default();
            for spec in &specs {
                let plan = flags.plan(spec.params.len());
                report.extend(check_total(&engine, spec, &plan).map_err(|e| context(program, e))?);
            }
            out.report(&report);
            if !report.passed() {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("-1..3,-1..6").unwrap().0, vec![-1..=3, -1..=6]);
        assert_eq!(parse_grid("4").unwrap().0, vec![4..=4]);
        assert!(parse_grid("a..3").is_err());
    }

    #[test]
    fn integer_arguments() {
        assert_eq!(parse_int("-12").unwrap(), BigInt::from(-12));
        assert!(parse_int("1.5").is_err());
    }
}
