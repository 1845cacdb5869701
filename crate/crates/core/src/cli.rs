//! Command-line front end. `run` writes to any sink so it can be tested
//! without spawning processes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::channel::{DensityOperator, KrausChannel};
use crate::classical::{
    adaptive_optimum, adaptive_two_step_optimum, nonadaptive_optimum, one_shot_optimum, Prob,
    StochasticChannel,
};
use crate::error::{Error, Result};
use crate::io::{read_channel_file, ChannelData, StochasticData};
use crate::matrix::StateVector;
use crate::quantum::{n_copy_diamond, simulate_strategy, two_step_strategy, DEFAULT_TOL};
use crate::report::{fmt6, reproduction_report};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONVERGENCE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "discrim", version, about = "Quantum and classical channel discrimination")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diamond-norm distance between two Kraus channels (optionally of n parallel copies).
    Diamond {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Optimal discrimination of two stochastic matrices.
    Classical {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Outcome distribution of the two-step adaptive protocol on one channel.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum)]
        second_qubit: SecondQubit,
    },
    /// Recompute every reproduced value and print a pass/fail table.
    VerifyPaper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    OneShot,
    Nonadaptive,
    Adaptive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SecondQubit {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    #[value(name = "+")]
    Plus,
    Mixed,
}

impl SecondQubit {
    pub fn state(self) -> DensityOperator {
        match self {
            Self::Zero => DensityOperator::pure(&StateVector::basis(2, 0)),
            Self::One => DensityOperator::pure(&StateVector::basis(2, 1)),
            Self::Plus => DensityOperator::pure(&StateVector::plus()),
            Self::Mixed => DensityOperator::maximally_mixed(2),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_FAILURE,
    }
}

/// Runs a parsed command, printing results to `out` and errors to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Diamond { a, b, copies, tol } => diamond(&a, &b, copies, tol, out),
        Command::Classical { a, b, mode, n } => classical(&a, &b, mode, n, out),
        Command::Simulate {
            channel,
            second_qubit,
        } => simulate(&channel, second_qubit, out),
        Command::VerifyPaper => verify(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            if let Error::Convergence { primal, dual, .. } = &e {
                let _ = writeln!(out, "value: {}\ndual bound: {}", fmt6(*primal), fmt6(*dual));
            }
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_kraus(path: &Path) -> Result<KrausChannel> {
    match read_channel_file(path)?.channel {
        ChannelData::Kraus(c) => Ok(c),
        ChannelData::Stochastic(_) => Err(Error::Validation(format!(
            "{} holds a stochastic matrix, expected Kraus operators",
            path.display()
        ))),
    }
}

fn load_stochastic(path: &Path) -> Result<StochasticData> {
    match read_channel_file(path)?.channel {
        ChannelData::Stochastic(m) => Ok(m),
        ChannelData::Kraus(_) => Err(Error::Validation(format!(
            "{} holds Kraus operators, expected a stochastic matrix",
            path.display()
        ))),
    }
}

fn diamond(a: &Path, b: &Path, copies: usize, tol: f64, out: &mut dyn Write) -> Result<u8> {
    if !(tol > 0.0) {
        return Err(Error::InvalidValue(format!("tolerance must be positive, got {tol}")));
    }
    let (c0, c1) = (load_kraus(a)?, load_kraus(b)?);
    let r = n_copy_diamond(&c0, &c1, copies, tol)?;
    writeln!(out, "copies: {copies}")?;
    writeln!(out, "value: {}", fmt6(r.value))?;
    writeln!(out, "dual bound: {}", fmt6(r.dual_bound))?;
    writeln!(out, "gap: {:.3e}", r.gap.max(0.0))?;
    writeln!(out, "success: {}", fmt6(r.success_probability()))?;
    Ok(EXIT_OK)
}

fn value_line<P: Prob>(v: &P) -> String {
    match v.exact() {
        Some(e) => format!("{} ({e})", fmt6(v.to_f64())),
        None => fmt6(v.to_f64()),
    }
}

fn classical_generic<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    mode: Mode,
    n: usize,
    out: &mut dyn Write,
) -> Result<u8> {
    match mode {
        Mode::OneShot => {
            let o = one_shot_optimum(m0, m1)?;
            writeln!(out, "value: {}", value_line(&o.value))?;
            writeln!(out, "input: {}", o.input + 1)?;
        }
        Mode::Nonadaptive => {
            let o = nonadaptive_optimum(m0, m1, n)?;
            let inputs: Vec<String> = o.inputs.iter().map(|k| (k + 1).to_string()).collect();
            writeln!(out, "value: {}", value_line(&o.value))?;
            writeln!(out, "inputs: ({})", inputs.join(","))?;
        }
        Mode::Adaptive => {
            let o = adaptive_optimum(m0, m1, n)?;
            writeln!(out, "value: {}", value_line(&o.value))?;
            if n == 2 {
                let p = adaptive_two_step_optimum(m0, m1)?;
                writeln!(out, "policy: {}", p.policy)?;
            }
            writeln!(out, "tree: {}", o.tree)?;
        }
    }
    Ok(EXIT_OK)
}

fn classical(a: &Path, b: &Path, mode: Mode, n: usize, out: &mut dyn Write) -> Result<u8> {
    match (load_stochastic(a)?, load_stochastic(b)?) {
        (StochasticData::Exact(m0), StochasticData::Exact(m1)) => {
            classical_generic::<BigRational>(&m0, &m1, mode, n, out)
        }
        (x, y) => classical_generic(&x.to_f64(), &y.to_f64(), mode, n, out),
    }
}

fn simulate(channel: &Path, second: SecondQubit, out: &mut dyn Write) -> Result<u8> {
    let c = load_kraus(channel)?;
    let s = two_step_strategy(&second.state())?;
    let dist = simulate_strategy(&s, &c)?;
    let parts: Vec<String> = dist.iter().enumerate().map(|(i, p)| format!("{i}: {}", fmt6(*p))).collect();
    writeln!(out, "{}", parts.join(", "))?;
    Ok(EXIT_OK)
}

fn verify(out: &mut dyn Write) -> Result<u8> {
    let report = reproduction_report();
    writeln!(out, "{report}")?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
}
