//! Command-line front end. Exit codes: 0 success or Zero, 1 NonZero or a
//! negative decision, 2 input error, 3 internal-consistency failure.

use std::fs;
use std::io::{self, Read, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::arith::Rat;
use crate::cert;
use crate::expr::{eval, Assignment, EvalError, Equation};
use crate::lemmas::{
    integrality_certificate, jk_decision, nonneg_witness_pell, prime_power_product_value,
    three_squares_rational, JkDecision, LemmaError, PellOutcome, PrimePowerProduct,
};
use crate::poly::{MPoly, PolyError};
use crate::reduction::{
    construct_thm1, construct_thm2, construct_thm3, verify, witness_thm1, witness_thm2,
    ReductionError, ReductionInput, Verdict, VerifyError,
};

#[derive(Debug, Parser)]
#[command(name = "dioforge", version, about = "Exact exponential diophantine toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an equation and print it canonically
    Parse {
        /// Equation file, or `-` for stdin
        file: String,
    },
    /// Evaluate lhs - rhs exactly; exit 0 iff it is zero
    Eval {
        file: String,
        #[arg(long)]
        assign: PathBuf,
    },
    /// Emit a combined equation
    Construct {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        theorem: u8,
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        q: Option<PathBuf>,
        #[arg(long)]
        a: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Build a rational witness from a natural solution of f
    Witness {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        a: u64,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        sol: Vec<u64>,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Print Zero, NonZero, NotRational or DomainViolation
    Verify {
        file: String,
        #[arg(long)]
        assign: PathBuf,
    },
    /// Lemma certificates and decisions
    #[command(subcommand)]
    Lemma(LemmaCommand),
}

#[derive(Debug, Subcommand)]
enum LemmaCommand {
    /// Pell witness for m >= 0, sign refutation for m < 0
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        m: BigInt,
    },
    /// Decide whether A1..Ak are all rational squares
    Jk {
        #[arg(long)]
        k: usize,
        #[arg(long = "A", value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<Rat>,
    },
    /// Write a nonnegative rational as x1^2 + x2^2 + delta*x3^2
    ThreeSquares {
        #[arg(allow_hyphen_values = true)]
        alpha: Rat,
    },
    /// Value of a prime-power product, optionally checking a claimed value
    PrimePower {
        #[arg(long, value_delimiter = ',')]
        primes: Vec<BigInt>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exps: Vec<Rat>,
        #[arg(long, allow_hyphen_values = true)]
        claimed: Option<Rat>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

type Outcome = Result<bool, Failure>;

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::RadicalResidue | PolyError::DenominatorResidue => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<LemmaError> for Failure {
    fn from(e: LemmaError) -> Self {
        match e {
            LemmaError::Internal(m) => Failure::Internal(m),
            LemmaError::Poly(p) => p.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Internal(m) => Failure::Internal(m),
            ReductionError::Lemma(l) => l.into(),
            ReductionError::Poly(p) => p.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_source(file: &str) -> Result<String, Failure> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))
    }
}

fn read_equation(file: &str) -> Result<Equation, Failure> {
    let text = read_source(file)?;
    Equation::parse(&text).map_err(|e| Failure::Input(format!("{file}: {e}")))
}

fn read_assignment(path: &Path) -> Result<Assignment, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Assignment::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(o: Option<&Path>, text: &str) -> Result<(), Failure> {
    match o {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) -> Result<(), Failure> {
    emit(None, &serde_json::to_string_pretty(v).expect("json values serialize"))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { file } => {
            println!("{}", read_equation(&file)?);
            Ok(true)
        }
        Command::Eval { file, assign } => {
            let eq = read_equation(&file)?;
            let a = read_assignment(&assign)?;
            match eval(&eq.difference(), &a) {
                Ok(v) => {
                    println!("{v}");
                    Ok(v.is_zero())
                }
                Err(e @ (EvalError::NotRational | EvalError::DomainViolation)) => {
                    println!("{e}");
                    Ok(false)
                }
                Err(e) => Err(Failure::Input(e.to_string())),
            }
        }
        Command::Verify { file, assign } => {
            let eq = read_equation(&file)?;
            let a = read_assignment(&assign)?;
            match verify(&eq, &a) {
                Ok(v) => {
                    println!("{v}");
                    Ok(v == Verdict::Zero)
                }
                Err(e @ (VerifyError::UnboundVariable(_) | VerifyError::SizeLimit(_))) => {
                    Err(Failure::Input(e.to_string()))
                }
            }
        }
        Command::Construct { theorem, f, q, a, primes, o } => {
            let built = if theorem == 3 {
                let q = q.ok_or_else(|| Failure::Input("--q is required for theorem 3".into()))?;
                let text = fs::read_to_string(&q)?;
                let poly = MPoly::parse(&text)?;
                construct_thm3(&ReductionInput::polynomial(poly, a, primes)?)?
            } else {
                let f = f.ok_or_else(|| Failure::Input("--f is required".into()))?;
                let input = ReductionInput::exponential(read_equation(&f.to_string_lossy())?, a)?;
                if theorem == 1 {
                    construct_thm1(&input)?
                } else {
                    construct_thm2(&input)?
                }
            };
            eprintln!("unknowns: {}", built.unknowns.join(", "));
            emit(o.as_deref(), &built.equation.to_string())?;
            Ok(true)
        }
        Command::Witness { theorem, f, a, sol, o } => {
            let sol: [u64; 3] = sol
                .try_into()
                .map_err(|_| Failure::Input("--sol takes exactly three naturals".into()))?;
            let input = ReductionInput::exponential(read_equation(&f.to_string_lossy())?, a)?;
            let assignment = if theorem == 1 {
                witness_thm1(&input, sol)?
            } else {
                witness_thm2(&input, sol)?.assignment
            };
            emit(o.as_deref(), &assignment.to_json())?;
            Ok(true)
        }
        Command::Lemma(cmd) => run_lemma(cmd),
    }
}

fn run_lemma(cmd: LemmaCommand) -> Outcome {
    match cmd {
        LemmaCommand::Pell { m } => {
            let outcome = nonneg_witness_pell(&m);
            print_json(&cert::pell(&outcome))?;
            Ok(matches!(outcome, PellOutcome::Witness(_)))
        }
        LemmaCommand::Jk { k, a } => {
            if a.len() != k {
                return Err(Failure::Input(format!("--k {k} but {} arguments", a.len())));
            }
            let d = jk_decision(&a)?;
            print_json(&cert::jk(&a, &d))?;
            Ok(matches!(d, JkDecision::AllSquares { .. }))
        }
        LemmaCommand::ThreeSquares { alpha } => {
            print_json(&cert::three_squares(&three_squares_rational(&alpha)?))?;
            Ok(true)
        }
        LemmaCommand::PrimePower { primes, exps, claimed } => {
            let pp = PrimePowerProduct::new(primes, exps)?;
            let value = prime_power_product_value(&pp)?;
            let verdict = claimed.as_ref().map(|c| integrality_certificate(&pp, c)).transpose()?;
            let check = claimed.as_ref().zip(verdict.as_ref());
            print_json(&cert::prime_power(&pp, &value, check))?;
            Ok(match verdict {
                Some(v) => v == crate::lemmas::CertificateVerdict::Accept,
                None => true,
            })
        }
    }
}

/// Parses `std::env::args` and runs the selected command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
