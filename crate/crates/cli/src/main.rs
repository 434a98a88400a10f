use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use blochspace::bloch::{bloch_to_density, density_to_bloch, BlochVector, INPUT_TOLERANCE};
use blochspace::io::{parse_state, to_json, write_scan_csv, StateInput};
use blochspace::polarization::{basis_set, polarization_operator};
use blochspace::positivity::{
    check_positivity, check_positivity_with_oracle, trace_powers_with, TraceMethod, Verdict, DEFAULT_TOLERANCE,
};
use blochspace::sections::{scan, Section};
use blochspace::{verify, Error, PolOpLabel};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "blochspace", version, about = "Density matrices in the polarization-operator basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print polarization operators T_LM(j) as matrix JSON.
    Basis {
        #[arg(long = "two-j")]
        two_j: u32,
        #[arg(long = "L", requires = "m")]
        l: Option<u32>,
        #[arg(long = "M", requires = "l", allow_hyphen_values = true)]
        m: Option<i32>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Bloch vector JSON to density matrix JSON.
    Compose {
        #[arg(long, short, default_value = "-")]
        input: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Density matrix JSON to Bloch vector JSON.
    Decompose {
        #[arg(long, short, default_value = "-")]
        input: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = INPUT_TOLERANCE)]
        tolerance: f64,
    },
    /// Positivity report. Exit 0 Positive, 1 NonPositive, 3 Marginal.
    Check {
        #[arg(long, short, default_value = "-")]
        input: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Also confirm the verdict against the eigenvalues.
        #[arg(long)]
        oracle: bool,
    },
    /// Traces T_m = Tr{(V·T)^m} and Tr{ρ^k} for k = 0..kmax.
    Traces {
        #[arg(long, short, default_value = "-")]
        input: String,
        /// Defaults to N.
        #[arg(long)]
        kmax: Option<usize>,
        /// Sum closed-form multiple traces instead of multiplying matrices.
        #[arg(long)]
        closed_form: bool,
    },
    /// Two-parameter qutrit cross-section on a grid over [-1, 1]².
    #[command(group(ArgGroup::new("section").required(true).args(["pair", "kind"])))]
    Scan {
        /// Two parameter names, e.g. `x,y` or `alpha2,beta2`.
        #[arg(long)]
        pair: Option<String>,
        /// Section type I..VII (its first listed pair).
        #[arg(long = "type")]
        kind: Option<String>,
        #[arg(long, default_value_t = 401)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// CSV destination; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// JSON file for the boundary polylines and pure states.
        #[arg(long)]
        boundary: Option<PathBuf>,
    },
    /// Run the identity suites up to the given 2j.
    Verify {
        #[arg(long = "two-j-max", default_value_t = 3)]
        two_j_max: u32,
        /// Print the JSON summary instead of one line per suite.
        #[arg(long)]
        json: bool,
    },
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

fn state_as_bloch(input: StateInput, tol: f64) -> Result<BlochVector, Error> {
    match input {
        StateInput::Matrix(m) => density_to_bloch(&m, tol),
        StateInput::Bloch(v) => Ok(v),
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("BLOCHSPACE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("BLOCHSPACE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Basis { two_j, l, m, output } => {
            let text = match (l, m) {
                (Some(l), Some(m)) => to_json(&polarization_operator(PolOpLabel::new(two_j, l, m)?)?)?,
                _ => {
                    let entries: Vec<_> = basis_set(two_j)?
                        .into_iter()
                        .map(|(label, matrix)| json!({ "label": label, "matrix": matrix }))
                        .collect();
                    to_json(&entries)?
                }
            };
            emit(output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Compose { input, output } => {
            let v = match parse_state(&read_input(&input)?)? {
                StateInput::Bloch(v) => v,
                StateInput::Matrix(_) => return Err(Error::Parse("compose expects a Bloch vector".into())),
            };
            emit(output.as_ref(), &to_json(&bloch_to_density(&v)?)?)?;
            Ok(0)
        }
        Command::Decompose { input, output, tolerance } => {
            let rho = match parse_state(&read_input(&input)?)? {
                StateInput::Matrix(m) => m,
                StateInput::Bloch(_) => return Err(Error::Parse("decompose expects a matrix".into())),
            };
            emit(output.as_ref(), &to_json(&density_to_bloch(&rho, tolerance)?)?)?;
            Ok(0)
        }
        Command::Check { input, tolerance, oracle } => {
            let state = parse_state(&read_input(&input)?)?;
            let report = match (&state, oracle) {
                (StateInput::Matrix(m), false) => check_positivity(m, tolerance)?,
                (StateInput::Matrix(m), true) => check_positivity_with_oracle(m, tolerance)?,
                (StateInput::Bloch(v), false) => check_positivity(v, tolerance)?,
                (StateInput::Bloch(v), true) => check_positivity_with_oracle(v, tolerance)?,
            };
            emit(None, &to_json(&report)?)?;
            Ok(match report.verdict {
                Verdict::Positive => 0,
                Verdict::NonPositive => 1,
                Verdict::Marginal => 3,
            })
        }
        Command::Traces { input, kmax, closed_form } => {
            let v = state_as_bloch(parse_state(&read_input(&input)?)?, INPUT_TOLERANCE)?;
            let kmax = kmax.unwrap_or(v.dim());
            let method = if closed_form { TraceMethod::MultiTrace } else { TraceMethod::Direct };
            let tp = trace_powers_with(&v, kmax, method)?;
            emit(None, &to_json(&json!({ "N": v.dim(), "kmax": kmax, "T": tp.t, "traces": tp.traces }))?)?;
            Ok(0)
        }
        Command::Scan { pair, kind, resolution, tolerance, output, boundary } => {
            let section = Section::parse(pair.as_deref().or(kind.as_deref()).expect("clap enforces one"))?;
            configure_threads()?;
            let result = scan(section, resolution, tolerance)?;
            if let Some(path) = &boundary {
                emit(Some(path), &to_json(&result)?)?;
            }
            match &output {
                Some(path) => {
                    let file = fs::File::create(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    write_scan_csv(&result, io::BufWriter::new(file))?;
                }
                None => write_scan_csv(&result, io::stdout().lock())?,
            }
            Ok(0)
        }
        Command::Verify { two_j_max, json } => {
            let results = verify::run_all(two_j_max)?;
            let all_passed = results.iter().all(|r| r.passed);
            if json {
                emit(None, &to_json(&json!({ "passed": all_passed, "suites": results }))?)?;
            } else {
                for r in &results {
                    println!(
                        "{:<5} 2j={:<2} {:<15} cases={:<6} max_residual={:.3e} tol={:.0e}",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.two_j,
                        r.suite,
                        r.cases,
                        r.max_residual,
                        r.tolerance
                    );
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
