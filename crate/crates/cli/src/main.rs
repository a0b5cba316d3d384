//! Batch front end for the separability-eigenvalue toolkit.
//!
//! Commands mirror the library: `sepeig` solves the separability eigenvalue
//! problem for an operator file, `test` runs the upper/lower entanglement
//! conditions, `witness` builds the optimal witness, `pt`/`npt` handle
//! partial transposition, `bound` searches for PPT bound entanglement,
//! `scan` sweeps a grid of test operators, and `gen-state` writes the
//! fixture states. Output is JSON first (`--format text` for eyes), seeds
//! and budgets are echoed for reproducibility, and exit codes are stable:
//! 0 ran, 1 input error, 2 numerical failure, 3 entanglement detected.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use sepeig::io as fileio;
use sepeig::opgrid::{scan_with, GridSpec};
use sepeig::solver::{registry, SolverConfig};
use sepeig::states;
use sepeig::witness::{bound_check, build_witness, npt_check, test_lower, test_upper, Verdict};
use sepeig::{BipartiteOperator, DensityOperator, Dims, Error};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_DETECTED: u8 = 3;

#[derive(Parser)]
#[command(name = "sepeig", version, about = "Bipartite entanglement tests via separability eigenvalues")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,

    #[command(subcommand)]
    command: Command,
}

/// Knobs echoed into every output record.
#[derive(Args, Clone)]
struct RunConfig {
    /// Seed for all randomized pieces (starts, samplers, candidates).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Solver convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Random starts per solver branch.
    #[arg(long, global = true, default_value_t = 64)]
    starts: usize,

    /// Solver strategy (`auto`, `alternating`, `rank-one`).
    #[arg(long, global = true, default_value = "auto")]
    solver: String,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the separability eigenvalue problem for an operator file.
    Sepeig { operator: PathBuf },

    /// Test a state against a Hermitian operator (upper condition; --lower
    /// switches to the infimum condition).
    Test {
        state: PathBuf,
        operator: PathBuf,
        #[arg(long)]
        lower: bool,
    },

    /// Build the optimal witness f_AB(A)·1 − A for an operator file.
    Witness { operator: PathBuf },

    /// Partially transpose an operator file (writes the operator schema).
    Pt { operator: PathBuf },

    /// Check a state for negativity under partial transposition.
    Npt { state: PathBuf },

    /// Search for PPT bound entanglement with positive test operators.
    Bound {
        state: PathBuf,
        /// Extra candidate operators (positive semidefinite), tried first.
        #[arg(long)]
        candidate: Vec<PathBuf>,
        /// Random f†f candidates drawn after the explicit ones.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },

    /// Scan a spherical grid of test operators against a state; detections
    /// stream as JSON lines.
    Scan {
        state: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        delta_r: f64,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        delta_phi: f64,
        /// Refuse grids with more members than this.
        #[arg(long)]
        cap: Option<u128>,
        /// Skip grid members below this index (for resuming).
        #[arg(long, default_value_t = 0)]
        resume_from: u64,
    },

    /// Write a fixture state (or density operator) in the file schema.
    #[command(subcommand, name = "gen-state")]
    GenState(GenState),
}

#[derive(Subcommand)]
enum GenState {
    /// (|0,1⟩ + |1,0⟩)/√2 on 2⊗2.
    Bell,
    /// (|0,0⟩ + |1,1⟩)/√2 on 2⊗2.
    BellPlus,
    /// p·|Φ⁺⟩⟨Φ⁺| + (1−p)·1/4.
    Werner {
        #[arg(long)]
        p: f64,
    },
    /// Odd coherent superposition N(|α,β⟩ − |−α,−β⟩), Fock-truncated.
    ChiMinus {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// η|χ₋⟩⟨χ₋| + (1−η)|0,0⟩⟨0,0|.
    RhoMix {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// The 3⊗3 tiles state (PPT entangled fixture).
    Tiles,
    /// Haar-random product state.
    RandomProduct {
        #[arg(long, default_value = "2x2")]
        dims: String,
    },
    /// Seeded random mixture of product states.
    RandomSeparable {
        #[arg(long, default_value = "2x2")]
        dims: String,
        #[arg(long, default_value_t = 4)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("SEPEIG_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

fn dispatch(cli: &Cli) -> Result<u8, Error> {
    let cfg = SolverConfig {
        starts: cli.run.starts,
        tol: cli.run.tol,
        seed: cli.run.seed,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    let solver = registry()
        .get(&cli.run.solver)
        .ok_or_else(|| Error::InvalidParam(format!(
            "unknown solver `{}` (available: {})",
            cli.run.solver,
            registry().names().join(", ")
        )))?;

    match &cli.command {
        Command::Sepeig { operator } => {
            let op = fileio::load_operator(operator)?;
            let spectrum = solver.solve(&op, &cfg)?;
            let body = json!({
                "command": "sepeig",
                "config": config_json(&cli.run),
                "spectrum": spectrum,
            });
            if cli.run.format == Format::Text {
                let mut lines = vec![format!(
                    "sup g = {:.12}, inf g = {:.12} ({} solutions, {:.0}% of {} starts converged)",
                    spectrum.sup_g,
                    spectrum.inf_g,
                    spectrum.pairs.len(),
                    spectrum.converged_fraction * 100.0,
                    spectrum.starts_used
                )];
                for p in &spectrum.pairs {
                    lines.push(format!("  g = {:+.12}  residual {:.2e}", p.g, p.residual));
                }
                emit_text(&cli.run, &lines)?;
            } else {
                emit_json(&cli.run, &body)?;
            }
            Ok(EXIT_OK)
        }

        Command::Test { state, operator, lower } => {
            let rho = fileio::load_density(state)?;
            let op = fileio::load_operator(operator)?;
            let verdict = if *lower {
                test_lower(&rho, &op, &cfg)?
            } else {
                test_upper(&rho, &op, &cfg)?
            };
            emit_verdict(&cli.run, "test", &verdict)
        }

        Command::Witness { operator } => {
            let op = fileio::load_operator(operator)?;
            let w = build_witness(&op, &cfg)?;
            let body = json!({
                "command": "witness",
                "config": config_json(&cli.run),
                "f_value": w.f_value,
                "min_eigenvalue": w.op.min_eigenvalue(),
                "optimal": w.optimal,
                "witness": operator_value(&w.op),
            });
            if cli.run.format == Format::Text {
                emit_text(&cli.run, &[format!(
                    "f_AB = {:.12}, witness min eigenvalue {:.12}",
                    w.f_value,
                    w.op.min_eigenvalue()
                )])?;
            } else {
                emit_json(&cli.run, &body)?;
            }
            Ok(EXIT_OK)
        }

        Command::Pt { operator } => {
            let op = fileio::load_operator(operator)?;
            eprintln!("{}", header_line(&cli.run, "pt"));
            write_out(&cli.run, &fileio::operator_to_json(&op.partial_transpose()))?;
            Ok(EXIT_OK)
        }

        Command::Npt { state } => {
            let rho = fileio::load_density(state)?;
            let verdict = npt_check(&rho);
            emit_verdict(&cli.run, "npt", &verdict)
        }

        Command::Bound { state, candidate, budget } => {
            let rho = fileio::load_density(state)?;
            let candidates = candidate
                .iter()
                .map(|p| fileio::load_operator(p))
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = bound_check(&rho, &candidates, *budget, &cfg)?;
            emit_verdict(&cli.run, "bound", &verdict)
        }

        Command::Scan { state, delta_r, delta_phi, cap, resume_from } => {
            let rho = fileio::load_density(state)?;
            let mut spec = GridSpec::new(rho.dims(), *delta_r, *delta_phi)?;
            if let Some(cap) = cap {
                spec = spec.with_cap(*cap);
            }
            let mut sink = open_sink(&cli.run)?;
            writeln!(
                sink,
                "{}",
                json!({
                    "command": "scan",
                    "config": config_json(&cli.run),
                    "grid_size": spec.grid_size().to_string(),
                    "epsilon": spec.epsilon(),
                    "resume_from": resume_from,
                })
            )?;
            let report = scan_with(&rho, &spec, &cfg, *resume_from, |rec| {
                let _ = writeln!(sink, "{}", serde_json::to_string(rec).expect("record"));
            })?;
            writeln!(
                sink,
                "{}",
                json!({
                    "scanned": report.scanned,
                    "detections": report.detections.len(),
                    "best_margin": report.best_margin,
                })
            )?;
            Ok(if report.detections.is_empty() {
                EXIT_OK
            } else {
                EXIT_DETECTED
            })
        }

        Command::GenState(kind) => {
            eprintln!("{}", header_line(&cli.run, "gen-state"));
            let doc = gen_state(kind, cli.run.seed)?;
            write_out(&cli.run, &doc)?;
            Ok(EXIT_OK)
        }
    }
}

fn gen_state(kind: &GenState, seed: u64) -> Result<String, Error> {
    let pure = fileio::state_to_json;
    let dense = |rho: &DensityOperator| fileio::operator_to_json(rho.op());
    Ok(match kind {
        GenState::Bell => pure(&states::bell_phi()),
        GenState::BellPlus => pure(&states::bell_phi_plus()),
        GenState::Werner { p } => dense(&states::werner(*p)?),
        GenState::ChiMinus { alpha, beta, n_max } => {
            let trunc = states::FockTruncation::new(*n_max, 1e-10)?;
            let chi = states::chi_minus(
                Complex64::new(*alpha, 0.0),
                Complex64::new(*beta, 0.0),
                trunc,
            )?;
            pure(&chi.state)
        }
        GenState::RhoMix { alpha, beta, eta, n_max } => {
            let trunc = states::FockTruncation::new(*n_max, 1e-10)?;
            dense(&states::rho_mix(
                Complex64::new(*alpha, 0.0),
                Complex64::new(*beta, 0.0),
                *eta,
                trunc,
            )?)
        }
        GenState::Tiles => dense(&states::tiles_upb()),
        GenState::RandomProduct { dims } => pure(&states::random_product(parse_dims(dims)?, seed)),
        GenState::RandomSeparable { dims, terms } => {
            dense(&states::random_separable(parse_dims(dims)?, *terms, seed)?)
        }
    })
}

fn parse_dims(s: &str) -> Result<Dims, Error> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::InvalidParam(format!("dims must look like 2x2, got `{s}`")))?;
    let d_a = a.trim().parse::<usize>().map_err(|_| Error::InvalidParam(format!("bad dims `{s}`")))?;
    let d_b = b.trim().parse::<usize>().map_err(|_| Error::InvalidParam(format!("bad dims `{s}`")))?;
    Dims::new(d_a, d_b)
}

fn config_json(run: &RunConfig) -> serde_json::Value {
    json!({
        "seed": run.seed,
        "tol": run.tol,
        "starts": run.starts,
        "solver": run.solver,
    })
}

fn header_line(run: &RunConfig, command: &str) -> String {
    json!({"command": command, "config": config_json(run)}).to_string()
}

fn operator_value(op: &BipartiteOperator) -> serde_json::Value {
    serde_json::from_str(&fileio::operator_to_json(op)).expect("operator schema is json")
}

fn emit_verdict(run: &RunConfig, command: &str, verdict: &Verdict) -> Result<u8, Error> {
    if run.format == Format::Text {
        emit_text(
            run,
            &[format!(
                "{:?}: margin {:+.9e} ({})",
                verdict.kind, verdict.margin, verdict.detail
            )],
        )?;
    } else {
        let body = json!({
            "command": command,
            "config": config_json(run),
            "verdict": verdict,
        });
        emit_json(run, &body)?;
    }
    Ok(if verdict.detected() { EXIT_DETECTED } else { EXIT_OK })
}

fn emit_json(run: &RunConfig, body: &serde_json::Value) -> Result<(), Error> {
    write_out(run, &body.to_string())
}

fn emit_text(run: &RunConfig, lines: &[String]) -> Result<(), Error> {
    eprintln!("{}", header_line(run, "text"));
    write_out(run, &lines.join("\n"))
}

fn open_sink(run: &RunConfig) -> Result<Box<dyn Write>, Error> {
    Ok(match &run.output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_out(run: &RunConfig, content: &str) -> Result<(), Error> {
    match &run.output {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            writeln!(f, "{content}")?;
        }
        None => println!("{content}"),
    }
    Ok(())
}
