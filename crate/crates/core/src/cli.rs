// SPDX-License-Identifier: Apache-2.0

//! The `modfa` command line. Exit codes: 0 success, 2 usage, 1 runtime.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit;
use crate::compiler::{compile, CompileError, LoweringRequest, Scheme};
use crate::qfa::{self, QfaError, SearchMode, Variant};
use crate::sim::{self, NoiseModel, SimError, SweepOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "MODFA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "modfa", version, about = "MOD_p quantum finite automata: build, compile, simulate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Ry,
    Rz,
    OptRy,
    OptRz,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Ry => Scheme::RySingle,
            SchemeArg::Rz => Scheme::RzSingle,
            SchemeArg::OptRy => Scheme::OptRy,
            SchemeArg::OptRz => Scheme::OptRz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Circuit,
    Report,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Ry2,
    Rz2,
    ParallelRy,
    ParallelRz,
}

#[derive(Debug, clap::Args)]
pub struct RequestArgs {
    /// Odd prime modulus.
    #[arg(long)]
    pub p: u32,
    /// Multipliers, comma separated (one for ry/rz, three for opt schemes).
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub k: Vec<u32>,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower, transpile and optimize one word length.
    Compile {
        #[command(flatten)]
        request: RequestArgs,
        #[arg(long)]
        length: usize,
        /// Skip the peephole optimizer.
        #[arg(long)]
        no_optimize: bool,
        #[arg(long, value_enum, default_value = "both")]
        emit: Emit,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// One row per word length 0..=max-length.
    Sweep {
        #[command(flatten)]
        request: RequestArgs,
        #[arg(long)]
        max_length: usize,
        /// Noise config file (flat TOML).
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, requires = "noise", default_value_t = 8192)]
        shots: u64,
        #[arg(long, requires = "noise", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_optimize: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Find multipliers minimizing the worst non-member acceptance.
    SearchK {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a circuit text file exactly and, with --noise, under noise.
    Simulate {
        circuit: PathBuf,
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Acceptance probability of an automaton on a^length.
    Accept {
        #[arg(long)]
        p: u32,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        k: Vec<u32>,
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long)]
        length: usize,
        /// Include the state after every symbol.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<QfaError> for Failure {
    fn from(e: QfaError) -> Self {
        match e {
            QfaError::SearchBudgetExceeded { .. } | QfaError::Linalg(_) | QfaError::InvalidAutomaton(_) => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn compile_failure(e: CompileError) -> Failure {
    match e {
        CompileError::Qfa(q) => q.into(),
        CompileError::MultiplierCount { .. } | CompileError::UnknownScheme(_) => Failure::Usage(e.to_string()),
        _ => Failure::Runtime(e.to_string()),
    }
}

fn sim_failure(e: SimError) -> Failure {
    match e {
        SimError::Compile(c) => compile_failure(c),
        _ => Failure::Runtime(e.to_string()),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

fn request(args: &RequestArgs, length: usize) -> Result<LoweringRequest, Failure> {
    LoweringRequest::new(args.p, args.k.clone(), length, args.scheme.into(), true).map_err(compile_failure)
}

fn load_noise(path: &Path) -> Result<NoiseModel, Failure> {
    NoiseModel::from_file(path).map_err(sim_failure)
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Runtime(e.to_string()))
}

fn deliver(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Compile {
            request: args,
            length,
            no_optimize,
            emit,
            output,
        } => {
            let req = request(&args, length)?;
            let compiled = compile(&req, !no_optimize).map_err(compile_failure)?;
            let mut text = String::new();
            if matches!(emit, Emit::Circuit | Emit::Both) {
                text.push_str(&circuit::serialize(&compiled.circuit));
            }
            if matches!(emit, Emit::Report | Emit::Both) {
                text.push_str(&compiled.report.to_json());
                text.push('\n');
            }
            deliver(&text, output.as_deref(), out)
        }
        Command::Sweep {
            request: args,
            max_length,
            noise,
            shots,
            seed,
            no_optimize,
            format,
            output,
        } => {
            let template = request(&args, 0)?;
            let mut opts = SweepOptions::new(max_length);
            opts.optimize = !no_optimize;
            if let Some(path) = &noise {
                if shots == 0 {
                    return Err(Failure::Usage("--shots must be at least 1".into()));
                }
                opts = opts.with_noise(load_noise(path)?, shots, seed);
            }
            let rows = thread_pool()?
                .install(|| sim::sweep(&template, &opts))
                .map_err(sim_failure)?;
            let text = match format {
                Format::Csv => sim::to_csv(&rows),
                Format::Json => sim::to_json_lines(&rows),
            };
            deliver(&text, output.as_deref(), out)
        }
        Command::SearchK {
            p,
            d,
            mode,
            trials,
            seed,
        } => {
            let mode = match mode {
                Mode::Exhaustive => {
                    if trials.is_some() || seed.is_some() {
                        return Err(Failure::Usage(
                            "--trials and --seed only apply to --mode random".into(),
                        ));
                    }
                    SearchMode::Exhaustive
                }
                Mode::Random => match (trials, seed) {
                    (Some(trials), Some(seed)) => SearchMode::Random { trials, seed },
                    _ => {
                        return Err(Failure::Usage(
                            "--mode random needs both --trials and --seed".into(),
                        ))
                    }
                },
            };
            let found = thread_pool()?.install(|| qfa::search_k(p, d, mode))?;
            let v = json!({"k_set": found.multipliers, "worst_case": found.worst_case});
            deliver(&format!("{v}\n"), None, out)
        }
        Command::Simulate {
            circuit: path,
            noise,
            shots,
            seed,
        } => {
            let text = std::fs::read_to_string(&path).map_err(|e| io_failure(&path, e))?;
            let c = circuit::parse(&text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            let exact = sim::simulate_state(&c).map_err(sim_failure)?;
            let mut v = json!({
                "qubits": c.num_qubits(),
                "outcome_probs": exact.outcome_probs,
                "acceptance": exact.acceptance(),
            });
            let noise = noise.as_deref().map(load_noise).transpose()?;
            let probs = match &noise {
                Some(model) => {
                    let rho = sim::simulate_density(&c, model).map_err(sim_failure)?;
                    let probs = rho.outcome_probs(&c);
                    v["noisy_outcome_probs"] = json!(probs);
                    v["fidelity"] = json!(sim::fidelity(&exact.state, &rho).map_err(sim_failure)?);
                    probs
                }
                None => exact.outcome_probs.clone(),
            };
            if let Some(shots) = shots {
                let model = noise.unwrap_or_default();
                let counts = sim::sample_counts(&probs, &model, shots, seed).map_err(sim_failure)?;
                v["counts"] = json!(counts);
            }
            deliver(&format!("{v}\n"), None, out)
        }
        Command::Accept {
            p,
            k,
            construction,
            length,
            trace,
        } => {
            let m = match construction {
                ConstructionArg::Ry2 | ConstructionArg::Rz2 => {
                    let &[k] = k.as_slice() else {
                        return Err(Failure::Usage(format!(
                            "two-state constructions take one multiplier, got {}",
                            k.len()
                        )));
                    };
                    let variant = if construction == ConstructionArg::Ry2 {
                        Variant::PlaneRotation
                    } else {
                        Variant::PhaseRotation
                    };
                    qfa::build_two_state(p, k, variant)?
                }
                ConstructionArg::ParallelRy | ConstructionArg::ParallelRz => {
                    let variant = if construction == ConstructionArg::ParallelRy {
                        Variant::PlaneRotation
                    } else {
                        Variant::PhaseRotation
                    };
                    qfa::build_parallel(&qfa::ParallelSpec::new(p, k.clone(), variant)?)?
                }
            };
            let mut v = json!({
                "construction": m.label().to_string(),
                "p": p,
                "k_set": k,
                "length": length,
                "acceptance": m.acceptance_probability(length),
            });
            if trace {
                let states: Vec<Vec<[f64; 2]>> = m
                    .trace_states(length)
                    .iter()
                    .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                    .collect();
                v["trace"] = json!(states);
            }
            deliver(&format!("{v}\n"), None, out)
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_RUNTIME
        }
    }
}
