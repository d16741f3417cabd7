//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::{self, BuildLimits, DEFAULT_EPSILON};
use crate::counting::{CountOptions, Counter, Mode};
use crate::driver::{compute_ramsey, DriverConfig, DriverMode};
use crate::encoding::parse_bits;
use crate::oracle::{count_solutions, RamseyInstance, DEFAULT_ENUMERATION_CAP};
use crate::sim::run_circuit;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "hyperramsey",
    version,
    about = "Hypergraph Ramsey numbers by simulated quantum counting"
)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct InstanceArgs {
    /// Number of vertices.
    #[arg(long = "N")]
    vertices: usize,
    /// Clique size.
    #[arg(long)]
    m: usize,
    /// Independent-set size.
    #[arg(long)]
    n: usize,
    /// Hyperedge size.
    #[arg(long)]
    r: usize,
}

impl InstanceArgs {
    fn instance(&self) -> Result<RamseyInstance> {
        RamseyInstance::new(self.vertices, self.m, self.n, self.r)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Sv,
    Analytic,
    Classical,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Part {
    Oracle,
    Grover,
    Counting,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep N upward and report R(m,n;r).
    Ramsey {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "analytic")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Counting runs per N (odd).
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Strict lower bound L; defaults to max(m,n) - 1.
        #[arg(long = "lower-bound")]
        lower_bound: Option<usize>,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Exact solution count by brute force.
    Count {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Quantum counting runs, one JSON line per run.
    Qcount {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "analytic")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: usize,
    },
    /// Print a circuit in the text format.
    BuildCircuit {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "oracle")]
        part: Part,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a circuit file from a basis state.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Initial basis state, qubit 0 first.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "dump-state")]
        dump_state: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Ramsey {
            m,
            n,
            r,
            mode,
            seed,
            reps,
            lower_bound,
            n_max,
        } => {
            let config = DriverConfig {
                mode: match mode {
                    ModeArg::Sv => DriverMode::Statevector,
                    ModeArg::Analytic => DriverMode::Analytic,
                    ModeArg::Classical => DriverMode::Classical,
                },
                repetitions: reps,
                seed,
                lower_bound,
                n_max,
                counting: CountOptions::default(),
            };
            let (value, transcript) = compute_ramsey(m, n, r, &config)?;
            if cli.json {
                writeln!(out, "{}", transcript.to_json())?;
            } else {
                writeln!(out, "R({m},{n};{r}) = {value}")?;
            }
        }
        Command::Count { inst, cap } => {
            let instance = inst.instance()?;
            let count = count_solutions(&instance, cap)?;
            if cli.json {
                let v =
                    json!({"N": inst.vertices, "m": inst.m, "n": inst.n, "r": inst.r, "M": count});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "M = {count}")?;
            }
        }
        Command::Qcount {
            inst,
            mode,
            seed,
            runs,
        } => {
            let mode = match mode {
                ModeArg::Sv => Mode::Statevector,
                ModeArg::Analytic => Mode::Analytic,
                ModeArg::Classical => {
                    return Err(Error::invalid("qcount supports --mode sv or analytic"))
                }
            };
            let counter = Counter::new(&inst.instance()?, mode, &CountOptions::default())?;
            for i in 0..runs as u64 {
                let est = counter.sample_seeded(seed, i)?;
                let v = json!({"b": est.outcome, "theta": est.theta, "M_hat": est.m_hat, "verdict": est.verdict});
                writeln!(out, "{v}")?;
            }
        }
        Command::BuildCircuit {
            inst,
            part,
            out: path,
        } => {
            let instance = inst.instance()?;
            let limits = BuildLimits::default();
            let c = match part {
                Part::Oracle => circuit::build_oracle_circuit(&instance, &limits)?,
                Part::Grover => circuit::build_grover_circuit(&instance, &limits)?,
                Part::Counting => {
                    let w = circuit::default_accuracy_bits(instance.input_bits()?);
                    circuit::build_counting_circuit(&instance, w, DEFAULT_EPSILON, &limits)?
                }
            };
            let text = circuit::serialize(&c);
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Simulate {
            circuit: path,
            input,
            seed,
            dump_state,
        } => {
            let c = circuit::parse(&std::fs::read_to_string(path)?)?;
            let bits = parse_bits(input.trim())?;
            if bits.len() != c.width() {
                return Err(Error::invalid(format!(
                    "input has {} bits, circuit has {} qubits",
                    bits.len(),
                    c.width()
                )));
            }
            let initial = bits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (q, &b)| acc | (b as usize) << q);
            let result = run_circuit(&c, initial, seed)?;
            let nonzero: Vec<(usize, f64, f64)> = result
                .state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > 1e-12)
                .map(|(i, a)| (i, a.re, a.im))
                .collect();
            if cli.json {
                let mut v = json!({"outcomes": result.outcomes});
                if dump_state {
                    v["state"] = json!(nonzero);
                }
                writeln!(out, "{v}")?;
            } else {
                for b in &result.outcomes {
                    writeln!(out, "outcome {b}")?;
                }
                if dump_state {
                    for (i, re, im) in nonzero {
                        writeln!(out, "{i} {re} {im}")?;
                    }
                }
            }
        }
    }
    Ok(())
}
