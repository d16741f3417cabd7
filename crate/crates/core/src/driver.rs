//! Upward sweep over the vertex count.
//!
//! Starting from a strict lower bound `L`, each `N` gets `kappa` independent
//! counting runs and a majority verdict. The first `N` whose majority says
//! "no solutions" is reported as `R(m, n; r)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counting::{run_rng, CountOptions, Counter, Mode, Verdict};
use crate::oracle::{Evaluator, RamseyInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriverMode {
    Statevector,
    #[default]
    Analytic,
    Classical,
}

impl FromStr for DriverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sv" | "statevector" => Ok(DriverMode::Statevector),
            "analytic" => Ok(DriverMode::Analytic),
            "classical" => Ok(DriverMode::Classical),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for DriverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DriverMode::Statevector => "statevector",
            DriverMode::Analytic => "analytic",
            DriverMode::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverConfig {
    pub mode: DriverMode,
    /// Counting runs per `N`; must be odd.
    pub repetitions: usize,
    pub seed: u64,
    /// Strict lower bound on the Ramsey number; `None` means `max(m, n) - 1`.
    pub lower_bound: Option<usize>,
    /// Last `N` tried; `None` means `L + 16`.
    pub n_max: Option<usize>,
    pub counting: CountOptions,
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig {
            mode: DriverMode::default(),
            repetitions: 5,
            seed: 0,
            lower_bound: None,
            n_max: None,
            counting: CountOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub b: u64,
    #[serde(rename = "M_hat")]
    pub m_hat: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub runs: Vec<RunRecord>,
    pub majority: Verdict,
    /// Exact solution count, recorded in classical mode.
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub solutions: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub mode: DriverMode,
    pub seed: u64,
    pub steps: Vec<Step>,
    #[serde(rename = "R")]
    pub value: Option<u64>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }
}

fn majority(runs: &[RunRecord]) -> Verdict {
    let zeros = runs.iter().filter(|r| r.verdict == Verdict::Zero).count();
    if 2 * zeros > runs.len() {
        Verdict::Zero
    } else {
        Verdict::Positive
    }
}

fn run_step(inst: &RamseyInstance, config: &DriverConfig) -> Result<Step> {
    let n_vertices = inst.n_vertices();
    let mode = match config.mode {
        DriverMode::Classical => {
            let m = Evaluator::new(inst)?.count_solutions(config.counting.enumeration_cap)?;
            return Ok(Step {
                n_vertices,
                runs: Vec::new(),
                majority: if m == 0 {
                    Verdict::Zero
                } else {
                    Verdict::Positive
                },
                solutions: Some(m),
            });
        }
        DriverMode::Statevector => Mode::Statevector,
        DriverMode::Analytic => Mode::Analytic,
    };
    let counter = Counter::new(inst, mode, &config.counting)?;
    let runs = (0..config.repetitions as u64)
        .map(|rep| {
            let stream = (n_vertices as u64) << 32 | rep;
            let est = counter.sample(&mut run_rng(config.seed, stream))?;
            Ok(RunRecord {
                b: est.outcome,
                m_hat: est.m_hat,
                verdict: est.verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Step {
        n_vertices,
        majority: majority(&runs),
        runs,
        solutions: None,
    })
}

/// Sweeps `N = L, L+1, ...` and returns the first `N` with a zero majority
/// verdict along with the full transcript.
///
/// `N = L` is evaluated too: a zero verdict there means the supplied bound
/// was not strict, which is reported as an error.
pub fn compute_ramsey(
    m: usize,
    n: usize,
    r: usize,
    config: &DriverConfig,
) -> Result<(u64, Transcript)> {
    if config.repetitions == 0 || config.repetitions.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "repetitions must be odd, got {}",
            config.repetitions
        )));
    }
    // Validates m, n, r before anything else.
    let probe = RamseyInstance::new(1, m, n, r)?;
    let lower = config.lower_bound.unwrap_or(m.max(n) - 1);
    if lower == 0 {
        return Err(Error::invalid("lower bound must be at least 1"));
    }
    let n_max = config.n_max.unwrap_or(lower + 16);

    let mut transcript = Transcript {
        m,
        n,
        r,
        mode: config.mode,
        seed: config.seed,
        steps: Vec::new(),
        value: None,
    };
    for n_vertices in lower..=n_max {
        let step = run_step(&probe.with_vertices(n_vertices)?, config)?;
        let zero = step.majority == Verdict::Zero;
        transcript.steps.push(step);
        if zero {
            if n_vertices == lower {
                return Err(Error::LowerBoundNotStrict(lower as u64));
            }
            transcript.value = Some(n_vertices as u64);
            return Ok((n_vertices as u64, transcript));
        }
    }
    Err(Error::Inconclusive {
        first: lower as u64,
        last: n_max as u64,
        transcript: Box::new(transcript),
    })
}
