//! Quantum counting: phase estimation of the Grover iteration.
//!
//! The Grover iteration rotates the plane spanned by the solution and
//! non-solution superpositions by `theta`, with `sin^2(theta/2) = M / 2^B`.
//! Its eigenphases inside that plane are `theta` and `2 pi - theta`, and the
//! uniform start state has weight one half on each. Phase estimation with
//! `t` counting qubits returns `b` with `theta ~ 2 pi b / 2^t`.
//!
//! Two modes sample the same outcome distribution:
//!
//! - `Statevector` simulates the counting register plus the input register,
//!   using the classical truth table as a phase oracle (no ancillas).
//! - `Analytic` evaluates the exact distribution in the invariant plane from
//!   the true solution count, obtained by brute force.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{counting_qubits, default_accuracy_bits, Control, DEFAULT_EPSILON};
use crate::oracle::{Evaluator, RamseyInstance, DEFAULT_ENUMERATION_CAP};
use crate::sim::{Statevector, DEFAULT_MAX_WIDTH};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Statevector,
    Analytic,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sv" | "statevector" => Ok(Mode::Statevector),
            "analytic" => Ok(Mode::Analytic),
            other => Err(Error::invalid(format!("unknown counting mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Zero,
    Positive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "zero",
            Verdict::Positive => "positive",
        })
    }
}

/// Estimates below one half are read as "no solutions".
pub const ZERO_THRESHOLD: f64 = 0.5;

pub fn verdict(m_hat: f64) -> Verdict {
    if m_hat < ZERO_THRESHOLD {
        Verdict::Zero
    } else {
        Verdict::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    #[serde(rename = "b")]
    pub outcome: u64,
    pub theta: f64,
    #[serde(rename = "M_hat")]
    pub m_hat: f64,
    pub verdict: Verdict,
    /// Error bound for the true count, when it is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl CountEstimate {
    pub fn from_outcome(outcome: u64, counting_qubits: usize, input_bits: usize) -> Result<Self> {
        let (theta, m_hat) = decode_outcome(outcome, counting_qubits, input_bits)?;
        Ok(CountEstimate {
            outcome,
            theta,
            m_hat,
            verdict: verdict(m_hat),
            bound: None,
        })
    }
}

/// `(theta, M_hat) = (2 pi b / 2^t, 2^B sin^2(pi b / 2^t))`.
pub fn decode_outcome(b: u64, t: usize, input_bits: usize) -> Result<(f64, f64)> {
    if t >= 64 || b >> t != 0 {
        return Err(Error::invalid(format!(
            "outcome {b} outside a {t}-qubit register"
        )));
    }
    let frac = b as f64 / (1u64 << t) as f64;
    let m_hat = 2f64.powi(input_bits as i32) * (PI * frac).sin().powi(2);
    Ok((2.0 * PI * frac, m_hat))
}

/// Upper bound `2^-w (sqrt(M 2^B) + 2^(B - w - 2))` on `|M_hat - M|` that
/// holds with probability at least `1 - eps`.
pub fn error_bound(solutions: u64, input_bits: usize, accuracy_bits: usize) -> f64 {
    let space = 2f64.powi(input_bits as i32);
    let w = accuracy_bits as i32;
    2f64.powi(-w) * ((solutions as f64 * space).sqrt() + space * 2f64.powi(-(w + 2)))
}

/// Squared magnitude of `2^-t sum_k e^{2 pi i k delta}` over `k < 2^t`.
fn fejer(delta: f64, size: f64) -> f64 {
    let d = delta - delta.round();
    let den = (PI * d).sin();
    if den.abs() < 1e-15 {
        return 1.0;
    }
    let num = (PI * size * d).sin();
    (num * num) / (size * size * den * den)
}

/// Exact phase-estimation outcome distribution for `solutions` marked items
/// among `2^input_bits`, with `t` counting qubits.
pub fn analytic_distribution(solutions: u64, input_bits: usize, t: usize) -> Result<Vec<f64>> {
    if input_bits >= 64 || solutions > 1u64 << input_bits {
        return Err(Error::invalid(format!(
            "solution count {solutions} outside 0..=2^{input_bits}"
        )));
    }
    if t > 30 {
        return Err(Error::InfeasibleSize {
            what: "counting register for a dense distribution",
            size: t as u128,
            limit: 30,
            hint: "",
        });
    }
    let size = (1u64 << t) as f64;
    let ratio = solutions as f64 / 2f64.powi(input_bits as i32);
    // Eigenphase as a fraction of a turn: theta / (2 pi).
    let phase = if solutions == 0 {
        0.0
    } else if solutions == 1 << input_bits {
        0.5
    } else {
        ratio.sqrt().asin() / PI
    };
    Ok((0..1u64 << t)
        .map(|b| {
            let x = b as f64 / size;
            0.5 * fejer(phase - x, size) + 0.5 * fejer(-phase - x, size)
        })
        .collect())
}

/// State after the controlled Grover powers and inverse QFT, before
/// measurement. Qubits `0..t` are the counting register (qubit 0 most
/// significant) and `t..t+B` the input register, with `table[x]` the
/// predicate on input value `x`.
pub fn phase_estimation_state(table: &[bool], t: usize, max_width: usize) -> Result<Statevector> {
    if !table.len().is_power_of_two() {
        return Err(Error::invalid(
            "predicate table length must be a power of two",
        ));
    }
    let input_bits = table.len().trailing_zeros() as usize;
    let width = t + input_bits;
    if width > max_width {
        return Err(Error::InfeasibleSize {
            what: "phase-estimation statevector width",
            size: width as u128,
            limit: max_width as u128,
            hint: "; use analytic mode",
        });
    }
    let mut state = Statevector::basis_capped(width, 0, max_width)?;
    for q in 0..width {
        state.apply_gate(&crate::circuit::Gate::h(q))?;
    }
    let input = t..width;
    for j in 0..t {
        let ctrl = [Control::pos(j)];
        for _ in 0..1u64 << (t - 1 - j) {
            state.apply_phase_oracle(input.clone(), table, &ctrl)?;
            state.apply_diffusion(input.clone(), &ctrl)?;
        }
    }
    let counting: Vec<usize> = (0..t).collect();
    state.apply_inverse_qft(&counting)?;
    Ok(state)
}

/// Outcome distribution of [`phase_estimation_state`].
pub fn statevector_distribution(table: &[bool], t: usize, max_width: usize) -> Result<Vec<f64>> {
    let state = phase_estimation_state(table, t, max_width)?;
    state.register_probabilities(&(0..t).collect::<Vec<_>>())
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountOptions {
    /// Accuracy bits `w`; `None` means `ceil(B/2) + 1`.
    pub accuracy_bits: Option<usize>,
    pub epsilon: f64,
    pub enumeration_cap: usize,
    pub max_width: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            accuracy_bits: None,
            epsilon: DEFAULT_EPSILON,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    State(Statevector),
    Distribution(Vec<f64>),
}

/// A counting experiment evaluated up to the measurement, ready to be
/// sampled any number of times.
#[derive(Debug, Clone)]
pub struct Counter {
    input_bits: usize,
    accuracy_bits: usize,
    counting_qubits: usize,
    solutions: u64,
    prepared: Prepared,
}

impl Counter {
    pub fn new(inst: &RamseyInstance, mode: Mode, opts: &CountOptions) -> Result<Self> {
        let ev = Evaluator::new(inst)?;
        let input_bits = ev.input_bits();
        let accuracy_bits = opts
            .accuracy_bits
            .unwrap_or_else(|| default_accuracy_bits(input_bits));
        let t = counting_qubits(accuracy_bits, opts.epsilon)?;
        let (solutions, prepared) = match mode {
            Mode::Statevector => {
                if t + input_bits > opts.max_width {
                    return Err(Error::InfeasibleSize {
                        what: "phase-estimation statevector width",
                        size: (t + input_bits) as u128,
                        limit: opts.max_width as u128,
                        hint: "; use analytic mode",
                    });
                }
                let table = ev.solution_table(opts.enumeration_cap)?;
                let solutions = table.iter().filter(|&&f| f).count() as u64;
                let state = phase_estimation_state(&table, t, opts.max_width)?;
                (solutions, Prepared::State(state))
            }
            Mode::Analytic => {
                let solutions = ev.count_solutions(opts.enumeration_cap)?;
                let dist = analytic_distribution(solutions, input_bits, t)?;
                (solutions, Prepared::Distribution(dist))
            }
        };
        Ok(Counter {
            input_bits,
            accuracy_bits,
            counting_qubits: t,
            solutions,
            prepared,
        })
    }

    pub fn input_bits(&self) -> usize {
        self.input_bits
    }

    pub fn accuracy_bits(&self) -> usize {
        self.accuracy_bits
    }

    pub fn counting_qubits(&self) -> usize {
        self.counting_qubits
    }

    /// Exact solution count from the classical oracle.
    pub fn solutions(&self) -> u64 {
        self.solutions
    }

    pub fn distribution(&self) -> Result<Vec<f64>> {
        match &self.prepared {
            Prepared::State(s) => {
                s.register_probabilities(&(0..self.counting_qubits).collect::<Vec<_>>())
            }
            Prepared::Distribution(d) => Ok(d.clone()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CountEstimate> {
        let outcome = match &self.prepared {
            Prepared::State(s) => {
                let mut s = s.clone();
                s.measure_register(&(0..self.counting_qubits).collect::<Vec<_>>(), rng)?
            }
            Prepared::Distribution(d) => {
                let mut u = rng.gen::<f64>() * d.iter().sum::<f64>();
                let mut pick = d.iter().rposition(|&p| p > 0.0).unwrap_or(0);
                for (b, &p) in d.iter().enumerate() {
                    if u < p {
                        pick = b;
                        break;
                    }
                    u -= p;
                }
                pick
            }
        };
        let mut est =
            CountEstimate::from_outcome(outcome as u64, self.counting_qubits, self.input_bits)?;
        est.bound = Some(error_bound(
            self.solutions,
            self.input_bits,
            self.accuracy_bits,
        ));
        Ok(est)
    }

    /// Run `run` of the stream seeded by `seed`.
    pub fn sample_seeded(&self, seed: u64, run: u64) -> Result<CountEstimate> {
        self.sample(&mut run_rng(seed, run))
    }
}

/// Independent random stream for one run of a seeded experiment.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

pub fn estimate_count(inst: &RamseyInstance, mode: Mode, seed: u64) -> Result<CountEstimate> {
    Counter::new(inst, mode, &CountOptions::default())?.sample_seeded(seed, 0)
}

/// `runs` independent shots; run `i` uses stream `i` of `seed`.
pub fn estimate_counts(
    inst: &RamseyInstance,
    mode: Mode,
    seed: u64,
    runs: usize,
    opts: &CountOptions,
) -> Result<Vec<CountEstimate>> {
    let counter = Counter::new(inst, mode, opts)?;
    (0..runs as u64)
        .map(|i| counter.sample_seeded(seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_examples() {
        assert_eq!(decode_outcome(0, 9, 10).unwrap(), (0.0, 0.0));
        let (theta, m) = decode_outcome(256, 9, 10).unwrap();
        assert!((theta - PI).abs() < 1e-15);
        assert!((m - 1024.0).abs() < 1e-9);
        let (theta, m) = decode_outcome(128, 9, 10).unwrap();
        assert!((theta - PI / 2.0).abs() < 1e-15);
        assert!((m - 512.0).abs() < 1e-9);
        for b in 1..512 {
            let (_, a) = decode_outcome(b, 9, 10).unwrap();
            let (_, c) = decode_outcome(512 - b, 9, 10).unwrap();
            assert!((a - c).abs() < 1e-9);
        }
        assert!(decode_outcome(512, 9, 10).is_err());
    }

    #[test]
    fn bound_examples() {
        // Equality for even B; the estimate error itself is strictly below.
        assert_eq!(error_bound(0, 10, 6), 1.0 / 16.0);
        assert!(error_bound(0, 9, 6) < 1.0 / 16.0);
        assert!((error_bound(12, 10, 6) - (12288f64.sqrt() + 4.0) / 64.0).abs() < 1e-12);
        assert!((error_bound(12, 10, 6) - 1.7946).abs() < 1e-4);
        for b in 1..=20 {
            let w = default_accuracy_bits(b);
            assert!(error_bound(0, b, w) <= 1.0 / 16.0);
            for m in [1u64, 3, 17, 1 << (b / 2)] {
                assert!(error_bound(m, b, w) <= (m as f64).sqrt() / 2.0 + 1.0 / 16.0 + 1e-12);
            }
        }
    }

    #[test]
    fn verdict_threshold() {
        assert_eq!(verdict(0.0), Verdict::Zero);
        assert_eq!(verdict(11.3), Verdict::Positive);
        assert_eq!(verdict(0.49), Verdict::Zero);
        assert_eq!(verdict(0.5), Verdict::Positive);
    }

    #[test]
    fn point_masses() {
        let d = analytic_distribution(0, 10, 9).unwrap();
        assert_eq!(d[0], 1.0);
        assert!(d[1..].iter().all(|&p| p < 1e-30));
        let d = analytic_distribution(1024, 10, 9).unwrap();
        assert!((d[256] - 1.0).abs() < 1e-15);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(analytic_distribution(1025, 10, 9).is_err());
    }

    #[test]
    fn distribution_is_symmetric_and_normalized() {
        for (m, b, t) in [(12, 10, 9), (1, 6, 7), (37, 6, 7), (5, 3, 6)] {
            let d = analytic_distribution(m, b, t).unwrap();
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let size = d.len();
            for k in 1..size {
                assert!((d[k] - d[size - k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn statevector_matches_analytic_small() {
        let table = [false, true, false, false, true, false, false, false];
        let sv = statevector_distribution(&table, 5, 20).unwrap();
        let an = analytic_distribution(2, 3, 5).unwrap();
        assert!(total_variation(&sv, &an) < 1e-9);
    }

    #[test]
    fn statevector_width_error_suggests_analytic() {
        let err = phase_estimation_state(&[false; 16], 10, 12).unwrap_err();
        assert!(err.to_string().contains("analytic"), "{err}");
    }

    #[test]
    fn every_solution_instance_gives_half_turn() {
        let inst = RamseyInstance::new(2, 3, 3, 2).unwrap();
        for mode in [Mode::Analytic, Mode::Statevector] {
            let counter = Counter::new(&inst, mode, &CountOptions::default()).unwrap();
            assert_eq!(counter.counting_qubits(), 5);
            for seed in 0..10 {
                let est = counter.sample_seeded(seed, 0).unwrap();
                assert_eq!(est.outcome, 16);
                assert!((est.theta - PI).abs() < 1e-15);
                assert!((est.m_hat - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_instance_in_statevector_mode() {
        // Every graph on two or more vertices has an edge or a non-edge.
        let inst = RamseyInstance::new(4, 2, 2, 2).unwrap();
        let counter = Counter::new(&inst, Mode::Statevector, &CountOptions::default()).unwrap();
        assert_eq!(counter.solutions(), 0);
        let d = counter.distribution().unwrap();
        assert!((d[0] - 1.0).abs() < 1e-12);
    }
}
