//! Dense statevector simulation.
//!
//! Basis index bit `j` is qubit `j`, so qubit 0 is the least significant bit
//! of an amplitude index. Register values read by [`Statevector::measure_register`]
//! and friends take a qubit list whose first entry is the most significant bit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Control, Gate, GateKind, Instruction, Polarity};
use crate::{Error, Result};

/// Largest width allocated unless a caller raises the cap (2^27 amplitudes
/// is 2 GiB).
pub const DEFAULT_MAX_WIDTH: usize = 27;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

/// Calls `f` for every index `i < 2^width` with `i & fixed == value`.
#[inline]
fn for_each_matching(width: usize, fixed: usize, value: usize, mut f: impl FnMut(usize)) {
    let full = (1usize << width) - 1;
    let free = full & !fixed;
    let mut s = 0usize;
    loop {
        f(s | value);
        if s == free {
            break;
        }
        s = ((s | !free).wrapping_add(1)) & free;
    }
}

fn control_masks(controls: &[Control]) -> (usize, usize) {
    controls
        .iter()
        .fold((0, 0), |(ones, zeros), c| match c.polarity {
            Polarity::Positive => (ones | 1 << c.qubit, zeros),
            Polarity::Negative => (ones, zeros | 1 << c.qubit),
        })
}

impl Statevector {
    /// `|0...0>` on `width` qubits.
    pub fn new(width: usize) -> Result<Self> {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Result<Self> {
        Self::basis_capped(width, index, DEFAULT_MAX_WIDTH)
    }

    pub fn basis_capped(width: usize, index: usize, max_width: usize) -> Result<Self> {
        if width > max_width {
            return Err(Error::InfeasibleSize {
                what: "statevector width",
                size: width as u128,
                limit: max_width as u128,
                hint: "",
            });
        }
        if index >> width != 0 {
            return Err(Error::invalid(format!(
                "basis index {index} outside {width} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { width, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let width = amps.len().trailing_zeros() as usize;
        Ok(Statevector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.width {
            return Err(Error::invalid(format!(
                "qubit {q} outside width {}",
                self.width
            )));
        }
        Ok(())
    }

    fn check_range(&self, r: &Range<usize>) -> Result<()> {
        if r.end > self.width || r.start > r.end {
            return Err(Error::invalid(format!(
                "register {r:?} outside width {}",
                self.width
            )));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        let (ones, zeros) = control_masks(&gate.controls);
        if ones & zeros != 0 {
            return Err(Error::invalid(
                "qubit used as both positive and negative control",
            ));
        }
        let ctrl = ones | zeros;
        let width = self.width;
        let amps = &mut self.amps;
        match (gate.kind, gate.target) {
            (GateKind::E, _) => {
                for_each_matching(width, ctrl, ones, |i| amps[i] = -amps[i]);
            }
            (kind, Some(t)) => {
                let bit = 1 << t;
                if ctrl & bit != 0 {
                    return Err(Error::invalid(format!(
                        "qubit {t} is both control and target"
                    )));
                }
                match kind {
                    GateKind::X => {
                        for_each_matching(width, ctrl | bit, ones, |i| amps.swap(i, i | bit))
                    }
                    GateKind::Z => {
                        for_each_matching(width, ctrl | bit, ones | bit, |i| amps[i] = -amps[i])
                    }
                    GateKind::H => for_each_matching(width, ctrl | bit, ones, |i| {
                        let (a, b) = (amps[i], amps[i | bit]);
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
                    }),
                    GateKind::E => unreachable!(),
                }
            }
            (_, None) => return Err(Error::invalid("gate without target")),
        }
        Ok(())
    }

    /// Negates every amplitude whose `register` value `v` (qubit
    /// `register.start` is bit 0 of `v`) has `table[v]` set, restricted to
    /// basis states matching `controls`.
    pub fn apply_phase_oracle(
        &mut self,
        register: Range<usize>,
        table: &[bool],
        controls: &[Control],
    ) -> Result<()> {
        self.check_range(&register)?;
        let len = register.len();
        if table.len() != 1 << len {
            return Err(Error::invalid(format!(
                "predicate table has {} entries, register needs {}",
                table.len(),
                1usize << len
            )));
        }
        for c in controls {
            self.check_qubit(c.qubit)?;
        }
        let (ones, zeros) = control_masks(controls);
        let reg_mask = ((1usize << len) - 1) << register.start;
        if (ones | zeros) & reg_mask != 0 {
            return Err(Error::invalid("control inside the oracle register"));
        }
        let off = register.start;
        let amps = &mut self.amps;
        for_each_matching(self.width, ones | zeros, ones, |i| {
            if table[(i & reg_mask) >> off] {
                amps[i] = -amps[i];
            }
        });
        Ok(())
    }

    /// `2|psi><psi| - I` on `register` with `|psi>` uniform: every amplitude
    /// `a` becomes `2 * mean - a`, blockwise over the other qubits and only
    /// for blocks matching `controls`.
    pub fn apply_diffusion(&mut self, register: Range<usize>, controls: &[Control]) -> Result<()> {
        self.check_range(&register)?;
        for c in controls {
            self.check_qubit(c.qubit)?;
        }
        let len = register.len();
        if len == 0 {
            return Ok(());
        }
        let (ones, zeros) = control_masks(controls);
        let off = register.start;
        let reg_mask = ((1usize << len) - 1) << off;
        if (ones | zeros) & reg_mask != 0 {
            return Err(Error::invalid("control inside the diffusion register"));
        }
        let size = 1usize << len;
        let scale = 1.0 / size as f64;
        let amps = &mut self.amps;
        for_each_matching(self.width, ones | zeros | reg_mask, ones, |o| {
            let mut sum = Complex64::new(0.0, 0.0);
            for r in 0..size {
                sum += amps[o | r << off];
            }
            let twice_mean = sum * (2.0 * scale);
            for r in 0..size {
                let i = o | r << off;
                amps[i] = twice_mean - amps[i];
            }
        });
        Ok(())
    }

    fn swap_qubits(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (ba, bb) = (1 << a, 1 << b);
        let amps = &mut self.amps;
        for_each_matching(self.width, ba | bb, ba, |i| amps.swap(i, i ^ ba ^ bb));
    }

    fn controlled_phase(&mut self, a: usize, b: usize, angle: f64) {
        let phase = Complex64::from_polar(1.0, angle);
        let both = 1 << a | 1 << b;
        let amps = &mut self.amps;
        for_each_matching(self.width, both, both, |i| amps[i] *= phase);
    }

    fn check_register_list(&self, qubits: &[usize]) -> Result<()> {
        let mut seen = 0usize;
        for &q in qubits {
            self.check_qubit(q)?;
            if seen & 1 << q != 0 {
                return Err(Error::invalid(format!("qubit {q} repeated in register")));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Quantum Fourier transform `|v> -> 2^{-n/2} sum_b e^{2 pi i v b / 2^n} |b>`
    /// on the register `qubits` (first entry most significant).
    pub fn apply_qft(&mut self, qubits: &[usize]) -> Result<()> {
        self.check_register_list(qubits)?;
        let n = qubits.len();
        for i in 0..n {
            self.apply_gate(&Gate::h(qubits[i]))?;
            for k in i + 1..n {
                self.controlled_phase(
                    qubits[k],
                    qubits[i],
                    2.0 * PI / (1u64 << (k - i + 1)) as f64,
                );
            }
        }
        for i in 0..n / 2 {
            self.swap_qubits(qubits[i], qubits[n - 1 - i]);
        }
        Ok(())
    }

    /// Inverse of [`Statevector::apply_qft`].
    pub fn apply_inverse_qft(&mut self, qubits: &[usize]) -> Result<()> {
        self.check_register_list(qubits)?;
        let n = qubits.len();
        for i in 0..n / 2 {
            self.swap_qubits(qubits[i], qubits[n - 1 - i]);
        }
        for i in (0..n).rev() {
            for k in (i + 1..n).rev() {
                self.controlled_phase(
                    qubits[k],
                    qubits[i],
                    -2.0 * PI / (1u64 << (k - i + 1)) as f64,
                );
            }
            self.apply_gate(&Gate::h(qubits[i]))?;
        }
        Ok(())
    }

    fn register_value(index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |v, &q| v << 1 | (index >> q & 1))
    }

    /// Outcome distribution of measuring `qubits` (first entry most significant).
    pub fn register_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_register_list(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[Self::register_value(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Samples a Born-rule outcome for `qubits` and collapses the state onto it.
    pub fn measure_register<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<usize> {
        let probs = self.register_probabilities(qubits)?;
        let total: f64 = probs.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut outcome = probs.len() - 1;
        for (b, &p) in probs.iter().enumerate() {
            if u < p {
                outcome = b;
                break;
            }
            u -= p;
        }
        // Guard against landing on a zero-probability tail through rounding.
        if probs[outcome] == 0.0 {
            outcome = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        }
        let scale = 1.0 / probs[outcome].sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if Self::register_value(i, qubits) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(outcome)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: Statevector,
    /// One entry per `measure` instruction, in program order.
    pub outcomes: Vec<usize>,
}

/// Runs `circuit` from basis state `initial`; measurements draw from a
/// ChaCha stream seeded with `seed`.
pub fn run_circuit(circuit: &Circuit, initial: usize, seed: u64) -> Result<RunResult> {
    run_circuit_capped(circuit, initial, seed, DEFAULT_MAX_WIDTH)
}

pub fn run_circuit_capped(
    circuit: &Circuit,
    initial: usize,
    seed: u64,
    max_width: usize,
) -> Result<RunResult> {
    let mut state = Statevector::basis_capped(circuit.width(), initial, max_width)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate(g) => state.apply_gate(g)?,
            Instruction::InverseQft(q) => state.apply_inverse_qft(q)?,
            Instruction::Measure(q) => outcomes.push(state.measure_register(q, &mut rng)?),
        }
    }
    Ok(RunResult { state, outcomes })
}
