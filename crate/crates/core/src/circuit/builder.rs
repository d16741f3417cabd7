//! Builders for the reversible oracle, the Grover iteration and the
//! phase-estimation counting circuit.

use super::{Circuit, Control, Gate, Instruction, Register};
use crate::oracle::{Evaluator, RamseyInstance};
use crate::{Error, Result};

/// Default phase-estimation failure probability.
pub const DEFAULT_EPSILON: f64 = 1.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildLimits {
    pub max_width: usize,
    pub max_gates: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_width: 4096,
            max_gates: 1 << 24,
        }
    }
}

/// `ceil(B / 2) + 1` accuracy bits.
pub fn default_accuracy_bits(input_bits: usize) -> usize {
    input_bits.div_ceil(2) + 1
}

/// Counting-register size `w + ceil(log2(2 + 1/(2 eps)))`.
pub fn counting_qubits(accuracy_bits: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!(
            "epsilon {epsilon} must lie in (0, 1)"
        )));
    }
    let extra = (2.0 + 1.0 / (2.0 * epsilon)).log2().ceil() as usize;
    Ok(accuracy_bits + extra)
}

/// Register sizes of the full counting circuit, in qubit order: counting,
/// input, clique ancillas, clique flag, independent-set ancillas,
/// independent-set flag, f flag, output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamseyLayout {
    pub counting: usize,
    pub input: usize,
    pub clique_ancilla: usize,
    pub indep_ancilla: usize,
}

impl RamseyLayout {
    pub fn for_instance(inst: &RamseyInstance, counting: usize) -> Result<Self> {
        Ok(RamseyLayout {
            counting,
            input: inst.input_bits()?,
            clique_ancilla: inst.clique_sets()?,
            indep_ancilla: inst.indep_sets()?,
        })
    }

    /// Ancillas of the oracle: both ancilla banks plus three flags.
    pub fn ancillas(&self) -> usize {
        self.clique_ancilla + self.indep_ancilla + 3
    }

    /// Qubits of the oracle alone: input, ancillas and output.
    pub fn oracle_width(&self) -> usize {
        self.input + self.ancillas() + 1
    }

    pub fn total(&self) -> usize {
        self.counting + self.oracle_width()
    }

    pub fn registers(&self) -> Vec<Register> {
        let sizes = [
            ("counting", self.counting),
            ("input", self.input),
            ("clique_ancilla", self.clique_ancilla),
            ("clique_flag", 1),
            ("indep_ancilla", self.indep_ancilla),
            ("indep_flag", 1),
            ("f_flag", 1),
            ("output", 1),
        ];
        let mut offset = 0;
        sizes
            .into_iter()
            .map(|(name, size)| {
                let reg = Register::new(name, offset, size);
                offset += size;
                reg
            })
            .collect()
    }

    fn offset(&self, name: &str) -> usize {
        self.registers()
            .into_iter()
            .find(|r| r.name == name)
            .map(|r| r.offset)
            .expect("known register name")
    }

    pub fn input_qubit(&self, k: usize) -> usize {
        self.counting + k
    }

    pub fn clique_flag(&self) -> usize {
        self.offset("clique_flag")
    }

    pub fn indep_flag(&self) -> usize {
        self.offset("indep_flag")
    }

    pub fn f_flag(&self) -> usize {
        self.offset("f_flag")
    }

    pub fn output(&self) -> usize {
        self.offset("output")
    }
}

/// Full-circuit qubit budget with the default counting register
/// `t = ceil(B/2) + 4`.
pub fn qubit_budget(inst: &RamseyInstance) -> Result<RamseyLayout> {
    let input = inst.input_bits()?;
    let t = counting_qubits(default_accuracy_bits(input), DEFAULT_EPSILON)?;
    RamseyLayout::for_instance(inst, t)
}

fn check_width(layout: &RamseyLayout, width: usize, limits: &BuildLimits) -> Result<()> {
    if width > limits.max_width {
        return Err(Error::InfeasibleSize {
            what: "circuit width",
            size: width as u128,
            limit: limits.max_width as u128,
            hint: "",
        });
    }
    debug_assert!(width <= layout.total());
    Ok(())
}

/// The gates computing `f(x)` into the f flag, before the copy to output.
fn compute_gates(layout: &RamseyLayout, ev: &Evaluator) -> Vec<Gate> {
    let clique_base = layout.counting + layout.input;
    let indep_base = layout.indep_flag() - layout.indep_ancilla;
    let mut gates = Vec::new();

    for (alpha, group) in ev.clique_groups().iter().enumerate() {
        let controls = group
            .iter()
            .map(|&b| Control::pos(layout.input_qubit(b)))
            .collect();
        gates.push(Gate::mcx(controls, clique_base + alpha));
    }
    let controls = (0..layout.clique_ancilla)
        .map(|a| Control::neg(clique_base + a))
        .collect();
    gates.push(Gate::mcx(controls, layout.clique_flag()));

    for (beta, group) in ev.indep_groups().iter().enumerate() {
        let controls = group
            .iter()
            .map(|&b| Control::neg(layout.input_qubit(b)))
            .collect();
        gates.push(Gate::mcx(controls, indep_base + beta));
    }
    let controls = (0..layout.indep_ancilla)
        .map(|a| Control::neg(indep_base + a))
        .collect();
    gates.push(Gate::mcx(controls, layout.indep_flag()));

    gates.push(Gate::mcx(
        vec![
            Control::pos(layout.clique_flag()),
            Control::pos(layout.indep_flag()),
        ],
        layout.f_flag(),
    ));
    gates
}

/// `U_f`, optionally controlled on one extra qubit. Only the copy onto the
/// output needs the extra control since compute and uncompute cancel.
fn oracle_gates(layout: &RamseyLayout, ev: &Evaluator, control: Option<usize>) -> Vec<Gate> {
    let compute = compute_gates(layout, ev);
    let mut copy = Gate::mcx(vec![Control::pos(layout.f_flag())], layout.output());
    if let Some(c) = control {
        copy = copy.with_control(c);
    }
    let mut gates = compute.clone();
    gates.push(copy);
    // Every gate here is self-inverse, so the reverse is the inverse.
    gates.extend(compute.into_iter().rev());
    gates
}

/// `2|psi><psi| - I` on `qubits`, where `|psi>` is the uniform superposition,
/// optionally controlled on one extra qubit.
///
/// Realized as `H^n . X_last . mcz(negative on the rest -> last) . X_last . E . H^n`.
/// The X pair moves the Z phase onto `|0...0>`, and `E` flips the overall
/// sign so the block is exact rather than correct up to phase.
pub fn diffusion_gates(qubits: &[usize], control: Option<usize>) -> Vec<Gate> {
    let Some((&last, rest)) = qubits.split_last() else {
        return Vec::new();
    };
    let mut gates: Vec<Gate> = qubits.iter().map(|&q| Gate::h(q)).collect();
    gates.push(Gate::x(last));
    let mut reflect = Gate::mcz(rest.iter().map(|&q| Control::neg(q)).collect(), last);
    let mut sign = Gate::e();
    if let Some(c) = control {
        reflect = reflect.with_control(c);
        sign = sign.with_control(c);
    }
    gates.push(reflect);
    gates.push(Gate::x(last));
    gates.push(sign);
    gates.extend(qubits.iter().map(|&q| Gate::h(q)));
    gates
}

/// Output qubit prepared in `(|0> - |1>)/sqrt 2` for phase kickback.
fn prepare_output(layout: &RamseyLayout) -> [Gate; 2] {
    [Gate::x(layout.output()), Gate::h(layout.output())]
}

fn grover_gates(layout: &RamseyLayout, ev: &Evaluator, control: Option<usize>) -> Vec<Gate> {
    let input: Vec<usize> = (0..layout.input).map(|k| layout.input_qubit(k)).collect();
    let mut gates = oracle_gates(layout, ev, control);
    gates.extend(diffusion_gates(&input, control));
    gates
}

fn oracle_only_circuit(layout: &RamseyLayout) -> Result<Circuit> {
    let regs = layout.registers();
    Circuit::with_registers(layout.total(), regs)
}

/// `U_f : |x, 0...0, y> -> |x, 0...0, y XOR f(x)>` without a counting register.
pub fn build_oracle_circuit(inst: &RamseyInstance, limits: &BuildLimits) -> Result<Circuit> {
    let layout = RamseyLayout::for_instance(inst, 0)?;
    check_width(&layout, layout.total(), limits)?;
    let ev = Evaluator::new(inst)?;
    let mut c = oracle_only_circuit(&layout)?;
    c.extend_gates(oracle_gates(&layout, &ev, None))?;
    Ok(c)
}

/// One Grover iteration `(2|psi><psi| - I) U_f`, preceded by the one-time
/// preparation of the output qubit.
pub fn build_grover_circuit(inst: &RamseyInstance, limits: &BuildLimits) -> Result<Circuit> {
    let layout = RamseyLayout::for_instance(inst, 0)?;
    check_width(&layout, layout.total(), limits)?;
    let ev = Evaluator::new(inst)?;
    let mut c = oracle_only_circuit(&layout)?;
    c.extend_gates(prepare_output(&layout))?;
    c.extend_gates(grover_gates(&layout, &ev, None))?;
    Ok(c)
}

/// Phase-estimation counting circuit with `t = w + ceil(log2(2 + 1/(2 eps)))`
/// counting qubits. Counting qubit `j` controls `G^(2^(t-1-j))`, so qubit 0
/// carries the most significant bit of the measured outcome.
pub fn build_counting_circuit(
    inst: &RamseyInstance,
    accuracy_bits: usize,
    epsilon: f64,
    limits: &BuildLimits,
) -> Result<Circuit> {
    let t = counting_qubits(accuracy_bits, epsilon)?;
    let layout = RamseyLayout::for_instance(inst, t)?;
    check_width(&layout, layout.total(), limits)?;
    let ev = Evaluator::new(inst)?;

    let per_iteration = grover_gates(&layout, &ev, Some(0)).len() as u128;
    let iterations = 1u128.checked_shl(t as u32).map(|p| p - 1);
    let total = iterations
        .and_then(|i| i.checked_mul(per_iteration))
        .and_then(|g| g.checked_add((2 + t + layout.input) as u128))
        .unwrap_or(u128::MAX);
    if total > limits.max_gates as u128 {
        return Err(Error::InfeasibleSize {
            what: "counting circuit gate count",
            size: total,
            limit: limits.max_gates as u128,
            hint: "",
        });
    }

    let mut c = Circuit::with_registers(layout.total(), layout.registers())?;
    c.extend_gates(prepare_output(&layout))?;
    c.extend_gates((0..t).map(Gate::h))?;
    c.extend_gates((0..layout.input).map(|k| Gate::h(layout.input_qubit(k))))?;
    for j in 0..t {
        let step = grover_gates(&layout, &ev, Some(j));
        for _ in 0..1u64 << (t - 1 - j) {
            c.extend_gates(step.iter().cloned())?;
        }
    }
    let counting: Vec<usize> = (0..t).collect();
    c.push(Instruction::InverseQft(counting.clone()))?;
    c.push(Instruction::Measure(counting))?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    fn inst(n: usize, m: usize, k: usize, r: usize) -> RamseyInstance {
        RamseyInstance::new(n, m, k, r).unwrap()
    }

    #[test]
    fn budget_matches_closed_form() {
        let b = qubit_budget(&inst(13, 4, 4, 3)).unwrap();
        assert_eq!(b.input, 286);
        assert_eq!(b.total(), 1867);
        assert_eq!(qubit_budget(&inst(6, 3, 3, 2)).unwrap().total(), 71);
        assert_eq!(qubit_budget(&inst(4, 3, 3, 2)).unwrap().total(), 25);
        for (n, m, k, r) in [(5, 3, 3, 2), (7, 4, 3, 3), (9, 5, 4, 2), (10, 4, 6, 3)] {
            let i = inst(n, m, k, r);
            let b = i.input_bits().unwrap();
            let closed =
                (3 * b).div_ceil(2) + i.clique_sets().unwrap() + i.indep_sets().unwrap() + 8;
            assert_eq!(qubit_budget(&i).unwrap().total(), closed);
        }
    }

    #[test]
    fn counting_register_size() {
        assert_eq!(
            counting_qubits(default_accuracy_bits(10), DEFAULT_EPSILON).unwrap(),
            9
        );
        assert_eq!(
            counting_qubits(default_accuracy_bits(15), DEFAULT_EPSILON).unwrap(),
            12
        );
        assert_eq!(counting_qubits(5, 0.25).unwrap(), 7);
        assert!(counting_qubits(5, 0.0).is_err());
        assert!(counting_qubits(5, 1.0).is_err());
    }

    #[test]
    fn oracle_shape() {
        let c = build_oracle_circuit(&inst(4, 3, 3, 2), &BuildLimits::default()).unwrap();
        assert_eq!(c.width(), 18);
        assert_eq!(c.gate_count(), 23);
        let gates: Vec<&Gate> = c.gates().collect();
        // First clique gate: triangle {1,2,3} -> pairs 12, 13, 23 = input bits 0, 1, 3.
        assert_eq!(
            gates[0].controls,
            vec![Control::pos(0), Control::pos(1), Control::pos(3)]
        );
        assert_eq!(gates[0].target, Some(6));
        assert_eq!(gates[11].controls, vec![Control::pos(16)]);
        assert_eq!(gates[11].target, Some(17));
        for i in 0..11 {
            assert_eq!(gates[i], gates[22 - i]);
        }
    }

    #[test]
    fn oracle_for_large_instance_builds() {
        let c = build_oracle_circuit(&inst(13, 4, 4, 3), &BuildLimits::default()).unwrap();
        assert_eq!(c.width(), 1867 - 147);
        assert_eq!(c.gate_count(), 2 * (715 + 1 + 715 + 1 + 1) + 1);
    }

    #[test]
    fn width_limit() {
        let limits = BuildLimits {
            max_width: 17,
            ..BuildLimits::default()
        };
        assert!(matches!(
            build_oracle_circuit(&inst(4, 3, 3, 2), &limits),
            Err(Error::InfeasibleSize { .. })
        ));
    }

    #[test]
    fn counting_gate_limit() {
        let i = inst(13, 4, 4, 3);
        let err = build_counting_circuit(
            &i,
            default_accuracy_bits(286),
            DEFAULT_EPSILON,
            &BuildLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InfeasibleSize { .. }));
    }

    #[test]
    fn diffusion_recipe() {
        let g = diffusion_gates(&[2, 3, 4], Some(0));
        assert_eq!(g.len(), 3 + 4 + 3);
        assert_eq!(g[4].kind, GateKind::Z);
        assert_eq!(
            g[4].controls,
            vec![Control::neg(2), Control::neg(3), Control::pos(0)]
        );
        assert_eq!(g[6], Gate::phase(vec![Control::pos(0)]));
        assert!(diffusion_gates(&[], None).is_empty());
    }

    #[test]
    fn counting_circuit_structure() {
        let i = inst(3, 3, 3, 2);
        let c = build_counting_circuit(
            &i,
            default_accuracy_bits(3),
            DEFAULT_EPSILON,
            &BuildLimits::default(),
        )
        .unwrap();
        let t = 6;
        assert_eq!(c.register("counting").unwrap().size, t);
        assert_eq!(c.width(), t + 3 + 1 + 1 + 4);
        let per = grover_gates(
            &RamseyLayout::for_instance(&i, t).unwrap(),
            &Evaluator::new(&i).unwrap(),
            Some(0),
        )
        .len();
        assert_eq!(c.gate_count(), 2 + t + 3 + 63 * per);
        let n = c.instructions().len();
        assert_eq!(
            c.instructions()[n - 2],
            Instruction::InverseQft((0..t).collect())
        );
        assert_eq!(
            c.instructions()[n - 1],
            Instruction::Measure((0..t).collect())
        );
    }
}
