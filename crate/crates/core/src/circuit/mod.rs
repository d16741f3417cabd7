//! Gate-level circuit representation.
//!
//! Gates are `X`, `H`, `Z` and the global phase `E = -I`, each optionally
//! carrying a list of controls with individual polarity. A positive control
//! fires on `|1>`, a negative control on `|0>`; the gate acts only when every
//! control fires. An `E` gate has no target: uncontrolled it is a global sign,
//! controlled it negates exactly the basis states matching its control pattern.

mod builder;
mod text;

pub use builder::{
    build_counting_circuit, build_grover_circuit, build_oracle_circuit, counting_qubits,
    default_accuracy_bits, diffusion_gates, qubit_budget, BuildLimits, RamseyLayout,
    DEFAULT_EPSILON,
};
pub use text::{parse, serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    H,
    Z,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
    /// `None` exactly for `E`.
    pub target: Option<usize>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Self::controlled(GateKind::X, Vec::new(), target)
    }

    pub fn h(target: usize) -> Self {
        Self::controlled(GateKind::H, Vec::new(), target)
    }

    pub fn z(target: usize) -> Self {
        Self::controlled(GateKind::Z, Vec::new(), target)
    }

    pub fn e() -> Self {
        Self::phase(Vec::new())
    }

    /// `E` restricted to the basis states matching `controls`.
    pub fn phase(controls: Vec<Control>) -> Self {
        Gate {
            kind: GateKind::E,
            controls,
            target: None,
        }
    }

    pub fn controlled(kind: GateKind, controls: Vec<Control>, target: usize) -> Self {
        debug_assert!(kind != GateKind::E);
        Gate {
            kind,
            controls,
            target: Some(target),
        }
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Self::controlled(GateKind::X, controls, target)
    }

    pub fn mcz(controls: Vec<Control>, target: usize) -> Self {
        Self::controlled(GateKind::Z, controls, target)
    }

    /// Same gate with one more positive control.
    pub fn with_control(&self, qubit: usize) -> Self {
        let mut g = self.clone();
        g.controls.push(Control::pos(qubit));
        g
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().map(|c| c.qubit).chain(self.target)
    }

    /// Checks index range, distinctness, and that the gate is expressible in
    /// the text format (no controlled `H`).
    pub fn validate(&self, width: usize) -> Result<()> {
        match (self.kind, self.target) {
            (GateKind::E, Some(_)) => return Err(Error::invalid("E gate takes no target")),
            (GateKind::E, None) => {}
            (_, None) => {
                return Err(Error::invalid(format!(
                    "{:?} gate needs a target",
                    self.kind
                )))
            }
            (GateKind::H, Some(_)) if !self.controls.is_empty() => {
                return Err(Error::invalid("controlled H is not supported"))
            }
            _ => {}
        }
        let mut seen = std::collections::HashSet::new();
        for q in self.qubits() {
            if q >= width {
                return Err(Error::invalid(format!("qubit {q} outside width {width}")));
            }
            if !seen.insert(q) {
                return Err(Error::invalid(format!("qubit {q} used twice in one gate")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Gate(Gate),
    /// Inverse quantum Fourier transform; the first listed qubit is the most
    /// significant bit of the register value.
    InverseQft(Vec<usize>),
    /// Measure the listed qubits, first listed is the most significant bit.
    Measure(Vec<usize>),
}

impl Instruction {
    fn qubits(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Instruction::Gate(g) => Box::new(g.qubits()),
            Instruction::InverseQft(q) | Instruction::Measure(q) => Box::new(q.iter().copied()),
        }
    }
}

/// A named contiguous block of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub offset: usize,
    pub size: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, offset: usize, size: usize) -> Self {
        Register {
            name: name.into(),
            offset,
            size,
        }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.size
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    width: usize,
    registers: Vec<Register>,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            registers: Vec::new(),
            instructions: Vec::new(),
        }
    }

    pub fn with_registers(width: usize, registers: Vec<Register>) -> Result<Self> {
        let mut c = Self::new(width);
        for reg in registers {
            c.add_register(reg)?;
        }
        Ok(c)
    }

    pub fn add_register(&mut self, reg: Register) -> Result<()> {
        if reg.offset + reg.size > self.width {
            return Err(Error::invalid(format!(
                "register {} ({}..{}) exceeds width {}",
                reg.name,
                reg.offset,
                reg.offset + reg.size,
                self.width
            )));
        }
        if self.registers.iter().any(|r| r.name == reg.name) {
            return Err(Error::invalid(format!("duplicate register {}", reg.name)));
        }
        let overlaps = self.registers.iter().any(|r| {
            r.size > 0
                && reg.size > 0
                && r.offset < reg.offset + reg.size
                && reg.offset < r.offset + r.size
        });
        if overlaps {
            return Err(Error::invalid(format!(
                "register {} overlaps another",
                reg.name
            )));
        }
        self.registers.push(reg);
        Ok(())
    }

    pub fn push(&mut self, inst: Instruction) -> Result<()> {
        match &inst {
            Instruction::Gate(g) => g.validate(self.width)?,
            Instruction::InverseQft(qs) | Instruction::Measure(qs) => {
                let mut seen = std::collections::HashSet::new();
                for &q in qs {
                    if q >= self.width || !seen.insert(q) {
                        return Err(Error::invalid(format!(
                            "bad or repeated qubit {q} in register operation"
                        )));
                    }
                }
            }
        }
        self.instructions.push(inst);
        Ok(())
    }

    pub fn push_gate(&mut self, gate: Gate) -> Result<()> {
        self.push(Instruction::Gate(gate))
    }

    pub fn extend_gates<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push_gate(g))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            _ => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    /// Highest qubit index touched plus one.
    pub fn used_width(&self) -> usize {
        self.instructions
            .iter()
            .flat_map(|i| i.qubits())
            .max()
            .map_or(0, |q| q + 1)
    }
}
