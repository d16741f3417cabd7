//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 18
//! reg input 0 6
//! h 0
//! mcx +1 +2 0
//! mcz -3 4
//! ce +1 -2
//! e
//! iqft 0 1 2
//! measure 0 1 2
//! ```
//!
//! Uncontrolled `X`/`Z` are written `x q` / `z q`. Blank lines and `#`
//! comments are ignored by the parser.

use std::fmt::Write;

use super::{Circuit, Control, Gate, GateKind, Instruction, Polarity, Register};
use crate::{Error, Result};

fn write_controls(out: &mut String, controls: &[Control]) {
    for c in controls {
        let sign = match c.polarity {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        };
        let _ = write!(out, " {sign}{}", c.qubit);
    }
}

fn write_list(out: &mut String, op: &str, qubits: &[usize]) {
    out.push_str(op);
    for q in qubits {
        let _ = write!(out, " {q}");
    }
}

pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.width());
    for r in circuit.registers() {
        let _ = writeln!(out, "reg {} {} {}", r.name, r.offset, r.size);
    }
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate(g) => match (g.kind, g.target, g.controls.is_empty()) {
                (GateKind::E, _, true) => out.push('e'),
                (GateKind::E, _, false) => {
                    out.push_str("ce");
                    write_controls(&mut out, &g.controls);
                }
                (kind, Some(t), true) => {
                    let op = match kind {
                        GateKind::X => "x",
                        GateKind::H => "h",
                        _ => "z",
                    };
                    let _ = write!(out, "{op} {t}");
                }
                (kind, Some(t), false) => {
                    // Validation rules out controlled H.
                    out.push_str(if kind == GateKind::X { "mcx" } else { "mcz" });
                    write_controls(&mut out, &g.controls);
                    let _ = write!(out, " {t}");
                }
                (_, None, _) => unreachable!("validated gate without target"),
            },
            Instruction::InverseQft(q) => write_list(&mut out, "iqft", q),
            Instruction::Measure(q) => write_list(&mut out, "measure", q),
        }
        out.push('\n');
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn index(line: usize, tok: &str) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, format!("expected a qubit index, found {tok:?}")));
    }
    tok.parse()
        .map_err(|e| err(line, format!("bad index {tok:?}: {e}")))
}

fn control(line: usize, tok: &str) -> Result<Control> {
    let polarity = match tok.as_bytes().first() {
        Some(b'+') => Polarity::Positive,
        Some(b'-') => Polarity::Negative,
        _ => return Err(err(line, format!("control {tok:?} needs a +/- prefix"))),
    };
    Ok(Control {
        qubit: index(line, &tok[1..])?,
        polarity,
    })
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split(' ').collect();
        if toks.iter().any(|t| t.is_empty()) {
            return Err(err(line, "tokens must be separated by single spaces"));
        }
        let (op, args) = (toks[0], &toks[1..]);

        if op == "qubits" {
            if circuit.is_some() {
                return Err(err(line, "duplicate `qubits` header"));
            }
            let [w] = args else {
                return Err(err(line, "usage: qubits Q"));
            };
            circuit = Some(Circuit::new(index(line, w)?));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err(line, "`qubits Q` header must come first"))?;
        let at = |e: Error| match e {
            Error::InvalidArgument(m) => err(line, m),
            other => other,
        };

        match op {
            "reg" => {
                let [name, offset, size] = args else {
                    return Err(err(line, "usage: reg NAME OFFSET SIZE"));
                };
                c.add_register(Register::new(
                    *name,
                    index(line, offset)?,
                    index(line, size)?,
                ))
                .map_err(at)?;
            }
            "h" | "x" | "z" => {
                let [t] = args else {
                    return Err(err(line, format!("usage: {op} QUBIT")));
                };
                let kind = match op {
                    "h" => GateKind::H,
                    "x" => GateKind::X,
                    _ => GateKind::Z,
                };
                c.push_gate(Gate::controlled(kind, Vec::new(), index(line, t)?))
                    .map_err(at)?;
            }
            "e" => {
                if !args.is_empty() {
                    return Err(err(line, "`e` takes no arguments"));
                }
                c.push_gate(Gate::e()).map_err(at)?;
            }
            "ce" => {
                let controls = args
                    .iter()
                    .map(|t| control(line, t))
                    .collect::<Result<Vec<_>>>()?;
                c.push_gate(Gate::phase(controls)).map_err(at)?;
            }
            "mcx" | "mcz" => {
                let Some((t, ctrl)) = args.split_last() else {
                    return Err(err(line, format!("usage: {op} [+/-C ...] TARGET")));
                };
                let controls = ctrl
                    .iter()
                    .map(|t| control(line, t))
                    .collect::<Result<Vec<_>>>()?;
                let kind = if op == "mcx" {
                    GateKind::X
                } else {
                    GateKind::Z
                };
                c.push_gate(Gate::controlled(kind, controls, index(line, t)?))
                    .map_err(at)?;
            }
            "iqft" | "measure" => {
                let qubits = args
                    .iter()
                    .map(|t| index(line, t))
                    .collect::<Result<Vec<_>>>()?;
                let inst = if op == "iqft" {
                    Instruction::InverseQft(qubits)
                } else {
                    Instruction::Measure(qubits)
                };
                c.push(inst).map_err(at)?;
            }
            other => return Err(err(line, format!("unknown operation {other:?}"))),
        }
    }
    circuit.ok_or_else(|| err(1, "empty circuit text, missing `qubits Q` header"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_gate(g: Gate) -> String {
        let mut c = Circuit::new(5);
        c.push_gate(g).unwrap();
        serialize(&c).lines().nth(1).unwrap().to_string()
    }

    #[test]
    fn gate_lines() {
        assert_eq!(one_gate(Gate::h(0)), "h 0");
        assert_eq!(
            one_gate(Gate::mcx(vec![Control::pos(1), Control::pos(2)], 0)),
            "mcx +1 +2 0"
        );
        assert_eq!(one_gate(Gate::mcz(vec![Control::neg(3)], 4)), "mcz -3 4");
        assert_eq!(one_gate(Gate::e()), "e");
        assert_eq!(
            one_gate(Gate::phase(vec![Control::pos(1), Control::neg(0)])),
            "ce +1 -0"
        );
        assert_eq!(one_gate(Gate::mcx(vec![], 2)), "x 2");
    }

    #[test]
    fn header_and_round_trip() {
        let mut c =
            Circuit::with_registers(4, vec![Register::new("a", 0, 2), Register::new("b", 2, 2)])
                .unwrap();
        c.push_gate(Gate::z(3)).unwrap();
        c.push(Instruction::InverseQft(vec![0, 1])).unwrap();
        c.push(Instruction::Measure(vec![0, 1])).unwrap();
        let text = serialize(&c);
        assert_eq!(
            text,
            "qubits 4\nreg a 0 2\nreg b 2 2\nz 3\niqft 0 1\nmeasure 0 1\n"
        );
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn parse_accepts_comments_and_zero_control_mcx() {
        let c = parse("# header\nqubits 3\n\nmcx 1 # plain x\n").unwrap();
        assert_eq!(c.gates().next().unwrap(), &Gate::x(1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("h 0\n", 1),
            ("qubits 2\nh 2\n", 2),
            ("qubits 2\nmcx 1 0\n", 2),
            ("qubits 2\nmcx +1  0\n", 2),
            ("qubits 2\nfoo 1\n", 2),
            ("qubits 2\nqubits 2\n", 2),
            ("qubits 3\nmcz +0 +0 1\n", 2),
            ("qubits 3\nreg a 2 2\n", 2),
            ("qubits 3\ne 1\n", 2),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(parse("").is_err());
    }
}
