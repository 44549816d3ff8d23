//! Line-based circuit files.
//!
//! ```text
//! qubits <N>
//! dt <float>
//! #layer <k>
//! #term <id>
//! H 0
//! RZ 3 -1.2500000000000000e-1
//! #fswap <a> <b>
//! CNOT 4 5
//! ```
//!
//! Gate lines are `H q`, `Y q`, `YDG q`, `RX q θ`, `RZ q θ`, `T q θ`,
//! `G θ` and `CNOT control target`. Angles carry 17 significant digits so
//! that a written file reads back to the identical gate list. A `#term` or
//! `#fswap` comment tags the gates that follow it.

use std::io::{self, BufRead, Write};

use crate::gates::{Gate, GateOp, Origin};
use crate::network::{event_gates, schedule_parallel, CompiledCircuit, Event};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Ordering {
    /// Chronological; `#layer` marks each network sub-step.
    #[default]
    Serial,
    /// Grouped by parallel layer; `#layer` marks each layer.
    Layered,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitFile {
    pub n_qubits: usize,
    pub dt: f64,
    pub gates: Vec<GateOp>,
    /// Index into `gates` where each `#layer` begins.
    pub layer_starts: Vec<usize>,
}

fn write_event(out: &mut impl Write, e: &Event) -> io::Result<()> {
    match *e {
        Event::Term { term, .. } => writeln!(out, "#term {term}")?,
        Event::Fswap { position, .. } => writeln!(out, "#fswap {} {}", position, position + 1)?,
        _ => return Ok(()),
    }
    for op in event_gates(e) {
        writeln!(out, "{}", op.gate)?;
    }
    Ok(())
}

/// Stream a compiled circuit; gates are generated on the fly.
pub fn write_circuit(
    c: &CompiledCircuit,
    out: &mut impl Write,
    ordering: Ordering,
) -> io::Result<()> {
    writeln!(out, "qubits {}", c.n_qubits)?;
    writeln!(out, "dt {:.16e}", c.dt)?;
    match ordering {
        Ordering::Serial => {
            let mut layer = 0;
            let mut current = None;
            for e in &c.trace.events {
                let slot = match e {
                    Event::Term { slot, .. } | Event::Fswap { slot, .. } => *slot,
                    _ => continue,
                };
                if current != Some(slot) {
                    current = Some(slot);
                    writeln!(out, "#layer {layer}")?;
                    layer += 1;
                }
                write_event(out, e)?;
            }
        }
        Ordering::Layered => {
            let schedule = schedule_parallel(c);
            for (k, layer) in schedule.layers.iter().enumerate() {
                writeln!(out, "#layer {k}")?;
                for &idx in layer {
                    write_event(out, &c.trace.events[idx])?;
                }
            }
        }
    }
    Ok(())
}

pub fn circuit_to_string(c: &CompiledCircuit, ordering: Ordering) -> String {
    let mut buf = Vec::new();
    write_circuit(c, &mut buf, ordering).expect("writing to memory");
    String::from_utf8(buf).expect("circuit text is UTF-8")
}

#[derive(Debug, thiserror::Error)]
pub enum CircuitReadError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitReadError {
    CircuitReadError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn read_circuit(input: impl BufRead) -> Result<CircuitFile, CircuitReadError> {
    let mut n_qubits = None;
    let mut dt = None;
    let mut gates = Vec::new();
    let mut layer_starts = Vec::new();
    let mut origin = Origin::Unknown;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, args)) = tokens.split_first() else {
            continue;
        };
        let int = |i: usize| -> Result<usize, CircuitReadError> {
            args.get(i)
                .ok_or_else(|| syntax(line_no, format!("{head}: missing operand")))?
                .parse()
                .map_err(|_| syntax(line_no, format!("{head}: bad integer")))
        };
        let float = |i: usize| -> Result<f64, CircuitReadError> {
            args.get(i)
                .ok_or_else(|| syntax(line_no, format!("{head}: missing angle")))?
                .parse()
                .map_err(|_| syntax(line_no, format!("{head}: bad number")))
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(
                    line_no,
                    format!("{head}: expected {n} operands, got {}", args.len()),
                ))
            }
        };

        let gate = match head {
            "qubits" => {
                arity(1)?;
                n_qubits = Some(int(0)?);
                continue;
            }
            "dt" => {
                arity(1)?;
                dt = Some(float(0)?);
                continue;
            }
            "#layer" => {
                layer_starts.push(gates.len());
                continue;
            }
            "#term" => {
                origin = Origin::Term(int(0)?);
                continue;
            }
            "#fswap" => {
                origin = Origin::Fswap(int(0)?);
                continue;
            }
            h if h.starts_with('#') => continue,
            "H" => arity(1).and_then(|_| Ok(Gate::H(int(0)?)))?,
            "Y" => arity(1).and_then(|_| Ok(Gate::Y(int(0)?)))?,
            "YDG" => arity(1).and_then(|_| Ok(Gate::Ydg(int(0)?)))?,
            "RX" => arity(2).and_then(|_| Ok(Gate::Rx(int(0)?, float(1)?)))?,
            "RZ" => arity(2).and_then(|_| Ok(Gate::Rz(int(0)?, float(1)?)))?,
            "T" => arity(2).and_then(|_| Ok(Gate::T(int(0)?, float(1)?)))?,
            "G" => arity(1).and_then(|_| Ok(Gate::G(float(0)?)))?,
            "CNOT" => {
                arity(2)?;
                let (control, target) = (int(0)?, int(1)?);
                if control == target {
                    return Err(syntax(line_no, "CNOT control equals target"));
                }
                Gate::Cnot { control, target }
            }
            other => return Err(syntax(line_no, format!("unknown gate '{other}'"))),
        };
        let n = n_qubits.ok_or_else(|| syntax(line_no, "gate before qubits header"))?;
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= n) {
            return Err(syntax(
                line_no,
                format!("qubit {q} out of range for {n} qubits"),
            ));
        }
        gates.push(GateOp { gate, origin });
    }

    Ok(CircuitFile {
        n_qubits: n_qubits.ok_or_else(|| syntax(1, "missing qubits header"))?,
        dt: dt.unwrap_or(0.0),
        gates,
        layer_starts,
    })
}
