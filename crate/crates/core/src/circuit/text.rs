// SPDX-License-Identifier: Apache-2.0

//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! phase 0.7853981633974483
//! h 1
//! cry 1 0 1.1423973285781066
//! measure 0 0
//! ```
//!
//! The `qubits` header comes first, an optional `phase` line second, then one
//! gate per line: the lowercase mnemonic, its qubits (control first), and
//! then the angle in radians or, for `measure`, the classical bit. Tokens are
//! separated by single spaces and lines end in LF. Angles are written in the
//! shortest decimal form that reads back to the same `f64`.

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message} (at token {token:?})")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

const END_OF_LINE: &str = "<end of line>";

pub fn serialize(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits());
    if c.global_phase() != 0.0 {
        writeln!(out, "phase {}", c.global_phase()).expect("writing to a String");
    }
    for g in c.gates() {
        writeln!(out, "{g}").expect("writing to a String");
    }
    out
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn error(&self, token: &str, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            token: token.to_string(),
            message: message.into(),
        }
    }

    fn token(&self, i: usize) -> Result<&'a str, ParseError> {
        self.tokens
            .get(i)
            .copied()
            .ok_or_else(|| self.error(END_OF_LINE, "missing operand"))
    }

    fn expect_len(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.iter().any(|t| t.is_empty()) {
            return Err(self.error("", "empty token; separate tokens with a single space"));
        }
        match self.tokens.len().cmp(&n) {
            std::cmp::Ordering::Less => Err(self.error(END_OF_LINE, "missing operand")),
            std::cmp::Ordering::Greater => Err(self.error(self.tokens[n], "unexpected token")),
            std::cmp::Ordering::Equal => Ok(()),
        }
    }

    fn index(&self, i: usize) -> Result<usize, ParseError> {
        let t = self.token(i)?;
        t.parse()
            .map_err(|_| self.error(t, "expected a non-negative integer"))
    }

    fn angle(&self, i: usize) -> Result<f64, ParseError> {
        let t = self.token(i)?;
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(t, "expected a finite angle in radians")),
        }
    }
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, raw)| Line {
        number: i + 1,
        tokens: raw.split(' ').collect(),
    });

    let header = lines.next().expect("split yields at least one item");
    if header.token(0)? != "qubits" {
        return Err(header.error(header.tokens[0], "expected `qubits N` header"));
    }
    header.expect_len(2)?;
    let width = header.index(1)?;
    let mut circuit = Circuit::new(width).map_err(|e| header.error(header.tokens[1], e.to_string()))?;

    let mut first_gate_line = true;
    for line in lines {
        let mnemonic = line.tokens[0];
        if mnemonic == "phase" && first_gate_line {
            line.expect_len(2)?;
            let phase = line.angle(1)?;
            circuit
                .set_global_phase(phase)
                .map_err(|e| line.error(line.tokens[1], e.to_string()))?;
            first_gate_line = false;
            continue;
        }
        first_gate_line = false;

        let (kind, qubits) = match mnemonic {
            "x" | "sx" | "sxdg" | "h" => {
                line.expect_len(2)?;
                let kind = match mnemonic {
                    "x" => GateKind::X,
                    "sx" => GateKind::Sx,
                    "sxdg" => GateKind::Sxdg,
                    _ => GateKind::H,
                };
                (kind, vec![line.index(1)?])
            }
            "ry" | "rz" => {
                line.expect_len(3)?;
                let t = line.angle(2)?;
                let kind = if mnemonic == "ry" { GateKind::Ry(t) } else { GateKind::Rz(t) };
                (kind, vec![line.index(1)?])
            }
            "cx" => {
                line.expect_len(3)?;
                (GateKind::Cx, vec![line.index(1)?, line.index(2)?])
            }
            "cry" | "crz" => {
                line.expect_len(4)?;
                let t = line.angle(3)?;
                let kind = if mnemonic == "cry" { GateKind::Cry(t) } else { GateKind::Crz(t) };
                (kind, vec![line.index(1)?, line.index(2)?])
            }
            "measure" => {
                line.expect_len(3)?;
                (GateKind::Measure(line.index(2)?), vec![line.index(1)?])
            }
            other => return Err(line.error(other, "unknown gate mnemonic")),
        };
        let gate = Gate::new(kind, &qubits).map_err(|e| line.error(mnemonic, e.to_string()))?;
        circuit.push_gate(gate).map_err(|e| {
            let token = match &e {
                CircuitError::QubitOutOfRange { qubit, .. } => qubit.to_string(),
                _ => mnemonic.to_string(),
            };
            line.error(&token, e.to_string())
        })?;
    }
    Ok(circuit)
}
