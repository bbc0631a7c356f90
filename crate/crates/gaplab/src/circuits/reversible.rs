//! Reversible circuits over {X, CNOT, Toffoli}.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "op")]
pub enum RevGate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Toffoli { c1: usize, c2: usize, target: usize },
}

impl RevGate {
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            RevGate::X { target } => vec![target],
            RevGate::Cnot { control, target } => vec![control, target],
            RevGate::Toffoli { c1, c2, target } => vec![c1, c2, target],
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReversibleCircuit {
    inputs: usize,
    ancillas: usize,
    gates: Vec<RevGate>,
    output_wire: usize,
}

impl ReversibleCircuit {
    pub fn new(
        inputs: usize,
        ancillas: usize,
        gates: Vec<RevGate>,
        output_wire: usize,
    ) -> Result<Self> {
        let width = inputs + ancillas;
        if inputs == 0 {
            return Err(Error::invalid("reversible circuit", "needs >= 1 input wire"));
        }
        if output_wire >= width {
            return Err(Error::invalid(
                "reversible circuit",
                format!("output wire {output_wire} out of range (width {width})"),
            ));
        }
        for g in &gates {
            let ws = g.wires();
            for &w in &ws {
                if w >= width {
                    return Err(Error::invalid(
                        "reversible circuit",
                        format!("gate {g:?} addresses wire {w} >= width {width}"),
                    ));
                }
            }
            let mut sorted = ws.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != ws.len() {
                return Err(Error::invalid(
                    "reversible circuit",
                    format!("gate {g:?} repeats a wire"),
                ));
            }
        }
        Ok(ReversibleCircuit {
            inputs,
            ancillas,
            gates,
            output_wire,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas
    }

    pub fn width(&self) -> usize {
        self.inputs + self.ancillas
    }

    pub fn gates(&self) -> &[RevGate] {
        &self.gates
    }

    pub fn output_wire(&self) -> usize {
        self.output_wire
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, RevGate::Toffoli { .. }))
            .count()
    }

    /// Runs the circuit on basis input `x` (ancillas start at 0) and returns
    /// the full register. Classical: each gate permutes basis states.
    pub fn run_basis(&self, x: u64) -> Result<u64> {
        let width = self.width();
        if width > 64 {
            return Err(Error::Resource {
                what: "reversible register width",
                required: width as u64,
                limit: 64,
            });
        }
        if self.inputs < 64 && x >> self.inputs != 0 {
            return Err(Error::Argument(format!(
                "input {x:#x} wider than {} input wires",
                self.inputs
            )));
        }
        let mut s = x;
        for g in &self.gates {
            match *g {
                RevGate::X { target } => s ^= 1u64 << target,
                RevGate::Cnot { control, target } => {
                    if s >> control & 1 == 1 {
                        s ^= 1u64 << target;
                    }
                }
                RevGate::Toffoli { c1, c2, target } => {
                    if s >> c1 & 1 == 1 && s >> c2 & 1 == 1 {
                        s ^= 1u64 << target;
                    }
                }
            }
        }
        Ok(s)
    }

    /// Value of the designated output wire on basis input `x`.
    pub fn evaluate(&self, x: u64) -> Result<bool> {
        Ok(self.run_basis(x)? >> self.output_wire & 1 == 1)
    }
}
