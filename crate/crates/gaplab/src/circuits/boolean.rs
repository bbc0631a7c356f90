//! Boolean circuits with fan-in <= 2, used as phase oracles.
//!
//! Node ids: inputs are `0..n`, gate `j` is node `n + j`, and every gate may
//! only reference earlier nodes, which makes the DAG property structural.

use serde::{Deserialize, Serialize};

use crate::circuits::statevector::Statevector;
use crate::circuits::DistributionTable;
use crate::gf2poly::Gf2Polynomial;
use crate::scalar::Real;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoolOp {
    And,
    Or,
    Not,
    Xor,
}

impl BoolOp {
    pub fn arity(&self) -> usize {
        match self {
            BoolOp::Not => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoolGate {
    pub op: BoolOp,
    #[serde(rename = "in")]
    pub inputs: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BooleanCircuit {
    n: usize,
    gates: Vec<BoolGate>,
    output: usize,
}

/// On-disk form: `{"n": 2, "gates": [{"op": "AND", "in": [0, 1]}], "output": 2}`.
#[derive(Serialize, Deserialize)]
pub struct BooleanCircuitFile {
    pub n: usize,
    pub gates: Vec<BoolGate>,
    pub output: usize,
}

impl BooleanCircuit {
    pub fn new(n: usize, gates: Vec<BoolGate>, output: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("boolean circuit", "needs >= 1 input"));
        }
        for (j, g) in gates.iter().enumerate() {
            if g.inputs.len() != g.op.arity() {
                return Err(Error::invalid(
                    "boolean circuit",
                    format!(
                        "gate {j} ({:?}) expects {} inputs, got {}",
                        g.op,
                        g.op.arity(),
                        g.inputs.len()
                    ),
                ));
            }
            for &i in &g.inputs {
                if i >= n + j {
                    return Err(Error::invalid(
                        "boolean circuit",
                        format!("gate {j} references node {i}, which is not earlier in the DAG"),
                    ));
                }
            }
        }
        if output >= n + gates.len() {
            return Err(Error::invalid(
                "boolean circuit",
                format!("output node {output} does not exist"),
            ));
        }
        Ok(BooleanCircuit { n, gates, output })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BooleanCircuitFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("boolean circuit json: {e}")))?;
        Self::new(file.n, file.gates, file.output)
    }

    pub fn to_json(&self) -> String {
        let file = BooleanCircuitFile {
            n: self.n,
            gates: self.gates.clone(),
            output: self.output,
        };
        serde_json::to_string(&file).expect("circuit serialization cannot fail")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn evaluate(&self, x: u64) -> bool {
        let mut values = Vec::with_capacity(self.n + self.gates.len());
        for i in 0..self.n {
            values.push(x >> i & 1 == 1);
        }
        for g in &self.gates {
            let v = match g.op {
                BoolOp::And => values[g.inputs[0]] && values[g.inputs[1]],
                BoolOp::Or => values[g.inputs[0]] || values[g.inputs[1]],
                BoolOp::Xor => values[g.inputs[0]] ^ values[g.inputs[1]],
                BoolOp::Not => !values[g.inputs[0]],
            };
            values.push(v);
        }
        values[self.output]
    }

    pub fn evaluate_bits(&self, x: &crate::BitVector) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.evaluate(x.to_index().expect("inputs fit u64")))
    }

    /// Longest input-to-output path length; inputs have depth 0.
    pub fn depth(&self) -> usize {
        let mut depths = vec![0usize; self.n + self.gates.len()];
        for (j, g) in self.gates.iter().enumerate() {
            depths[self.n + j] = 1 + g.inputs.iter().map(|&i| depths[i]).max().unwrap_or(0);
        }
        depths[self.output]
    }
}

fn check_phase_inputs(f: &Gf2Polynomial, n: usize) -> Result<()> {
    if f.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.n(),
        });
    }
    if f.degree() > 2 {
        return Err(Error::Argument(format!(
            "phase-oracle construction applies only Z and CZ for f; degree {} > 2",
            f.degree()
        )));
    }
    Ok(())
}

/// Exact distribution of the phase-oracle construction:
/// `p_z = gap(g + f_z)^2 / 4^n`, from the sign vector `(-1)^{f(x)+g(x)}`.
///
/// `f` must have degree <= 2.
pub fn boolean_phase_distribution(
    f: &Gf2Polynomial,
    g: &BooleanCircuit,
) -> Result<DistributionTable> {
    check_phase_inputs(f, g.n())?;
    DistributionTable::from_sign_function(g.n(), |x| f.eval_index(x) ^ g.evaluate(x))
}

/// Full statevector simulation of the seven-step oracle construction on
/// `n + 1` qubits:
///
/// 1. start in |0^n>|0>,  2. H on the first n qubits,
/// 3. oracle U: |x>|a> -> e^{i h(x)} |x>|a ^ g(x)>,  4. Z on the last qubit,
/// 5. U†,  6. diagonal gates for `f`,  7. H on the first n qubits, measure.
///
/// `h` is an arbitrary auxiliary phase carried by the oracle; the returned
/// distribution over the first n qubits is independent of it.
pub fn boolean_construction_probabilities<T: Real>(
    f: &Gf2Polynomial,
    g: &BooleanCircuit,
    h: Option<&dyn Fn(u64) -> T>,
) -> Result<Vec<T>> {
    check_phase_inputs(f, g.n())?;
    let n = g.n();
    let anc = 1u64 << n;
    let mut sv = Statevector::<T>::zero_state(n + 1)?;
    sv.apply_h_all(0..n);

    let oracle = |sv: &mut Statevector<T>, conj: bool| {
        // permutation part: swap the ancilla pair wherever g(x) = 1
        let amps = sv.amplitudes().to_vec();
        let mut out = amps.clone();
        for x in 0..anc {
            if g.evaluate(x) {
                out[x as usize] = amps[(x | anc) as usize];
                out[(x | anc) as usize] = amps[x as usize];
            }
        }
        let mut sv2 = Statevector::from_parts(n + 1, out);
        if let Some(h) = h {
            let theta = |b: u64| h(b & (anc - 1));
            if conj {
                sv2.apply_phase_conj(theta);
            } else {
                sv2.apply_phase(theta);
            }
        }
        *sv = sv2;
    };

    oracle(&mut sv, false);
    // Z on the ancilla qubit
    sv.apply_sign(|b| b & anc != 0);
    oracle(&mut sv, true);
    sv.apply_sign(|b| f.eval_index(b & (anc - 1)));
    sv.apply_h_all(0..n);
    Ok(sv.prefix_probabilities(n))
}
