//! 3-CNF formulas: DIMACS ingestion, reversible Toffoli compilation, T-gate
//! accounting, and the phase-oracle output distribution.
//!
//! A formula with `m` clauses compiles to `2m` OR gates plus an `m - 1` gate
//! AND chain; each gate costs one Toffoli and one fresh ancilla, for
//! `ξ = 3m - 1` ancillas. The Clifford+T cost of running the oracle forward
//! and backward is `t = 14(3m - 1)` T gates at 7 per Toffoli.

use serde::Serialize;

use crate::circuits::boolean::{BoolGate, BoolOp, BooleanCircuit};
use crate::circuits::reversible::{RevGate, ReversibleCircuit};
use crate::circuits::statevector::Statevector;
use crate::circuits::DistributionTable;
use crate::gf2poly::Gf2Polynomial;
use crate::scalar::Real;
use crate::{Error, Result};

/// T gates needed per Toffoli in the standard Clifford+T decomposition.
pub const T_PER_TOFFOLI: u64 = 7;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn value(&self, x: u64) -> bool {
        (x >> self.var & 1 == 1) ^ self.negated
    }
}

/// A 3-CNF over `n` variables. Clauses may repeat variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cnf3 {
    n: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cnf", "variable count must be >= 1"));
        }
        if clauses.is_empty() {
            return Err(Error::invalid("cnf", "clause count must be >= 1"));
        }
        for (j, c) in clauses.iter().enumerate() {
            for l in c {
                if l.var >= n {
                    return Err(Error::invalid(
                        "cnf",
                        format!("clause {j} references variable {} >= n = {n}", l.var),
                    ));
                }
            }
        }
        Ok(Cnf3 { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn evaluate(&self, x: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.value(x)))
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

    /// Strict DIMACS reader; every clause must have exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut literals: Vec<i64> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(Error::Parse("duplicate DIMACS header".into()));
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(Error::Parse(format!(
                        "line {}: header must be 'p cnf <vars> <clauses>'",
                        lineno + 1
                    )));
                }
                let n = fields[2]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad variable count", lineno + 1)))?;
                let m = fields[3]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad clause count", lineno + 1)))?;
                header = Some((n, m));
                continue;
            }
            if header.is_none() {
                return Err(Error::Parse(format!(
                    "line {}: clause data before 'p cnf' header",
                    lineno + 1
                )));
            }
            for tok in line.split_whitespace() {
                let v = tok.parse::<i64>().map_err(|_| {
                    Error::Parse(format!("line {}: bad literal {tok:?}", lineno + 1))
                })?;
                literals.push(v);
            }
        }
        let (n, m) = header.ok_or_else(|| Error::Parse("missing 'p cnf' header".into()))?;
        let mut clauses = Vec::with_capacity(m);
        let mut current: Vec<Literal> = Vec::with_capacity(3);
        for v in literals {
            if v == 0 {
                let c: [Literal; 3] = current.as_slice().try_into().map_err(|_| {
                    Error::Parse(format!(
                        "clause {} has {} literals, exactly 3 required",
                        clauses.len() + 1,
                        current.len()
                    ))
                })?;
                clauses.push(c);
                current.clear();
            } else {
                let var = v.unsigned_abs() as usize - 1;
                if var >= n {
                    return Err(Error::Parse(format!(
                        "literal {v} references variable beyond the declared {n}"
                    )));
                }
                current.push(Literal {
                    var,
                    negated: v < 0,
                });
            }
        }
        if !current.is_empty() {
            return Err(Error::Parse("trailing clause without terminating 0".into()));
        }
        if clauses.len() != m {
            return Err(Error::Parse(format!(
                "header declares {m} clauses, found {}",
                clauses.len()
            )));
        }
        Self::new(n, clauses)
    }

    /// Equivalent fan-in-2 gate DAG: `OR(OR(l1,l2),l3)` per clause, then an
    /// AND chain over clause outputs.
    pub fn to_boolean_circuit(&self) -> BooleanCircuit {
        let n = self.n;
        let mut gates: Vec<BoolGate> = Vec::new();
        let node = |gates: &mut Vec<BoolGate>, op: BoolOp, inputs: Vec<usize>| -> usize {
            gates.push(BoolGate { op, inputs });
            n + gates.len() - 1
        };
        let literal_node = |gates: &mut Vec<BoolGate>, l: &Literal| -> usize {
            if l.negated {
                node(gates, BoolOp::Not, vec![l.var])
            } else {
                l.var
            }
        };
        let mut clause_outputs = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            let l1 = literal_node(&mut gates, &c[0]);
            let l2 = literal_node(&mut gates, &c[1]);
            let l3 = literal_node(&mut gates, &c[2]);
            let or12 = node(&mut gates, BoolOp::Or, vec![l1, l2]);
            let or123 = node(&mut gates, BoolOp::Or, vec![or12, l3]);
            clause_outputs.push(or123);
        }
        let mut acc = clause_outputs[0];
        for &c in &clause_outputs[1..] {
            acc = node(&mut gates, BoolOp::And, vec![acc, c]);
        }
        BooleanCircuit::new(n, gates, acc).expect("construction is well-formed")
    }
}

/// Compiles a 3-CNF to a reversible circuit over {X, CNOT, Toffoli}.
///
/// Always allocates `ξ = 3m - 1` ancillas (two per clause, `m - 1` for the
/// AND chain). Each OR is an X-conjugated Toffoli (De Morgan) and each AND a
/// plain Toffoli, so clauses over three distinct variables cost exactly
/// `3m - 1` Toffolis; a degenerate OR whose operands share a wire degrades to
/// a CNOT or an X on its ancilla, never changing the layout.
pub fn compile_cnf(g: &Cnf3) -> ReversibleCircuit {
    let n = g.n();
    let m = g.m();
    let xi = 3 * m - 1;
    let mut gates: Vec<RevGate> = Vec::new();
    let mut next_ancilla = n;
    let mut alloc = || {
        let w = next_ancilla;
        next_ancilla += 1;
        w
    };

    // t <- a OR b, where each operand is wire `w` negated when `neg`.
    // Implements NOT(AND(NOT a, NOT b)) with the complements brought onto the
    // wires by X conjugation.
    let emit_or =
        |gates: &mut Vec<RevGate>, a: (usize, bool), b: (usize, bool), t: usize| {
            let (wa, na) = a;
            let (wb, nb) = b;
            if wa != wb {
                if !na {
                    gates.push(RevGate::X { target: wa });
                }
                if !nb {
                    gates.push(RevGate::X { target: wb });
                }
                gates.push(RevGate::Toffoli {
                    c1: wa,
                    c2: wb,
                    target: t,
                });
                if !nb {
                    gates.push(RevGate::X { target: wb });
                }
                if !na {
                    gates.push(RevGate::X { target: wa });
                }
                gates.push(RevGate::X { target: t });
            } else if na == nb {
                // OR(l, l) = l
                if !na {
                    gates.push(RevGate::X { target: wa });
                }
                gates.push(RevGate::Cnot {
                    control: wa,
                    target: t,
                });
                if !na {
                    gates.push(RevGate::X { target: wa });
                }
                gates.push(RevGate::X { target: t });
            } else {
                // OR(l, NOT l) = 1
                gates.push(RevGate::X { target: t });
            }
        };

    let mut clause_wires = Vec::with_capacity(m);
    for c in g.clauses() {
        let t1 = alloc();
        let t2 = alloc();
        emit_or(
            &mut gates,
            (c[0].var, c[0].negated),
            (c[1].var, c[1].negated),
            t1,
        );
        emit_or(&mut gates, (t1, false), (c[2].var, c[2].negated), t2);
        clause_wires.push(t2);
    }
    let mut acc = clause_wires[0];
    for &c in &clause_wires[1..] {
        let t = alloc();
        gates.push(RevGate::Toffoli {
            c1: acc,
            c2: c,
            target: t,
        });
        acc = t;
    }
    debug_assert_eq!(next_ancilla, n + xi);
    ReversibleCircuit::new(n, xi, gates, acc).expect("compiled circuit is well-formed")
}

/// T-gate count of the full construction (oracle plus uncomputation):
/// `t = 14(3m - 1)`.
pub fn t_count(g: &Cnf3) -> u64 {
    2 * T_PER_TOFFOLI * (3 * g.m() as u64 - 1)
}

/// Exact output distribution of the CNF phase construction:
/// `p_z = gap(g + f_z)^2 / 4^n` with `g` evaluated clause by clause.
///
/// `f` must have degree <= 2.
pub fn cnf_phase_distribution(f: &Gf2Polynomial, g: &Cnf3) -> Result<DistributionTable> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: f.n(),
        });
    }
    if f.degree() > 2 {
        return Err(Error::Argument(format!(
            "phase-oracle construction applies only Z and CZ for f; degree {} > 2",
            f.degree()
        )));
    }
    DistributionTable::from_sign_function(g.n(), |x| f.eval_index(x) ^ g.evaluate(x))
}

/// Full statevector simulation of the seven-step CNF construction on
/// `n + ξ` qubits: Hadamards on the inputs, the compiled oracle gate by gate,
/// Z on the output wire, uncomputation, the diagonal gates of `f`, Hadamards,
/// and measurement of the input register.
///
/// `injected_phase`, when given, multiplies the oracle by a diagonal phase
/// (and the uncomputation by its conjugate); the outcome distribution is
/// invariant under any such choice.
pub fn cnf_construction_probabilities<T: Real>(
    f: &Gf2Polynomial,
    g: &Cnf3,
    injected_phase: Option<&dyn Fn(u64) -> T>,
) -> Result<Vec<T>> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: f.n(),
        });
    }
    if f.degree() > 2 {
        return Err(Error::Argument(format!(
            "phase-oracle construction applies only Z and CZ for f; degree {} > 2",
            f.degree()
        )));
    }
    let compiled = compile_cnf(g);
    let n = g.n();
    let width = compiled.width();
    let mut sv = Statevector::<T>::zero_state(width)?;
    sv.apply_h_all(0..n);
    for gate in compiled.gates() {
        sv.apply_rev_gate(gate);
    }
    if let Some(p) = injected_phase {
        sv.apply_phase(p);
    }
    let out_bit = 1u64 << compiled.output_wire();
    sv.apply_sign(|b| b & out_bit != 0);
    if let Some(p) = injected_phase {
        sv.apply_phase_conj(p);
    }
    for gate in compiled.gates().iter().rev() {
        sv.apply_rev_gate(gate);
    }
    let input_mask = (1u64 << n) - 1;
    sv.apply_sign(|b| f.eval_index(b & input_mask));
    sv.apply_h_all(0..n);
    Ok(sv.prefix_probabilities(n))
}
