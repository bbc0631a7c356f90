//! IQP circuits: a diagonal layer of Z, CZ, CCZ gates between two Hadamard
//! walls, measured in the computational basis.

use serde::Serialize;

use crate::circuits::DistributionTable;
use crate::gf2poly::Gf2Polynomial;
use crate::{Error, Result};

/// One diagonal gate; all qubit indices must be distinct.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DiagonalGate {
    Z(usize),
    Cz(usize, usize),
    Ccz(usize, usize, usize),
}

impl DiagonalGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            DiagonalGate::Z(a) => vec![a],
            DiagonalGate::Cz(a, b) => vec![a, b],
            DiagonalGate::Ccz(a, b, c) => vec![a, b, c],
        }
    }

    /// Whether the gate flips the sign of basis state `x`.
    pub fn flips_sign(&self, x: u64) -> bool {
        match *self {
            DiagonalGate::Z(a) => x >> a & 1 == 1,
            DiagonalGate::Cz(a, b) => x >> a & 1 == 1 && x >> b & 1 == 1,
            DiagonalGate::Ccz(a, b, c) => x >> a & 1 == 1 && x >> b & 1 == 1 && x >> c & 1 == 1,
        }
    }
}

/// An n-qubit IQP circuit. The Hadamard walls before and after the diagonal
/// layer are implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IqpCircuit {
    n: usize,
    gates: Vec<DiagonalGate>,
}

impl IqpCircuit {
    pub fn new(n: usize, gates: Vec<DiagonalGate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("iqp circuit", "qubit count must be >= 1"));
        }
        for g in &gates {
            let qs = g.qubits();
            for &q in &qs {
                if q >= n {
                    return Err(Error::invalid(
                        "iqp circuit",
                        format!("gate {g:?} addresses qubit {q} >= n = {n}"),
                    ));
                }
            }
            let mut sorted = qs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != qs.len() {
                return Err(Error::invalid(
                    "iqp circuit",
                    format!("gate {g:?} repeats a qubit"),
                ));
            }
        }
        Ok(IqpCircuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[DiagonalGate] {
        &self.gates
    }

    /// Parity of the diagonal phase on basis state `x`: the circuit applies
    /// `(-1)^{phase_parity(x)}`.
    pub fn phase_parity(&self, x: u64) -> bool {
        self.gates.iter().fold(false, |acc, g| acc ^ g.flips_sign(x))
    }
}

/// One gate per monomial: Z for linear, CZ for quadratic, CCZ for cubic.
pub fn build_iqp(f: &Gf2Polynomial) -> Result<IqpCircuit> {
    if f.degree() > 3 {
        return Err(Error::UnsupportedDegree {
            degree: f.degree(),
            max: 3,
            context: "IQP diagonal layer",
        });
    }
    let gates = f
        .monomials()
        .map(|m| {
            let ix = m.indices();
            match ix.len() {
                1 => DiagonalGate::Z(ix[0] as usize),
                2 => DiagonalGate::Cz(ix[0] as usize, ix[1] as usize),
                3 => DiagonalGate::Ccz(ix[0] as usize, ix[1] as usize, ix[2] as usize),
                _ => unreachable!("degree checked above"),
            }
        })
        .collect();
    IqpCircuit::new(f.n(), gates)
}

/// Exact output distribution of the IQP circuit for `f`:
/// `p_z = gap(f_z)^2 / 4^n`, computed from the full gap spectrum.
pub fn iqp_distribution(f: &Gf2Polynomial) -> Result<DistributionTable> {
    DistributionTable::new(f.n(), f.gap_spectrum()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2poly::Monomial;

    fn poly(n: usize, monos: &[&[u32]]) -> Gf2Polynomial {
        Gf2Polynomial::new(n, monos.iter().map(|m| Monomial::new(m.to_vec()).unwrap())).unwrap()
    }

    #[test]
    fn build_examples() {
        let empty = build_iqp(&Gf2Polynomial::zero(3).unwrap()).unwrap();
        assert!(empty.gates().is_empty());

        let c = build_iqp(&poly(3, &[&[0], &[1, 2]])).unwrap();
        assert_eq!(c.gates(), &[DiagonalGate::Z(0), DiagonalGate::Cz(1, 2)]);

        let c = build_iqp(&poly(3, &[&[0, 1, 2]])).unwrap();
        assert_eq!(c.gates(), &[DiagonalGate::Ccz(0, 1, 2)]);
        assert_eq!(c.gates().len(), 1);
    }

    #[test]
    fn distribution_examples() {
        // f = 0: all mass on z = 0
        let t = iqp_distribution(&Gf2Polynomial::zero(3).unwrap()).unwrap();
        assert_eq!(t.prob::<f64>(0), 1.0);
        assert!(t.gaps()[1..].iter().all(|&g| g == 0));

        // f = x0*x1: flat distribution
        let t = iqp_distribution(&poly(2, &[&[0, 1]])).unwrap();
        assert_eq!(t.probs::<f64>(), vec![0.25; 4]);
    }

    #[test]
    fn phase_parity_matches_polynomial() {
        let f = poly(3, &[&[0], &[1, 2], &[0, 1, 2]]);
        let c = build_iqp(&f).unwrap();
        for x in 0..8u64 {
            assert_eq!(c.phase_parity(x), f.eval_index(x));
        }
    }
}
