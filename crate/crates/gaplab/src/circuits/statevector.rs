//! Dense statevector simulation.
//!
//! This is the second, independent route to every output distribution in the
//! crate: the closed-form gap expressions are always cross-checked against a
//! literal simulation of the corresponding circuit. Basis state `x` lives at
//! amplitude index `x`, with qubit `i` on bit `i`.

use num_complex::Complex;

use crate::circuits::iqp::{DiagonalGate, IqpCircuit};
use crate::circuits::reversible::RevGate;
use crate::limits::MAX_STATEVECTOR_QUBITS;
use crate::scalar::Real;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Statevector<T: Real> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> Statevector<T> {
    /// |0^n> on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("statevector", "qubit count must be >= 1"));
        }
        if n > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Resource {
                what: "statevector qubits",
                required: n as u64,
                limit: MAX_STATEVECTOR_QUBITS as u64,
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1usize << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Statevector { n, amps })
    }

    pub(crate) fn from_parts(n: usize, amps: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n);
        Statevector { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn apply_h(&mut self, q: usize) {
        debug_assert!(q < self.n);
        let inv_sqrt2 = T::from_f64(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let bit = 1usize << q;
        for base in 0..self.amps.len() {
            if base & bit == 0 {
                let a = self.amps[base];
                let b = self.amps[base | bit];
                self.amps[base] = (a + b).scale(inv_sqrt2);
                self.amps[base | bit] = (a - b).scale(inv_sqrt2);
            }
        }
    }

    pub fn apply_h_all(&mut self, qubits: impl IntoIterator<Item = usize>) {
        for q in qubits {
            self.apply_h(q);
        }
    }

    pub fn apply_diagonal(&mut self, gate: &DiagonalGate) {
        for (x, amp) in self.amps.iter_mut().enumerate() {
            if gate.flips_sign(x as u64) {
                *amp = -*amp;
            }
        }
    }

    /// Multiplies each basis amplitude by `(-1)^{f(x)}`.
    pub fn apply_sign(&mut self, f: impl Fn(u64) -> bool) {
        for (x, amp) in self.amps.iter_mut().enumerate() {
            if f(x as u64) {
                *amp = -*amp;
            }
        }
    }

    /// Multiplies each basis amplitude by `exp(i * theta(x))`.
    pub fn apply_phase(&mut self, theta: impl Fn(u64) -> T) {
        for (x, amp) in self.amps.iter_mut().enumerate() {
            *amp = *amp * Complex::from_polar(T::one(), theta(x as u64));
        }
    }

    /// Conjugate phase, `exp(-i * theta(x))`.
    pub fn apply_phase_conj(&mut self, theta: impl Fn(u64) -> T) {
        for (x, amp) in self.amps.iter_mut().enumerate() {
            *amp = *amp * Complex::from_polar(T::one(), -theta(x as u64));
        }
    }

    pub fn apply_rev_gate(&mut self, gate: &RevGate) {
        match *gate {
            RevGate::X { target } => {
                let bit = 1usize << target;
                for base in 0..self.amps.len() {
                    if base & bit == 0 {
                        self.amps.swap(base, base | bit);
                    }
                }
            }
            RevGate::Cnot { control, target } => {
                let c = 1usize << control;
                let t = 1usize << target;
                for base in 0..self.amps.len() {
                    if base & c != 0 && base & t == 0 {
                        self.amps.swap(base, base | t);
                    }
                }
            }
            RevGate::Toffoli { c1, c2, target } => {
                let c1 = 1usize << c1;
                let c2 = 1usize << c2;
                let t = 1usize << target;
                for base in 0..self.amps.len() {
                    if base & c1 != 0 && base & c2 != 0 && base & t == 0 {
                        self.amps.swap(base, base | t);
                    }
                }
            }
        }
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal over the first `k` qubits (the low `k` index bits).
    pub fn prefix_probabilities(&self, k: usize) -> Vec<T> {
        debug_assert!(k <= self.n);
        let mut out = vec![T::zero(); 1usize << k];
        let mask = (1usize << k) - 1;
        for (x, amp) in self.amps.iter().enumerate() {
            out[x & mask] = out[x & mask] + amp.norm_sqr();
        }
        out
    }
}

/// Amplitudes of `H^n · D · H^n |0^n>` where `D` is the diagonal layer of an
/// IQP circuit. For this gate set all amplitudes are real.
pub fn simulate_statevector<T: Real>(circuit: &IqpCircuit) -> Result<Vec<Complex<T>>> {
    let n = circuit.n();
    let mut sv = Statevector::<T>::zero_state(n)?;
    sv.apply_h_all(0..n);
    for g in circuit.gates() {
        sv.apply_diagonal(g);
    }
    sv.apply_h_all(0..n);
    Ok(sv.into_amplitudes())
}
