//! Exact output distributions over n-bit outcomes.

use num_rational::Ratio;
use serde::Serialize;

use crate::limits;
use crate::scalar::Real;
use crate::{Error, Result};

/// Exact distribution of an n-bit measurement: integer gap values per outcome
/// `z`, with probabilities `p_z = gap[z]^2 / 4^n` derived on demand.
///
/// Construction enforces the two integer identities that make the table a
/// distribution: every gap is even (n >= 1) and `Σ_z gap[z]^2 = 4^n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DistributionTable {
    n: usize,
    gaps: Vec<i64>,
}

impl DistributionTable {
    pub fn new(n: usize, gaps: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("distribution", "outcome width must be >= 1"));
        }
        if gaps.len() != 1usize << n {
            return Err(Error::invalid(
                "distribution",
                format!("expected 2^{n} gap entries, got {}", gaps.len()),
            ));
        }
        let mut sum: i128 = 0;
        for &g in &gaps {
            if g.rem_euclid(2) != 0 {
                return Err(Error::invalid(
                    "distribution",
                    format!("gap value {g} is odd"),
                ));
            }
            sum += (g as i128) * (g as i128);
        }
        if sum != 1i128 << (2 * n) {
            return Err(Error::invalid(
                "distribution",
                format!("gap squares sum to {sum}, expected 4^{n}"),
            ));
        }
        Ok(DistributionTable { n, gaps })
    }

    /// Builds the table from a ±1 sign function via the Walsh–Hadamard
    /// transform: `gaps[z] = Σ_x (-1)^{f(x) + x·z}`.
    pub fn from_sign_function(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("distribution", "outcome width must be >= 1"));
        }
        limits::check_enum_bits("distribution sign vector", n)?;
        let mut signs: Vec<i64> = (0..1u64 << n).map(|x| if f(x) { -1 } else { 1 }).collect();
        crate::gf2poly::walsh_hadamard(&mut signs);
        Self::new(n, signs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn gap(&self, z: usize) -> i64 {
        self.gaps[z]
    }

    /// `p_z` as a float: computed as `(gap / 2^n)^2` so the intermediate stays
    /// exactly representable for every admissible n.
    pub fn prob<T: Real>(&self, z: usize) -> T {
        let scale = T::from_f64((self.n as f64).exp2()).unwrap();
        let ratio = T::from_i64(self.gaps[z]).unwrap() / scale;
        ratio * ratio
    }

    pub fn probs<T: Real>(&self) -> Vec<T> {
        (0..self.gaps.len()).map(|z| self.prob(z)).collect()
    }

    /// `p_z` as an exact rational `gap^2 / 4^n`.
    pub fn prob_ratio(&self, z: usize) -> Ratio<i64> {
        let g = self.gaps[z];
        Ratio::new(g * g, 1i64 << (2 * self.n))
    }

    /// Exact sum of all probabilities; equals one by construction.
    pub fn total_ratio(&self) -> Ratio<i128> {
        let mut acc = Ratio::new(0i128, 1);
        for &g in &self.gaps {
            acc += Ratio::new((g as i128) * (g as i128), 1i128 << (2 * self.n));
        }
        acc
    }

    /// `Σ_z |p_z - q_z|` against a float distribution.
    pub fn l1_distance(&self, q: &[f64]) -> Result<f64> {
        if q.len() != self.gaps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.gaps.len(),
                got: q.len(),
            });
        }
        Ok((0..q.len())
            .map(|z| (self.prob::<f64>(z) - q[z]).abs())
            .sum())
    }
}
