//! Finite-randomness samplers: deterministic maps `C : {0,1}^T -> {0,1}^N`.
//!
//! The output distribution is `q_z = |{r : C(r) = z}| / 2^T`, which the
//! estimator approximates through oracle queries and `exact_probability`
//! computes outright as the reference.

use std::sync::Arc;

use num_rational::Ratio;

use crate::counting::oracle::MembershipPredicate;
use crate::limits::MAX_PREDICATE_WIDTH;
use crate::{Error, Result};

#[derive(Clone)]
pub struct RandomizedAlgorithm {
    t_bits: usize,
    n_bits: usize,
    map: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl std::fmt::Debug for RandomizedAlgorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RandomizedAlgorithm")
            .field("t_bits", &self.t_bits)
            .field("n_bits", &self.n_bits)
            .finish()
    }
}

impl RandomizedAlgorithm {
    pub fn from_fn(
        t_bits: usize,
        n_bits: usize,
        map: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if t_bits == 0 || t_bits > 63 || n_bits == 0 || n_bits > 63 {
            return Err(Error::Argument(
                "randomness and output widths must be in 1..=63".into(),
            ));
        }
        Ok(RandomizedAlgorithm {
            t_bits,
            n_bits,
            map: Arc::new(map),
        })
    }

    /// `C(r) = value` for every r.
    pub fn constant(t_bits: usize, n_bits: usize, value: u64) -> Result<Self> {
        Self::from_fn(t_bits, n_bits, move |_| value)
    }

    /// `C(r) = r` on T bits.
    pub fn identity(t_bits: usize) -> Result<Self> {
        Self::from_fn(t_bits, t_bits, |r| r)
    }

    /// Realizes integer outcome counts (summing to `2^T`) as consecutive
    /// intervals of the randomness space.
    pub fn from_counts(t_bits: usize, counts: &[u64]) -> Result<Self> {
        if !counts.len().is_power_of_two() {
            return Err(Error::Argument(
                "counts length must be a power of two".into(),
            ));
        }
        let n_bits = counts.len().trailing_zeros() as usize;
        let total: u128 = counts.iter().map(|&c| c as u128).sum();
        if t_bits > 63 || total != 1u128 << t_bits {
            return Err(Error::Argument(format!(
                "counts sum to {total}, expected 2^{t_bits}"
            )));
        }
        let mut cumulative = Vec::with_capacity(counts.len() + 1);
        cumulative.push(0u64);
        for &c in counts {
            cumulative.push(cumulative.last().unwrap() + c);
        }
        let cumulative = Arc::new(cumulative);
        Self::from_fn(t_bits, n_bits.max(1), move |r| {
            (cumulative.partition_point(|&c| c <= r) - 1) as u64
        })
    }

    /// Dyadic realization of a probability vector: counts are
    /// `round(q_z 2^T)` fixed up by largest remainder so they sum to `2^T`.
    /// Returns the realized sampler and the L1 rounding error.
    pub fn dyadic_from_probs(t_bits: usize, probs: &[f64]) -> Result<(Self, f64)> {
        if t_bits == 0 || t_bits > 63 {
            return Err(Error::Argument("t_bits must be in 1..=63".into()));
        }
        let scale = (t_bits as f64).exp2();
        let mut counts: Vec<u64> = probs.iter().map(|&p| (p * scale).floor() as u64).collect();
        let assigned: u128 = counts.iter().map(|&c| c as u128).sum();
        let total = 1u128 << t_bits;
        if assigned > total {
            return Err(Error::Argument("probabilities exceed one".into()));
        }
        let mut deficit = (total - assigned) as u64;
        // largest fractional remainder first; ties broken by index
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = probs[a] * scale - (probs[a] * scale).floor();
            let rb = probs[b] * scale - (probs[b] * scale).floor();
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        let mut i = 0;
        while deficit > 0 {
            counts[order[i % order.len()]] += 1;
            deficit -= 1;
            i += 1;
        }
        let err: f64 = probs
            .iter()
            .zip(&counts)
            .map(|(&p, &c)| (p - c as f64 / scale).abs())
            .sum();
        Ok((Self::from_counts(t_bits, &counts)?, err))
    }

    pub fn t_bits(&self) -> usize {
        self.t_bits
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn run(&self, r: u64) -> u64 {
        debug_assert!(r >> self.t_bits == 0);
        (self.map)(r) & ((1u64 << self.n_bits) - 1)
    }

    /// Membership predicate of `S_z = {r : C(r) = z}`.
    pub fn preimage_predicate(&self, z: u64) -> MembershipPredicate {
        let map = Arc::clone(&self.map);
        let mask = (1u64 << self.n_bits) - 1;
        MembershipPredicate::new(self.t_bits, move |r| map(r) & mask == z)
    }

    /// Preimage predicates for every outcome at once, sharing a single
    /// enumeration pass; supports are attached explicitly.
    pub fn preimage_predicates_all(&self) -> Result<Vec<MembershipPredicate>> {
        self.check_enumeration_budget()?;
        let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); 1usize << self.n_bits];
        for r in 0..1u64 << self.t_bits {
            buckets[self.run(r) as usize].push(r);
        }
        Ok(buckets
            .into_iter()
            .map(|b| MembershipPredicate::from_support(self.t_bits, Arc::new(b)))
            .collect())
    }

    fn check_enumeration_budget(&self) -> Result<()> {
        if self.t_bits > MAX_PREDICATE_WIDTH {
            return Err(Error::Resource {
                what: "randomness enumeration width",
                required: self.t_bits as u64,
                limit: MAX_PREDICATE_WIDTH as u64,
            });
        }
        Ok(())
    }
}

/// Exact count of `{r : C(r) = z}` by full enumeration.
pub fn exact_count(alg: &RandomizedAlgorithm, z: u64) -> Result<u64> {
    alg.check_enumeration_budget()?;
    Ok((0..1u64 << alg.t_bits()).filter(|&r| alg.run(r) == z).count() as u64)
}

/// Exact output probability `q_z` as a reduced rational.
pub fn exact_probability(alg: &RandomizedAlgorithm, z: u64) -> Result<Ratio<i64>> {
    let count = exact_count(alg, z)?;
    Ok(Ratio::new(count as i64, 1i64 << alg.t_bits()))
}
