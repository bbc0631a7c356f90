//! Hashing-based approximate counting.
//!
//! `A_k` distinguishes `|S| >= 2^{k+1}` from `|S| <= 2^k` with one oracle
//! query: exactly for `k <= 5`, and through a random Toeplitz hash with
//! `m = k - 5` output bits and count threshold 48 for `k >= 6` (accept rate
//! at least 3/4 in the large case, at most 1/8 in the small one). Majority
//! voting over
//! `R(r) = 8r + 1` rounds pushes both error sides below `e^{-r}`.
//!
//! The estimator binary-searches `eta` with `A_{eta-1}` accepting and
//! `A_eta` rejecting on the alpha-fold product set `S_z^{x alpha}`, giving
//! the sandwich `2^{eta-1} < |S_z|^alpha < 2^{eta+1}` and a multiplicative
//! estimate of `q_z` with precision `xi = (2^{1/alpha} - 2^{-1/alpha}) / 2`.

pub mod algorithm;
pub mod oracle;

use rand::RngCore;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::hashing::sample_hasher;
use crate::seeds;
use crate::{Error, Result};

pub use algorithm::{exact_count, exact_probability, RandomizedAlgorithm};
pub use oracle::{
    CountOracle, EnumerationOracle, MembershipPredicate, ProductPredicate, QueryKind, QueryLog,
    QueryRecord, ThresholdQuery,
};

/// Hashed-count acceptance threshold of `A_k`.
pub const HASH_COUNT_THRESHOLD: u64 = 48;
/// `m = k - HASH_MARGIN_BITS` for the hashed branch.
pub const HASH_MARGIN_BITS: usize = 5;
/// Largest `k` answered exactly without hashing.
pub const EXACT_BRANCH_MAX_K: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Decision {
    Accept,
    Reject,
}

/// Rounds of majority voting for target error `e^{-r}`: by Hoeffding, a
/// (3/4 vs 1/8) gap gives per-side error `exp(-2 R (1/4)^2) = exp(-R/8)`,
/// so `R = 8r` suffices; the next odd integer avoids ties.
pub fn rounds_for(r: u32) -> u32 {
    8 * r + 1
}

/// Estimator precision `xi = (2^{1/alpha} - 2^{-1/alpha}) / 2`.
pub fn xi_for_alpha(alpha: u32) -> f64 {
    let y = (1.0 / alpha as f64).exp2();
    (y - 1.0 / y) / 2.0
}

/// Rescaling that centers the raw estimate inside the sandwich interval
/// under relative error: the harmonic mean of the interval endpoints is
/// `sigma * 2 / (2^{1/alpha} + 2^{-1/alpha})`, and with it the relative error
/// stays within `xi` whenever the sandwich holds.
pub fn mid_scale(alpha: u32) -> f64 {
    let y = (1.0 / alpha as f64).exp2();
    2.0 / (y + 1.0 / y)
}

#[derive(Default, Clone, Copy, Debug)]
struct QueryStats {
    queries: u64,
    hashed: u64,
}

fn single_round(
    pred: &ProductPredicate<'_>,
    k: usize,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
    stats: &mut QueryStats,
) -> Result<Decision> {
    let accept = if k <= EXACT_BRANCH_MAX_K {
        stats.queries += 1;
        oracle.threshold_query(&ThresholdQuery {
            predicate: *pred,
            hasher: None,
            hasher_seed: None,
            threshold: 1u64 << (k + 1),
        })?
    } else {
        let m = k - HASH_MARGIN_BITS;
        let seed = rng.next_u64();
        let hasher = sample_hasher(pred.width(), m, &mut seeds::rng(seed));
        stats.queries += 1;
        stats.hashed += 1;
        oracle.threshold_query(&ThresholdQuery {
            predicate: *pred,
            hasher: Some(&hasher),
            hasher_seed: Some(seed),
            threshold: HASH_COUNT_THRESHOLD,
        })?
    };
    Ok(if accept {
        Decision::Accept
    } else {
        Decision::Reject
    })
}

fn amplified(
    pred: &ProductPredicate<'_>,
    k: usize,
    r: u32,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
    stats: &mut QueryStats,
) -> Result<Decision> {
    if k <= EXACT_BRANCH_MAX_K {
        // exact branch: repetition adds nothing
        return single_round(pred, k, oracle, rng, stats);
    }
    let rounds = rounds_for(r);
    let majority = rounds / 2 + 1;
    let mut accepts = 0u32;
    let mut rejects = 0u32;
    // stop as soon as one side holds a majority; the decision over the full
    // round count is already fixed at that point
    while accepts < majority && rejects < majority {
        match single_round(pred, k, oracle, rng, stats)? {
            Decision::Accept => accepts += 1,
            Decision::Reject => rejects += 1,
        }
    }
    Ok(if accepts >= majority {
        Decision::Accept
    } else {
        Decision::Reject
    })
}

fn check_k_range(pred: &ProductPredicate<'_>, k: usize) -> Result<()> {
    if k < 1 || k > pred.width() {
        return Err(Error::Argument(format!(
            "k must satisfy 1 <= k <= {} (predicate width), got {k}",
            pred.width()
        )));
    }
    Ok(())
}

/// One round of `A_k`.
pub fn a_k_round(
    pred: &ProductPredicate<'_>,
    k: usize,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
) -> Result<Decision> {
    check_k_range(pred, k)?;
    single_round(pred, k, oracle, rng, &mut QueryStats::default())
}

/// Majority-amplified `A_k` with error at most `e^{-r}` on both sides.
pub fn a_k(
    pred: &ProductPredicate<'_>,
    k: usize,
    r: u32,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
) -> Result<Decision> {
    check_k_range(pred, k)?;
    if r < 1 {
        return Err(Error::Argument("repetition parameter r must be >= 1".into()));
    }
    amplified(pred, k, r, oracle, rng, &mut QueryStats::default())
}

/// Result of one estimator run.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateRecord {
    pub z: u64,
    pub alpha: u32,
    pub t_bits: usize,
    pub r: u32,
    /// Boundary index: `A_{eta-1}` accepted, `A_eta` rejected. `None` when
    /// the preimage is empty.
    pub eta: Option<usize>,
    /// `2^{eta/alpha}`.
    pub sigma: Option<f64>,
    /// Raw estimate `sigma / 2^T`.
    pub q_raw: f64,
    /// Rescaled estimate meeting the `xi` bound whenever the sandwich holds.
    pub q_mid: f64,
    pub xi: f64,
    pub mid_scale: f64,
    pub queries: u64,
    pub hashed_queries: u64,
    pub retries: u32,
    pub rounds_per_probe: u32,
    /// Lower bound on the probability that every probed decision respected
    /// its guarantee: `1 - probes_max * e^{-r}`.
    pub success_floor: f64,
}

const MAX_MONOTONE_RETRIES: u32 = 8;

/// Multiplicative estimate of `q_z` for a sampler, using only threshold
/// queries on the alpha-fold product of the preimage predicate.
pub fn stockmeyer_estimate(
    alg: &RandomizedAlgorithm,
    z: u64,
    alpha: u32,
    r: u32,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
) -> Result<EstimateRecord> {
    if z >> alg.n_bits() != 0 {
        return Err(Error::Argument(format!(
            "outcome {z:#x} wider than {} output bits",
            alg.n_bits()
        )));
    }
    let pred = alg.preimage_predicate(z);
    stockmeyer_estimate_for_predicate(&pred, z, alpha, r, oracle, rng)
}

/// Same as [`stockmeyer_estimate`] but over a prebuilt preimage predicate
/// (e.g. one of [`RandomizedAlgorithm::preimage_predicates_all`]).
pub fn stockmeyer_estimate_for_predicate(
    pred: &MembershipPredicate,
    z: u64,
    alpha: u32,
    r: u32,
    oracle: &dyn CountOracle,
    rng: &mut ChaCha12Rng,
) -> Result<EstimateRecord> {
    if alpha < 1 {
        return Err(Error::Argument("alpha must be >= 1".into()));
    }
    if r < 1 {
        return Err(Error::Argument("repetition parameter r must be >= 1".into()));
    }
    let t_bits = pred.width();
    let product = ProductPredicate::new(pred, alpha);
    let width = product.width();
    let mut stats = QueryStats::default();
    let rounds = rounds_for(r);
    let probes_max = ((width + 1) as f64).log2().ceil() + 1.0;
    let success_floor = (1.0 - probes_max * (-(r as f64)).exp()).max(0.0);
    let xi = xi_for_alpha(alpha);
    let scale = mid_scale(alpha);

    // exact emptiness test: |S^alpha| >= 1
    stats.queries += 1;
    let nonempty = oracle.threshold_query(&ThresholdQuery {
        predicate: product,
        hasher: None,
        hasher_seed: None,
        threshold: 1,
    })?;
    if !nonempty {
        return Ok(EstimateRecord {
            z,
            alpha,
            t_bits,
            r,
            eta: None,
            sigma: None,
            q_raw: 0.0,
            q_mid: 0.0,
            xi,
            mid_scale: scale,
            queries: stats.queries,
            hashed_queries: stats.hashed,
            retries: 0,
            rounds_per_probe: rounds,
            success_floor,
        });
    }

    let mut retries = 0u32;
    let eta = loop {
        // memoized probe outcomes for this attempt, by k
        let mut memo: Vec<Option<Decision>> = vec![None; width + 1];
        let mut outcome = |k: usize,
                           stats: &mut QueryStats,
                           rng: &mut ChaCha12Rng|
         -> Result<Decision> {
            if let Some(d) = memo[k] {
                return Ok(d);
            }
            let d = amplified(&product, k, r, oracle, rng, stats)?;
            memo[k] = Some(d);
            Ok(d)
        };

        // invariant: outcome(lo) = Accept (lo = -1 is the emptiness query);
        // hi = width is trusted to reject (the product set never reaches
        // 2^{width+1}) and verified below if the search terminates there
        let mut lo: isize = -1;
        let mut hi: isize = width as isize;
        while hi - lo > 1 {
            let mid = ((lo + hi) / 2) as usize;
            match outcome(mid, &mut stats, rng)? {
                Decision::Accept => lo = mid as isize,
                Decision::Reject => hi = mid as isize,
            }
        }
        let boundary_ok = outcome(hi as usize, &mut stats, rng)? == Decision::Reject;
        // monotone check over everything probed this attempt
        let mut last_reject: Option<usize> = None;
        let mut violated = !boundary_ok;
        for (k, d) in memo.iter().enumerate() {
            match d {
                Some(Decision::Reject) if last_reject.is_none() => last_reject = Some(k),
                Some(Decision::Accept) if last_reject.is_some() => {
                    violated = true;
                    break;
                }
                _ => {}
            }
        }
        if !violated {
            break hi as usize;
        }
        retries += 1;
        if retries > MAX_MONOTONE_RETRIES {
            return Err(Error::Argument(
                "monotone repair exhausted: oracle decisions stayed inconsistent".into(),
            ));
        }
    };

    let sigma = (eta as f64 / alpha as f64).exp2();
    let q_raw = sigma / (t_bits as f64).exp2();
    Ok(EstimateRecord {
        z,
        alpha,
        t_bits,
        r,
        eta: Some(eta),
        sigma: Some(sigma),
        q_raw,
        q_mid: q_raw * scale,
        xi,
        mid_scale: scale,
        queries: stats.queries,
        hashed_queries: stats.hashed,
        retries,
        rounds_per_probe: rounds,
        success_floor,
    })
}
