//! Seeded Monte-Carlo experiments: anti-concentration of random-polynomial
//! output probabilities, the Markov tail step, and the end-to-end chain
//! inequality against mock adversarial samplers.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::circuits::{iqp_distribution, DistributionTable};
use crate::counting::{
    stockmeyer_estimate_for_predicate, xi_for_alpha, CountOracle, RandomizedAlgorithm,
};
use crate::gf2poly::{candidate_monomials, random_polynomial, Gf2Polynomial};
use crate::report::{CheckResult, ExperimentReport};
use crate::seeds;
use crate::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The constants of the chain inequality and their derived values.
///
/// `tau = eps / (sigma delta)` is the anti-concentration cutoff,
/// `xi` the estimator precision, `u = sigma + (1 + sigma) xi` the final
/// multiplicative error, and `v = (1 - tau)^2 / 3 - delta` the guaranteed
/// fraction of `(z, f)` pairs. Constructed only when `0 < tau < 1` and
/// `v > 0`; anything else is a configuration error.
#[derive(Clone, Debug, Serialize)]
pub struct ChainParams {
    eps: f64,
    delta: f64,
    sigma: f64,
    alpha: u32,
    r: u32,
    tau: f64,
    xi: f64,
    u: f64,
    v: f64,
}

impl ChainParams {
    pub fn new(eps: f64, delta: f64, sigma: f64, alpha: u32, r: u32) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::Argument("eps must be a finite nonnegative real".into()));
        }
        if delta <= 0.0 || sigma <= 0.0 {
            return Err(Error::Argument("delta and sigma must be positive".into()));
        }
        if alpha < 1 || r < 1 {
            return Err(Error::Argument("alpha and r must be >= 1".into()));
        }
        let tau = eps / (sigma * delta);
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Config(format!(
                "tau = eps/(sigma*delta) = {tau} must lie strictly inside (0, 1)"
            )));
        }
        let xi = xi_for_alpha(alpha);
        let u = sigma + (1.0 + sigma) * xi;
        let v = (1.0 - tau).powi(2) / 3.0 - delta;
        if v <= 0.0 {
            return Err(Error::Config(format!(
                "v = (1 - tau)^2 / 3 - delta = {v} must be positive for a meaningful experiment"
            )));
        }
        Ok(ChainParams {
            eps,
            delta,
            sigma,
            alpha,
            r,
            tau,
            xi,
            u,
            v,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Floor on `u` for a given additive budget: `u >= eps / (1 + sqrt 3)`.
    pub fn u_lower_bound(&self) -> f64 {
        self.eps / (1.0 + SQRT3)
    }

    /// Ceiling on `v`: `v <= 1 - eps / (u (1 + sqrt 3))`.
    pub fn v_upper_bound(&self) -> f64 {
        1.0 - self.eps / (self.u * (1.0 + SQRT3))
    }

    /// Target success probability `w` of one estimator run over `alpha * t`
    /// randomness bits: every probed decision respects its guarantee with
    /// probability at least `1 - probes_max * e^{-r}`.
    pub fn success_floor(&self, t_bits: usize) -> f64 {
        let width = self.alpha as usize * t_bits;
        let probes_max = ((width + 1) as f64).log2().ceil() + 1.0;
        (1.0 - probes_max * (-(self.r as f64)).exp()).max(0.0)
    }
}

/// Kinds of mock adversarial samplers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    Exact,
    AdditiveNoise,
    Uniform,
    Sparsified,
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(AdversaryKind::Exact),
            "noise" | "additive-noise" => Ok(AdversaryKind::AdditiveNoise),
            "uniform" => Ok(AdversaryKind::Uniform),
            "sparsify" | "sparsified" => Ok(AdversaryKind::Sparsified),
            other => Err(Error::Argument(format!("unknown adversary kind {other:?}"))),
        }
    }
}

/// A sampler emitting distribution `q` with a declared L1 budget against the
/// reference distribution; construction verifies the budget.
#[derive(Clone, Debug)]
pub struct MockSampler {
    kind: AdversaryKind,
    q: Vec<f64>,
    declared_eps: f64,
    actual_l1: f64,
}

impl MockSampler {
    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn declared_eps(&self) -> f64 {
        self.declared_eps
    }

    pub fn actual_l1(&self) -> f64 {
        self.actual_l1
    }
}

/// Builds an adversarial distribution with `Σ_z |p_z - q_z| <= eps`.
///
/// - `Exact`: `q = p`.
/// - `Uniform`: `q = 2^{-n}` everywhere (rejected if its distance exceeds
///   the declared budget).
/// - `AdditiveNoise`: moves a total of `eps/2` of mass from a random donor
///   set onto the complement, so the L1 distance is exactly `eps`.
/// - `Sparsified`: zeroes the smallest entries (the boundary one partially)
///   until `eps/2` is removed, then redistributes it proportionally over the
///   untouched entries.
pub fn build_adversary(
    kind: AdversaryKind,
    base: &DistributionTable,
    eps: f64,
    rng: &mut ChaCha12Rng,
) -> Result<MockSampler> {
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::Argument(format!(
            "additive budget eps = {eps} must lie in [0, 2]"
        )));
    }
    let p: Vec<f64> = base.probs();
    let len = p.len();
    let q = match kind {
        AdversaryKind::Exact => p.clone(),
        AdversaryKind::Uniform => vec![1.0 / len as f64; len],
        AdversaryKind::AdditiveNoise => {
            let mut order: Vec<usize> = (0..len).collect();
            for i in (1..len).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let half = eps / 2.0;
            let mut q = p.clone();
            let mut donors = vec![false; len];
            // donors and recipients must stay disjoint for the L1 distance
            // to come out exactly; with a full-support base, protect the
            // smallest entry so a recipient always remains
            let protected = if p.iter().all(|&x| x > 0.0) {
                (0..len).min_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap().then(a.cmp(&b)))
            } else {
                None
            };
            let mut remaining = half;
            for &i in &order {
                if remaining <= 0.0 {
                    break;
                }
                if q[i] <= 0.0 || Some(i) == protected {
                    continue;
                }
                let take = q[i].min(remaining);
                q[i] -= take;
                remaining -= take;
                donors[i] = true;
            }
            if remaining > 1e-12 {
                return Err(Error::Argument(
                    "eps exceeds the mass available to perturb".into(),
                ));
            }
            let recipients: Vec<usize> = (0..len).filter(|&i| !donors[i]).collect();
            if recipients.is_empty() {
                return Err(Error::Argument(
                    "perturbation consumed every outcome; lower eps".into(),
                ));
            }
            let add = half / recipients.len() as f64;
            for &i in &recipients {
                q[i] += add;
            }
            q
        }
        AdversaryKind::Sparsified => {
            let mut order: Vec<usize> = (0..len).collect();
            order.sort_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap().then(a.cmp(&b)));
            let half = eps / 2.0;
            let mut q = p.clone();
            let mut touched = vec![false; len];
            let mut remaining = half;
            for &i in &order {
                if remaining <= 0.0 {
                    break;
                }
                if p[i] <= 0.0 {
                    continue;
                }
                let take = p[i].min(remaining);
                q[i] -= take;
                remaining -= take;
                touched[i] = true;
            }
            if remaining > 1e-12 {
                return Err(Error::Argument(
                    "eps exceeds the mass available to sparsify".into(),
                ));
            }
            let recipients: Vec<usize> = (0..len)
                .filter(|&i| !touched[i] && p[i] > 0.0)
                .collect();
            let recv_mass: f64 = recipients.iter().map(|&i| p[i]).sum();
            if recipients.is_empty() || recv_mass <= 0.0 {
                return Err(Error::Argument(
                    "sparsification left no entries to absorb the mass; lower eps".into(),
                ));
            }
            for &i in &recipients {
                q[i] += half * p[i] / recv_mass;
            }
            q
        }
    };
    let actual = base.l1_distance(&q)?;
    if actual > eps + 1e-9 {
        return Err(Error::Argument(format!(
            "constructed distance {actual} exceeds the declared budget {eps}"
        )));
    }
    Ok(MockSampler {
        kind,
        q,
        declared_eps: eps,
        actual_l1: actual,
    })
}

/// One τ entry of an anti-concentration run.
#[derive(Clone, Debug, Serialize)]
pub struct TauRow {
    pub tau: f64,
    pub empirical: f64,
    pub bound: f64,
    pub std_err: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
struct AnticoncentrationData {
    mode: &'static str,
    n: usize,
    degree: usize,
    samples: u64,
    rows: Vec<TauRow>,
}

/// CSV form of the per-τ curve (`tau,empirical,bound,std_err,passed`).
pub fn anticoncentration_csv(report: &ExperimentReport) -> Result<String> {
    let rows = report
        .data
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or_else(|| Error::Argument("report carries no anti-concentration rows".into()))?;
    let mut out = String::from("tau,empirical,bound,std_err,passed\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row["tau"], row["empirical"], row["bound"], row["std_err"], row["passed"]
        ));
    }
    Ok(out)
}

fn validate_taus(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::Argument("tau list must be nonempty".into()));
    }
    for &t in taus {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Argument(format!("tau = {t} must lie in (0, 1)")));
        }
    }
    Ok(())
}

fn validate_degree(degree: usize) -> Result<()> {
    if !(2..=3).contains(&degree) {
        return Err(Error::Argument(format!(
            "anti-concentration degree must be 2 or 3, got {degree}"
        )));
    }
    Ok(())
}

/// Exact check of `Pr_{z,f}[p_z(f) >= tau / 2^n] >= (1 - tau)^2 / 3` by
/// enumerating every polynomial and every outcome.
pub fn anticoncentration_exact(n: usize, degree: usize, taus: &[f64]) -> Result<ExperimentReport> {
    validate_taus(taus)?;
    validate_degree(degree)?;
    let candidates = candidate_monomials(n, degree);
    if candidates.len() > 22 {
        return Err(Error::Resource {
            what: "exhaustive polynomial slots",
            required: candidates.len() as u64,
            limit: 22,
        });
    }
    let f_count = 1u64 << candidates.len();
    let z_count = 1u64 << n;
    let mut hits = vec![0u64; taus.len()];
    for mask in 0..f_count {
        let monos = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m.clone());
        let f = Gf2Polynomial::new(n, monos)?;
        for &gap in &f.gap_spectrum()? {
            let stat = (gap as f64) * (gap as f64); // gap^2 vs tau * 2^n
            for (ti, &tau) in taus.iter().enumerate() {
                if stat >= tau * (n as f64).exp2() {
                    hits[ti] += 1;
                }
            }
        }
    }
    let total = (f_count * z_count) as f64;
    let rows: Vec<TauRow> = taus
        .iter()
        .enumerate()
        .map(|(ti, &tau)| {
            let empirical = hits[ti] as f64 / total;
            let bound = (1.0 - tau).powi(2) / 3.0;
            TauRow {
                tau,
                empirical,
                bound,
                std_err: 0.0,
                passed: empirical >= bound,
            }
        })
        .collect();
    let checks = rows
        .iter()
        .map(|r| {
            CheckResult::new(format!("anticoncentration tau={}", r.tau), r.passed)
                .with_values(r.empirical, r.bound)
        })
        .collect();
    ExperimentReport::new(
        "anticoncentration",
        0,
        serde_json::json!({"mode": "exhaustive", "n": n, "degree": degree, "taus": taus}),
        AnticoncentrationData {
            mode: "exhaustive",
            n,
            degree,
            samples: f_count * z_count,
            rows,
        },
        checks,
    )
}

/// Monte-Carlo estimate of the same probabilities over uniform `(f, z)`
/// pairs; a τ fails when `empirical + 3 std_err < (1 - tau)^2 / 3`.
pub fn anticoncentration_sweep(
    n: usize,
    degree: usize,
    taus: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    validate_taus(taus)?;
    validate_degree(degree)?;
    if trials == 0 {
        return Err(Error::Argument("trials must be >= 1".into()));
    }
    let mut rng = seeds::rng(seeds::derive(seed, "anticoncentration", 0));
    let mut hits = vec![0u64; taus.len()];
    for _ in 0..trials {
        let f = random_polynomial(n, degree, &mut rng)?;
        let z = rng.gen_range(0..1u64 << n);
        let zv = crate::BitVector::from_index(n, z);
        let gap = f.shift_by_z(&zv)?.gap()?;
        let stat = (gap as f64) * (gap as f64);
        for (ti, &tau) in taus.iter().enumerate() {
            if stat >= tau * (n as f64).exp2() {
                hits[ti] += 1;
            }
        }
    }
    let rows: Vec<TauRow> = taus
        .iter()
        .enumerate()
        .map(|(ti, &tau)| {
            let empirical = hits[ti] as f64 / trials as f64;
            let bound = (1.0 - tau).powi(2) / 3.0;
            let std_err = (empirical * (1.0 - empirical) / trials as f64).sqrt();
            TauRow {
                tau,
                empirical,
                bound,
                std_err,
                passed: empirical + 3.0 * std_err >= bound,
            }
        })
        .collect();
    let checks = rows
        .iter()
        .map(|r| {
            CheckResult::new(format!("anticoncentration tau={}", r.tau), r.passed)
                .with_values(r.empirical, r.bound)
                .with_details(format!("3 sigma slack = {}", 3.0 * r.std_err))
        })
        .collect();
    ExperimentReport::new(
        "anticoncentration",
        seed,
        serde_json::json!({
            "mode": "monte-carlo", "n": n, "degree": degree, "taus": taus, "trials": trials
        }),
        AnticoncentrationData {
            mode: "monte-carlo",
            n,
            degree,
            samples: trials,
            rows,
        },
        checks,
    )
}

/// Fraction of outcomes whose pointwise error reaches the Markov threshold
/// `eps / (2^n delta)`. Markov's inequality over the verified L1 budget
/// guarantees the returned fraction never exceeds `delta`.
pub fn markov_tail_check(
    p: &DistributionTable,
    q: &[f64],
    eps: f64,
    delta: f64,
) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::Argument("delta must be positive".into()));
    }
    let l1 = p.l1_distance(q)?;
    if l1 > eps + 1e-12 {
        return Err(Error::Argument(format!(
            "additive budget violated: sum |p - q| = {l1} > eps = {eps}"
        )));
    }
    let n = p.n();
    let threshold = eps / ((n as f64).exp2() * delta);
    let exceeding = (0..q.len())
        .filter(|&z| (p.prob::<f64>(z) - q[z]).abs() >= threshold)
        .count();
    Ok(exceeding as f64 / q.len() as f64)
}

/// Configuration of a chain experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ChainConfig {
    pub n: usize,
    pub params: ChainParams,
    pub adversary: AdversaryKind,
    pub f_trials: u32,
    pub t_bits: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
struct ChainTrial {
    dyadic_error: f64,
    adversary_l1: f64,
    successes: u64,
    outcomes: u64,
}

#[derive(Clone, Debug, Serialize)]
struct ChainData {
    tau: f64,
    xi: f64,
    u: f64,
    v: f64,
    success_floor: f64,
    u_lower_bound: f64,
    v_upper_bound: f64,
    fraction: f64,
    std_err: f64,
    trials: Vec<ChainTrial>,
    total_queries: u64,
}

/// End-to-end chain experiment: sample random degree-3 `f`, build the
/// adversary's distribution, realize it as a dyadic sampler, estimate each
/// `q_z` through the counting oracle, and measure the fraction of `(z, f)`
/// with `|p_z - q~_z| <= u p_z`. Passes when the fraction reaches
/// `v - 3 std_err`.
pub fn chain_experiment(cfg: &ChainConfig, oracle: &dyn CountOracle) -> Result<ExperimentReport> {
    if cfg.f_trials == 0 {
        return Err(Error::Argument("f_trials must be >= 1".into()));
    }
    if cfg.n == 0 {
        return Err(Error::Argument("n must be >= 1".into()));
    }
    let params = &cfg.params;
    let mut trials = Vec::with_capacity(cfg.f_trials as usize);
    let mut successes = 0u64;
    let mut total = 0u64;
    let mut total_queries = 0u64;
    for trial in 0..cfg.f_trials {
        let mut rng_f = seeds::rng(seeds::derive(cfg.seed, "chain-f", trial as u64));
        let f = random_polynomial(cfg.n, 3, &mut rng_f)?;
        let table = iqp_distribution(&f)?;
        let mut rng_adv = seeds::rng(seeds::derive(cfg.seed, "chain-adv", trial as u64));
        let sampler = build_adversary(cfg.adversary, &table, params.eps(), &mut rng_adv)?;
        let (alg, dyadic_error) =
            RandomizedAlgorithm::dyadic_from_probs(cfg.t_bits, sampler.q())?;
        let preds = alg.preimage_predicates_all()?;
        let mut trial_successes = 0u64;
        for z in 0..1u64 << cfg.n {
            let mut rng_z = seeds::rng(seeds::derive(
                cfg.seed,
                "chain-estimate",
                ((trial as u64) << 32) | z,
            ));
            let est = stockmeyer_estimate_for_predicate(
                &preds[z as usize],
                z,
                params.alpha(),
                params.r(),
                oracle,
                &mut rng_z,
            )?;
            total_queries += est.queries;
            let p_z = table.prob::<f64>(z as usize);
            if (p_z - est.q_mid).abs() <= params.u() * p_z {
                trial_successes += 1;
            }
            total += 1;
        }
        successes += trial_successes;
        trials.push(ChainTrial {
            dyadic_error,
            adversary_l1: sampler.actual_l1(),
            successes: trial_successes,
            outcomes: 1u64 << cfg.n,
        });
    }
    let fraction = successes as f64 / total as f64;
    let std_err = (fraction * (1.0 - fraction) / total as f64).sqrt();
    let v = params.v();
    let checks = vec![
        CheckResult::new("chain fraction >= v - 3 sigma", fraction >= v - 3.0 * std_err)
            .with_values(fraction, v)
            .with_details(format!("3 sigma = {}", 3.0 * std_err)),
        CheckResult::new(
            "u >= eps / (1 + sqrt 3)",
            params.u() >= params.u_lower_bound(),
        )
        .with_values(params.u(), params.u_lower_bound()),
        CheckResult::new(
            "v <= 1 - eps / (u (1 + sqrt 3))",
            v <= params.v_upper_bound(),
        )
        .with_values(v, params.v_upper_bound()),
    ];
    ExperimentReport::new(
        "chain",
        cfg.seed,
        cfg,
        ChainData {
            tau: params.tau(),
            xi: params.xi(),
            u: params.u(),
            v,
            success_floor: params.success_floor(cfg.t_bits),
            u_lower_bound: params.u_lower_bound(),
            v_upper_bound: params.v_upper_bound(),
            fraction,
            std_err,
            trials,
            total_queries,
        },
        checks,
    )
}
