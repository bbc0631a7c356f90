//! Command-line front end: file ingestion, seeded experiment execution, and
//! report emission.
//!
//! Exit codes: 0 when the run passes, 1 when a validated invariant fails,
//! 2 for configuration or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gaplab::circuits::{compile_cnf, iqp_distribution, t_count, Cnf3, ReversibleCircuit};
use gaplab::counting::{
    a_k, stockmeyer_estimate, Decision, EnumerationOracle, MembershipPredicate,
    ProductPredicate, QueryLog, RandomizedAlgorithm,
};
use gaplab::experiments::{
    anticoncentration_csv, anticoncentration_exact, anticoncentration_sweep, chain_experiment,
    AdversaryKind, ChainConfig, ChainParams,
};
use gaplab::gf2poly::Gf2Polynomial;
use gaplab::hashing::{leftover_deviation_probability, pairwise_independence_exhaustive};
use gaplab::report::{CheckResult, ExperimentReport};
use gaplab::{seeds, BitVector, Error};

#[derive(Parser)]
#[command(
    name = "gaplab",
    version,
    about = "Exact IQP-style output distributions, Toeplitz hashing, and approximate counting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact gap sum of a polynomial file.
    Gap {
        /// Polynomial JSON: {"n": 3, "monomials": [[0], [0, 1, 2]]}
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact IQP output distribution of a polynomial file.
    IqpDist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Anti-concentration sweep over tau values.
    Anticoncentration {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Comma-separated tau values in (0, 1).
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 0.75])]
        tau_list: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every polynomial instead of sampling.
        #[arg(long, conflicts_with = "trials")]
        exhaustive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Exhaustive pairwise independence plus a leftover-hash experiment.
    HashTest {
        /// Input bits of the exhaustively checked family.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Output bits of the exhaustively checked family.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Planted set size for the leftover experiment.
        #[arg(long, default_value_t = 1024)]
        set_size: usize,
        /// Output bits for the leftover experiment.
        #[arg(long, default_value_t = 4)]
        leftover_m: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amplified A_k decision on a planted or polynomial-defined predicate.
    ApproxCount {
        /// Predicate width for the planted interval set.
        #[arg(long, conflicts_with = "input")]
        width: Option<usize>,
        /// Planted set size: accepts x < count.
        #[arg(long, conflicts_with = "input", requires = "width")]
        count: Option<u64>,
        /// Polynomial JSON; the set is {x : f(x) = 1}.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        query_log: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplicative estimate of a sampler's output probability.
    Stockmeyer {
        /// Sampler kind.
        #[arg(long, value_enum)]
        alg: AlgKind,
        #[arg(long)]
        t_bits: usize,
        /// Output width for the constant sampler.
        #[arg(long)]
        n_bits: Option<usize>,
        /// Polynomial JSON for the dyadic sampler (its IQP distribution).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Target outcome, as an integer index.
        #[arg(long, default_value_t = 0)]
        z: u64,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        query_log: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end chain experiment against a mock adversary.
    Chain {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 4)]
        alpha: u32,
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[arg(long, default_value_t = 3)]
        f_trials: u32,
        /// Randomness bits of the dyadic adversary realization.
        #[arg(long, default_value_t = 20)]
        t_bits: usize,
        /// exact | noise | uniform | sparsify
        #[arg(long, default_value = "exact")]
        adversary: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        query_log: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// T-gate count of the compiled 3-CNF construction.
    Tcount {
        /// DIMACS file; every clause must have exactly three literals.
        #[arg(long)]
        input: PathBuf,
    },
    /// Compile a 3-CNF to a reversible Toffoli circuit.
    CompileCnf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum AlgKind {
    Constant,
    Identity,
    Dyadic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_polynomial(path: &Path) -> Result<Gf2Polynomial, Error> {
    let text = std::fs::read_to_string(path)?;
    Gf2Polynomial::from_json(&text)
}

fn read_cnf(path: &Path) -> Result<Cnf3, Error> {
    let text = std::fs::read_to_string(path)?;
    Cnf3::parse_dimacs(&text)
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_report(
    mut report: ExperimentReport,
    started: Instant,
    out: Option<&PathBuf>,
    format: OutputFormat,
) -> Result<u8, Error> {
    report.runtime = started.elapsed();
    let text = match format {
        OutputFormat::Json => report.to_json_pretty(),
        OutputFormat::Csv => anticoncentration_csv(&report)?,
    };
    write_or_print(out, &text)?;
    eprintln!(
        "{}: {} in {:?}",
        report.experiment,
        if report.passed { "pass" } else { "FAIL" },
        report.runtime
    );
    Ok(if report.passed { 0 } else { 1 })
}

fn write_query_log(path: Option<&PathBuf>, log: &QueryLog) -> Result<(), Error> {
    if let Some(path) = path {
        std::fs::write(path, log.to_json_lines())?;
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Gap { input, out } => {
            let f = read_polynomial(&input)?;
            let gap = f.gap()?;
            println!("{gap}");
            if out.is_some() {
                let payload = serde_json::json!({"n": f.n(), "gap": gap});
                write_or_print(out.as_ref(), &serde_json::to_string_pretty(&payload)?)?;
            }
            Ok(0)
        }
        Command::IqpDist { input, out } => {
            let f = read_polynomial(&input)?;
            let table = iqp_distribution(&f)?;
            let payload = serde_json::json!({
                "n": table.n(),
                "gaps": table.gaps(),
                "probs": table.probs::<f64>(),
            });
            write_or_print(out.as_ref(), &serde_json::to_string_pretty(&payload)?)?;
            Ok(0)
        }
        Command::Anticoncentration {
            n,
            degree,
            tau_list,
            trials,
            seed,
            exhaustive,
            out,
            format,
        } => {
            let started = Instant::now();
            let report = if exhaustive {
                anticoncentration_exact(n, degree, &tau_list)?
            } else {
                anticoncentration_sweep(n, degree, &tau_list, trials, seed)?
            };
            emit_report(report, started, out.as_ref(), format)
        }
        Command::HashTest {
            n,
            m,
            set_size,
            leftover_m,
            eps,
            trials,
            seed,
            out,
        } => {
            let started = Instant::now();
            let pairwise = pairwise_independence_exhaustive(n, m)?;
            // planted random set over a width that comfortably holds it
            let width = (usize::BITS - set_size.leading_zeros()) as usize + 2;
            let mut rng = seeds::rng(seeds::derive(seed, "hash-test-set", 0));
            let mut set = std::collections::BTreeSet::new();
            while set.len() < set_size {
                set.insert(rand::Rng::gen_range(&mut rng, 0..1u64 << width));
            }
            let elems: Vec<BitVector> = set
                .iter()
                .map(|&x| BitVector::from_index(width, x))
                .collect();
            let mut trial_rng = seeds::rng(seeds::derive(seed, "hash-test-trials", 0));
            let leftover =
                leftover_deviation_probability(&elems, leftover_m, eps, trials, &mut trial_rng)?;
            let checks = vec![
                CheckResult::new("pairwise independence exact", pairwise.passed())
                    .with_details(format!(
                        "{} pairs, expected count {}",
                        pairwise.pairs_checked, pairwise.expected_per_pair
                    )),
                CheckResult::new("leftover deviation within bound + 3 sigma", leftover.passed())
                    .with_values(leftover.empirical, leftover.bound),
            ];
            let report = ExperimentReport::new(
                "hash-test",
                seed,
                serde_json::json!({
                    "n": n, "m": m, "set_size": set_size, "leftover_m": leftover_m,
                    "eps": eps, "trials": trials,
                }),
                serde_json::json!({"pairwise": pairwise, "leftover": leftover}),
                checks,
            )?;
            emit_report(report, started, out.as_ref(), OutputFormat::Json)
        }
        Command::ApproxCount {
            width,
            count,
            input,
            k,
            r,
            seed,
            query_log,
            out,
        } => {
            let started = Instant::now();
            let pred = match (&input, width, count) {
                (Some(path), None, None) => {
                    let f = read_polynomial(path)?;
                    let width = f.n();
                    MembershipPredicate::new(width, move |x| f.eval_index(x))
                }
                (None, Some(w), Some(c)) => MembershipPredicate::interval(w, c),
                _ => {
                    return Err(Error::Argument(
                        "provide either --input or both --width and --count".into(),
                    ))
                }
            };
            let log = QueryLog::new();
            let oracle = EnumerationOracle::new().with_log(Arc::clone(&log));
            let mut rng = seeds::rng(seeds::derive(seed, "approx-count", 0));
            let product = ProductPredicate::new(&pred, 1);
            let decision = a_k(&product, k, r, &oracle, &mut rng)?;
            write_query_log(query_log.as_ref(), &log)?;
            println!(
                "{}",
                match decision {
                    Decision::Accept => "accept",
                    Decision::Reject => "reject",
                }
            );
            let report = ExperimentReport::new(
                "approx-count",
                seed,
                serde_json::json!({
                    "width": pred.width(), "k": k, "r": r,
                    "planted_count": count,
                }),
                serde_json::json!({
                    "decision": decision,
                    "queries": log.len(),
                }),
                vec![],
            )?;
            if out.is_some() {
                emit_report(report, started, out.as_ref(), OutputFormat::Json)?;
            }
            Ok(0)
        }
        Command::Stockmeyer {
            alg,
            t_bits,
            n_bits,
            input,
            z,
            alpha,
            r,
            seed,
            query_log,
            out,
        } => {
            let started = Instant::now();
            let (sampler, dyadic_error) = match alg {
                AlgKind::Constant => {
                    let n_bits = n_bits.ok_or_else(|| {
                        Error::Argument("--alg constant requires --n-bits".into())
                    })?;
                    (RandomizedAlgorithm::constant(t_bits, n_bits, 0)?, 0.0)
                }
                AlgKind::Identity => (RandomizedAlgorithm::identity(t_bits)?, 0.0),
                AlgKind::Dyadic => {
                    let path = input.as_ref().ok_or_else(|| {
                        Error::Argument("--alg dyadic requires --input".into())
                    })?;
                    let f = read_polynomial(path)?;
                    let table = iqp_distribution(&f)?;
                    RandomizedAlgorithm::dyadic_from_probs(t_bits, &table.probs::<f64>())?
                }
            };
            let log = QueryLog::new();
            let oracle = EnumerationOracle::new().with_log(Arc::clone(&log));
            let mut rng = seeds::rng(seeds::derive(seed, "stockmeyer", z));
            let estimate = stockmeyer_estimate(&sampler, z, alpha, r, &oracle, &mut rng)?;
            write_query_log(query_log.as_ref(), &log)?;
            let report = ExperimentReport::new(
                "stockmeyer",
                seed,
                serde_json::json!({
                    "alg": alg, "t_bits": t_bits, "n_bits": sampler.n_bits(),
                    "z": z, "alpha": alpha, "r": r, "dyadic_error": dyadic_error,
                }),
                serde_json::json!({"estimate": estimate}),
                vec![],
            )?;
            emit_report(report, started, out.as_ref(), OutputFormat::Json)
        }
        Command::Chain {
            n,
            eps,
            delta,
            sigma,
            alpha,
            r,
            f_trials,
            t_bits,
            adversary,
            seed,
            query_log,
            out,
        } => {
            let started = Instant::now();
            let params = ChainParams::new(eps, delta, sigma, alpha, r)?;
            let adversary: AdversaryKind = adversary.parse()?;
            let cfg = ChainConfig {
                n,
                params,
                adversary,
                f_trials,
                t_bits,
                seed,
            };
            let log = QueryLog::new();
            let oracle = EnumerationOracle::new().with_log(Arc::clone(&log));
            let report = chain_experiment(&cfg, &oracle)?;
            write_query_log(query_log.as_ref(), &log)?;
            emit_report(report, started, out.as_ref(), OutputFormat::Json)
        }
        Command::Tcount { input } => {
            let g = read_cnf(&input)?;
            println!("{}", t_count(&g));
            Ok(0)
        }
        Command::CompileCnf { input, out } => {
            let g = read_cnf(&input)?;
            let compiled = compile_cnf(&g);
            let payload = CompiledCnf {
                inputs: compiled.inputs(),
                ancillas: compiled.ancillas(),
                width: compiled.width(),
                output_wire: compiled.output_wire(),
                toffoli_count: compiled.toffoli_count(),
                t_count: t_count(&g),
                circuit: compiled.clone(),
            };
            write_or_print(out.as_ref(), &serde_json::to_string_pretty(&payload)?)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct CompiledCnf {
    inputs: usize,
    ancillas: usize,
    width: usize,
    output_wire: usize,
    toffoli_count: usize,
    t_count: u64,
    circuit: ReversibleCircuit,
}
