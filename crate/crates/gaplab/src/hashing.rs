//! The affine Toeplitz hash family `h_{A,b}(x) = Ax + b` over F2.
//!
//! `A` is an `m x n` binary Toeplitz matrix (constant along diagonals,
//! `a[i][j] = a[i+1][j+1]`), defined by `n + m - 1` bits; `b` is a free
//! m-bit offset. Sampling all `n + 2m - 1` bits uniformly gives a pairwise
//! independent family, which the functions below verify exhaustively and
//! exercise against the leftover-hash deviation bound.
//!
//! Indexing convention: `a[i][j] = diag[i - j + n - 1]`, so `diag` runs from
//! the top-right corner down to the bottom-left.

use rand::RngCore;
use serde::Serialize;

use crate::bits::{parity_and, BitVector};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ToeplitzHasher {
    n: usize,
    m: usize,
    diag: BitVector,
    offset: BitVector,
    rows: Vec<Vec<u64>>, // row i packed in the layout of an n-bit input
}

impl ToeplitzHasher {
    pub fn from_parts(n: usize, m: usize, diag: BitVector, offset: BitVector) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::invalid("toeplitz hasher", "n and m must be >= 1"));
        }
        if diag.len() != n + m - 1 {
            return Err(Error::invalid(
                "toeplitz hasher",
                format!("diagonal needs {} bits, got {}", n + m - 1, diag.len()),
            ));
        }
        if offset.len() != m {
            return Err(Error::invalid(
                "toeplitz hasher",
                format!("offset needs {m} bits, got {}", offset.len()),
            ));
        }
        let words = n.div_ceil(64);
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = vec![0u64; words];
            for j in 0..n {
                if diag.get(i + n - 1 - j) {
                    row[j / 64] |= 1u64 << (j % 64);
                }
            }
            rows.push(row);
        }
        Ok(ToeplitzHasher {
            n,
            m,
            diag,
            offset,
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diag(&self) -> &BitVector {
        &self.diag
    }

    pub fn offset(&self) -> &BitVector {
        &self.offset
    }

    /// Matrix entry `a[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        assert!(i < self.m && j < self.n);
        self.diag.get(i + self.n - 1 - j)
    }

    /// Row `i` of `A`, packed like an n-bit input vector.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// `y_i = b_i ^ parity(row_i & x)`.
    pub fn hash(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = BitVector::zeros(self.m);
        for i in 0..self.m {
            let bit = self.offset.get(i) ^ parity_and(&self.rows[i], x.words());
            y.set(i, bit);
        }
        Ok(y)
    }

    /// Index-form hash for inputs of at most 64 bits.
    pub fn hash_index(&self, x: u64) -> u64 {
        debug_assert!(self.n <= 64);
        let mut y = self.offset.to_index().expect("m <= 64 for index form");
        for (i, row) in self.rows.iter().enumerate() {
            if (row[0] & x).count_ones() & 1 == 1 {
                y ^= 1u64 << i;
            }
        }
        y
    }
}

/// Samples all `n + 2m - 1` defining bits uniformly: diagonal first, then
/// offset.
pub fn sample_hasher(n: usize, m: usize, rng: &mut impl RngCore) -> ToeplitzHasher {
    assert!(n >= 1 && m >= 1);
    let diag = BitVector::random(n + m - 1, rng);
    let offset = BitVector::random(m, rng);
    ToeplitzHasher::from_parts(n, m, diag, offset).expect("lengths are correct by construction")
}

/// Exhaustive pairwise-independence check over the full family.
#[derive(Clone, Debug, Serialize)]
pub struct PairwiseReport {
    pub n: usize,
    pub m: usize,
    pub family_size: u64,
    pub expected_per_pair: u64,
    pub pairs_checked: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl PairwiseReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Counts, for every ordered pair `x1 != x2` and every `(y1, y2)`, the number
/// of family members with `h(x1) = y1` and `h(x2) = y2`; pairwise
/// independence demands exactly `2^{n+2m-1} / 2^{2m} = 2^{n-1}` each.
pub fn pairwise_independence_exhaustive(n: usize, m: usize) -> Result<PairwiseReport> {
    if n == 0 || m == 0 {
        return Err(Error::Argument("n and m must be >= 1".into()));
    }
    let free_bits = n + 2 * m - 1;
    if free_bits > 22 {
        return Err(Error::Resource {
            what: "hash family free bits",
            required: free_bits as u64,
            limit: 22,
        });
    }
    if 2 * n + 2 * m > 26 {
        return Err(Error::Resource {
            what: "pairwise count table bits",
            required: (2 * n + 2 * m) as u64,
            limit: 26,
        });
    }
    let diag_bits = n + m - 1;
    let points = 1usize << n;
    let images = 1usize << m;
    let mut counts = vec![0u64; points * points * images * images];
    let mut hashes = vec![0u64; points];
    for diag_ix in 0..1u64 << diag_bits {
        for off_ix in 0..1u64 << m {
            let h = ToeplitzHasher::from_parts(
                n,
                m,
                BitVector::from_index(diag_bits, diag_ix),
                BitVector::from_index(m, off_ix),
            )?;
            for (x, slot) in hashes.iter_mut().enumerate() {
                *slot = h.hash_index(x as u64);
            }
            for x1 in 0..points {
                for x2 in 0..points {
                    if x1 == x2 {
                        continue;
                    }
                    let idx = ((x1 * points + x2) * images + hashes[x1] as usize) * images
                        + hashes[x2] as usize;
                    counts[idx] += 1;
                }
            }
        }
    }
    let family_size = 1u64 << free_bits;
    let expected = family_size >> (2 * m);
    let mut violations = 0u64;
    let mut first_violation = None;
    let mut pairs_checked = 0u64;
    for x1 in 0..points {
        for x2 in 0..points {
            if x1 == x2 {
                continue;
            }
            pairs_checked += 1;
            for y1 in 0..images {
                for y2 in 0..images {
                    let c =
                        counts[((x1 * points + x2) * images + y1) * images + y2];
                    if c != expected {
                        violations += 1;
                        if first_violation.is_none() {
                            first_violation = Some(format!(
                                "x1={x1:#b} x2={x2:#b} y1={y1:#b} y2={y2:#b}: {c} != {expected}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(PairwiseReport {
        n,
        m,
        family_size,
        expected_per_pair: expected,
        pairs_checked,
        violations,
        first_violation,
    })
}

/// Monte-Carlo estimate of the leftover-hash deviation probability.
#[derive(Clone, Debug, Serialize)]
pub struct LeftoverReport {
    pub set_size: usize,
    pub m: usize,
    pub eps: f64,
    pub trials: u64,
    pub deviating: u64,
    pub empirical: f64,
    pub bound: f64,
    pub std_err: f64,
}

impl LeftoverReport {
    /// Bound holds with three standard errors of slack.
    pub fn passed(&self) -> bool {
        self.empirical <= self.bound + 3.0 * self.std_err
    }
}

/// Fraction of sampled hashers whose zero-preimage count inside `S` deviates
/// from `|S| / 2^m` by at least `eps * |S| / 2^m`; the family guarantees this
/// fraction is at most `2^m / (eps^2 |S|)`.
pub fn leftover_deviation_probability(
    s: &[BitVector],
    m: usize,
    eps: f64,
    trials: u64,
    rng: &mut impl RngCore,
) -> Result<LeftoverReport> {
    if s.is_empty() {
        return Err(Error::Argument("set S must be nonempty".into()));
    }
    if eps <= 0.0 {
        return Err(Error::Argument("eps must be positive".into()));
    }
    let n = s[0].len();
    if s.iter().any(|x| x.len() != n) {
        return Err(Error::Argument("set elements must share one width".into()));
    }
    let expected = s.len() as f64 / (m as f64).exp2();
    let threshold = eps * expected;
    // index fast path for narrow inputs
    let elems: Option<Vec<u64>> = if n <= 64 && m <= 64 {
        Some(s.iter().map(|x| x.to_index().expect("n <= 64")).collect())
    } else {
        None
    };
    let mut deviating = 0u64;
    for _ in 0..trials {
        let h = sample_hasher(n, m, rng);
        let count = match &elems {
            Some(es) => es.iter().filter(|&&x| h.hash_index(x) == 0).count(),
            None => {
                let zero = BitVector::zeros(m);
                s.iter()
                    .filter(|x| h.hash(x).expect("width checked") == zero)
                    .count()
            }
        };
        if (count as f64 - expected).abs() >= threshold {
            deviating += 1;
        }
    }
    let empirical = deviating as f64 / trials as f64;
    let bound = (m as f64).exp2() / (eps * eps * s.len() as f64);
    let std_err = (empirical * (1.0 - empirical) / trials as f64).sqrt();
    Ok(LeftoverReport {
        set_size: s.len(),
        m,
        eps,
        trials,
        deviating,
        empirical,
        bound,
        std_err,
    })
}
