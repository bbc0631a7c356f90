//! The exact counting oracle behind the threshold tests.
//!
//! The contract is a single query: given a membership predicate (optionally
//! raised to a cartesian power and restricted by an affine hash), is the
//! accepted-set size at least `c`? Answers are exact. The stand-in
//! implementation enumerates the base support once and counts product-set
//! solutions of `h(x) = 0^m` by meeting in the middle over the blocks, which
//! keeps queries exact while bounding work by `|S|^ceil(alpha/2)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::bits::extract_word;
use crate::hashing::ToeplitzHasher;
use crate::limits::{DEFAULT_ORACLE_BUDGET_WORDS, MAX_PREDICATE_WIDTH};
use crate::{Error, Result};

/// Total decision procedure over `width`-bit strings; the accepted set is
/// `S = {x : decide(x)}`.
#[derive(Clone)]
pub struct MembershipPredicate {
    id: u64,
    width: usize,
    decide: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    explicit_support: Option<Arc<Vec<u64>>>,
}

static NEXT_PREDICATE_ID: AtomicU64 = AtomicU64::new(0);

impl MembershipPredicate {
    pub fn new(width: usize, decide: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        MembershipPredicate {
            id: NEXT_PREDICATE_ID.fetch_add(1, Ordering::Relaxed),
            width,
            decide: Arc::new(decide),
            explicit_support: None,
        }
    }

    /// Planted predicate accepting exactly `{x : x < count}`.
    pub fn interval(width: usize, count: u64) -> Self {
        Self::new(width, move |x| x < count)
    }

    /// Predicate with a precomputed (sorted, deduplicated) support list.
    pub fn from_support(width: usize, support: Arc<Vec<u64>>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        let list = Arc::clone(&support);
        MembershipPredicate {
            id: NEXT_PREDICATE_ID.fetch_add(1, Ordering::Relaxed),
            width,
            decide: Arc::new(move |x| list.binary_search(&x).is_ok()),
            explicit_support: Some(support),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn decide(&self, x: u64) -> bool {
        (self.decide)(x)
    }

    pub fn explicit_support(&self) -> Option<&Arc<Vec<u64>>> {
        self.explicit_support.as_ref()
    }
}

impl std::fmt::Debug for MembershipPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MembershipPredicate")
            .field("id", &self.id)
            .field("width", &self.width)
            .finish()
    }
}

/// `S^{x alpha}`: alpha-fold cartesian power of the base predicate, laid out
/// as `alpha` consecutive `width`-bit blocks. `alpha = 1` is the base set.
#[derive(Clone, Copy, Debug)]
pub struct ProductPredicate<'a> {
    pub base: &'a MembershipPredicate,
    pub alpha: u32,
}

impl<'a> ProductPredicate<'a> {
    pub fn new(base: &'a MembershipPredicate, alpha: u32) -> Self {
        assert!(alpha >= 1);
        ProductPredicate { base, alpha }
    }

    pub fn width(&self) -> usize {
        self.base.width() * self.alpha as usize
    }
}

impl<'a> From<&'a MembershipPredicate> for ProductPredicate<'a> {
    fn from(base: &'a MembershipPredicate) -> Self {
        ProductPredicate::new(base, 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryKind {
    RawCount,
    HashRestricted,
}

/// One audited oracle interaction.
#[derive(Clone, Debug, Serialize)]
pub struct QueryRecord {
    pub query_id: u64,
    pub kind: QueryKind,
    pub threshold: u64,
    pub hasher_seed: Option<u64>,
    pub answer: bool,
}

/// Append-only query log, shared across concurrent queries.
#[derive(Default)]
pub struct QueryLog {
    entries: Mutex<Vec<QueryRecord>>,
}

impl QueryLog {
    pub fn new() -> Arc<Self> {
        Arc::new(QueryLog::default())
    }

    pub fn push(&self, record: QueryRecord) {
        self.entries.lock().expect("log poisoned").push(record);
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("log poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<QueryRecord> {
        self.entries.lock().expect("log poisoned").clone()
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let entries = self.entries.lock().expect("log poisoned");
        let mut out = String::new();
        for e in entries.iter() {
            out.push_str(&serde_json::to_string(e).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// A threshold question: is the (optionally hash-restricted) accepted-set
/// size at least `threshold`?
pub struct ThresholdQuery<'a> {
    pub predicate: ProductPredicate<'a>,
    pub hasher: Option<&'a ToeplitzHasher>,
    pub hasher_seed: Option<u64>,
    pub threshold: u64,
}

/// Exact decision oracle for threshold queries.
pub trait CountOracle: Send + Sync {
    fn threshold_query(&self, query: &ThresholdQuery<'_>) -> Result<bool>;
}

/// Brute-force oracle: enumerates the base support once per predicate and
/// answers every query exactly.
pub struct EnumerationOracle {
    budget_words: u64,
    support_cache: Mutex<HashMap<u64, Arc<Vec<u64>>>>,
    log: Option<Arc<QueryLog>>,
    next_query_id: AtomicU64,
}

impl Default for EnumerationOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl EnumerationOracle {
    pub fn new() -> Self {
        EnumerationOracle {
            budget_words: DEFAULT_ORACLE_BUDGET_WORDS,
            support_cache: Mutex::new(HashMap::new()),
            log: None,
            next_query_id: AtomicU64::new(0),
        }
    }

    pub fn with_budget(mut self, budget_words: u64) -> Self {
        self.budget_words = budget_words;
        self
    }

    pub fn with_log(mut self, log: Arc<QueryLog>) -> Self {
        self.log = Some(log);
        self
    }

    pub fn clear_cache(&self) {
        self.support_cache.lock().expect("cache poisoned").clear();
    }

    /// Sorted support of the base predicate, memoized per predicate identity.
    pub fn support(&self, pred: &MembershipPredicate) -> Result<Arc<Vec<u64>>> {
        if let Some(s) = pred.explicit_support() {
            return Ok(Arc::clone(s));
        }
        let mut cache = self.support_cache.lock().expect("cache poisoned");
        if let Some(s) = cache.get(&pred.id()) {
            return Ok(Arc::clone(s));
        }
        if pred.width() > MAX_PREDICATE_WIDTH {
            return Err(Error::Resource {
                what: "predicate enumeration width",
                required: pred.width() as u64,
                limit: MAX_PREDICATE_WIDTH as u64,
            });
        }
        let support: Vec<u64> = (0..1u64 << pred.width()).filter(|&x| pred.decide(x)).collect();
        let arc = Arc::new(support);
        cache.insert(pred.id(), Arc::clone(&arc));
        Ok(arc)
    }

    fn record(&self, kind: QueryKind, q: &ThresholdQuery<'_>, answer: bool) {
        if let Some(log) = &self.log {
            log.push(QueryRecord {
                query_id: self.next_query_id.fetch_add(1, Ordering::Relaxed),
                kind,
                threshold: q.threshold,
                hasher_seed: q.hasher_seed,
                answer,
            });
        } else {
            self.next_query_id.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn queries_issued(&self) -> u64 {
        self.next_query_id.load(Ordering::Relaxed)
    }
}

impl CountOracle for EnumerationOracle {
    fn threshold_query(&self, q: &ThresholdQuery<'_>) -> Result<bool> {
        let base = q.predicate.base;
        let alpha = q.predicate.alpha as usize;
        let support = self.support(base)?;
        let answer = match q.hasher {
            None => {
                let count = sat_pow(support.len() as u128, alpha as u32);
                count >= q.threshold as u128
            }
            Some(h) => {
                if h.n() != q.predicate.width() {
                    return Err(Error::DimensionMismatch {
                        expected: q.predicate.width(),
                        got: h.n(),
                    });
                }
                hash_restricted_at_least(
                    h,
                    base.width(),
                    alpha,
                    &support,
                    q.threshold,
                    self.budget_words,
                )?
            }
        };
        self.record(
            if q.hasher.is_none() {
                QueryKind::RawCount
            } else {
                QueryKind::HashRestricted
            },
            q,
            answer,
        );
        Ok(answer)
    }
}

fn sat_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Syndromes live in F2^m; one machine word covers every hot case and a fixed
/// wide form covers the rest.
const MAX_SYNDROME_WORDS: usize = 8;

trait Syndrome: Copy + Ord + Default {
    fn xor(self, other: Self) -> Self;
    fn set_bit(&mut self, i: usize);
}

impl Syndrome for u64 {
    fn xor(self, other: Self) -> Self {
        self ^ other
    }
    fn set_bit(&mut self, i: usize) {
        *self |= 1u64 << i;
    }
}

type WideSyndrome = [u64; MAX_SYNDROME_WORDS];

impl Syndrome for WideSyndrome {
    fn xor(self, other: Self) -> Self {
        let mut out = self;
        for (o, x) in out.iter_mut().zip(other.iter()) {
            *o ^= x;
        }
        out
    }
    fn set_bit(&mut self, i: usize) {
        self[i / 64] |= 1u64 << (i % 64);
    }
}

/// Decides `|{x in S^alpha : h(x) = 0^m}| >= threshold` exactly.
///
/// `h(x) = 0` iff `A x = b`; the syndrome of a block element is its
/// contribution `A_j s` to the left side, so a tuple is a solution iff its
/// block syndromes XOR to `b`. The last `floor(alpha/2)` blocks are
/// materialized and sorted, the first `ceil(alpha/2)` streamed.
fn hash_restricted_at_least(
    h: &ToeplitzHasher,
    block_width: usize,
    alpha: usize,
    support: &[u64],
    threshold: u64,
    budget_words: u64,
) -> Result<bool> {
    if threshold == 0 {
        return Ok(true);
    }
    if support.is_empty() {
        return Ok(false);
    }
    let m = h.m();
    let words = m.div_ceil(64);
    if words > MAX_SYNDROME_WORDS {
        return Err(Error::Resource {
            what: "hash output words",
            required: words as u64,
            limit: MAX_SYNDROME_WORDS as u64,
        });
    }
    let left_blocks = alpha.div_ceil(2);
    let right_blocks = alpha / 2;
    let left_items = sat_pow(support.len() as u128, left_blocks as u32);
    let right_items = sat_pow(support.len() as u128, right_blocks as u32);
    let cost = left_items
        .saturating_add(right_items)
        .saturating_mul(words as u128);
    if cost > budget_words as u128 {
        return Err(Error::Resource {
            what: "product-count budget words",
            required: cost.min(u64::MAX as u128) as u64,
            limit: budget_words,
        });
    }
    if m <= 64 {
        let (blocks, target) = block_syndromes::<u64>(h, block_width, alpha, support);
        Ok(mitm_at_least(&blocks, left_blocks, target, threshold))
    } else {
        let (blocks, target) = block_syndromes::<WideSyndrome>(h, block_width, alpha, support);
        Ok(mitm_at_least(&blocks, left_blocks, target, threshold))
    }
}

/// Per-block element syndromes plus the target `b`.
fn block_syndromes<S: Syndrome>(
    h: &ToeplitzHasher,
    block_width: usize,
    alpha: usize,
    support: &[u64],
) -> (Vec<Vec<S>>, S) {
    let m = h.m();
    // masks[j][i]: the window of row i over block j
    let mut blocks = Vec::with_capacity(alpha);
    for j in 0..alpha {
        let masks: Vec<u64> = (0..m)
            .map(|i| extract_word(h.row_words(i), j * block_width, block_width))
            .collect();
        let syndromes: Vec<S> = support
            .iter()
            .map(|&s| {
                let mut syn = S::default();
                for (i, &mask) in masks.iter().enumerate() {
                    if (mask & s).count_ones() & 1 == 1 {
                        syn.set_bit(i);
                    }
                }
                syn
            })
            .collect();
        blocks.push(syndromes);
    }
    let mut target = S::default();
    for i in 0..m {
        if h.offset().get(i) {
            target.set_bit(i);
        }
    }
    (blocks, target)
}

fn mitm_at_least<S: Syndrome>(
    blocks: &[Vec<S>],
    left_blocks: usize,
    target: S,
    threshold: u64,
) -> bool {
    // materialize and sort the right half
    let mut right: Vec<S> = vec![S::default()];
    for block in &blocks[left_blocks..] {
        let mut next = Vec::with_capacity(right.len() * block.len());
        for &acc in &right {
            for &s in block {
                next.push(acc.xor(s));
            }
        }
        right = next;
    }
    right.sort_unstable();

    // stream the left half, counting matches until the threshold is reached
    let mut count = 0u64;
    stream_left(&blocks[..left_blocks], S::default(), &right, target, threshold, &mut count)
}

fn stream_left<S: Syndrome>(
    blocks: &[Vec<S>],
    acc: S,
    right: &[S],
    target: S,
    threshold: u64,
    count: &mut u64,
) -> bool {
    match blocks.split_first() {
        Some((first, rest)) => {
            for &s in first {
                if stream_left(rest, acc.xor(s), right, target, threshold, count) {
                    return true;
                }
            }
            false
        }
        None => {
            let need = acc.xor(target);
            let lo = right.partition_point(|&v| v < need);
            let hi = right.partition_point(|&v| v <= need);
            *count = count.saturating_add((hi - lo) as u64);
            *count >= threshold
        }
    }
}
