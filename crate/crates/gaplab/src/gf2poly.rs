//! Multilinear polynomials over F2 and their signed gap sums.
//!
//! A polynomial is a set of monomials; each monomial is a strictly increasing
//! tuple of variable indices, and a coefficient is 1 exactly when its tuple is
//! present. Addition of polynomials is symmetric difference of the sets.
//!
//! `gap(f) = Σ_{x in {0,1}^n} (-1)^{f(x)}` is computed exactly in integers,
//! either for a single polynomial (Gray-code enumeration) or for all linear
//! shifts at once (`gap_spectrum`, a Walsh–Hadamard transform of the sign
//! vector).

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::limits;
use crate::{Error, Result};

/// One monomial: a nonempty, strictly increasing tuple of variable indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(indices: impl Into<Vec<u32>>) -> Result<Self> {
        let v: Vec<u32> = indices.into();
        if v.is_empty() {
            return Err(Error::invalid("monomial", "empty index tuple"));
        }
        if !v.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid(
                "monomial",
                format!("indices must be strictly increasing, got {v:?}"),
            ));
        }
        Ok(Monomial(v))
    }

    pub fn linear(i: u32) -> Self {
        Monomial(vec![i])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Bit mask of the variables, valid while all indices are below 64.
    pub fn mask(&self) -> u64 {
        debug_assert!(*self.0.last().unwrap() < 64);
        self.0.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }
}

/// Multilinear polynomial over F2 on `n` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Polynomial {
    n: usize,
    monomials: BTreeSet<Monomial>,
}

/// On-disk form: `{"n": 3, "monomials": [[0], [0, 1], [0, 1, 2]]}`.
#[derive(Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n: usize,
    pub monomials: Vec<Vec<u32>>,
}

impl Gf2Polynomial {
    /// The zero polynomial on `n >= 1` variables.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("polynomial", "variable count must be >= 1"));
        }
        Ok(Gf2Polynomial {
            n,
            monomials: BTreeSet::new(),
        })
    }

    /// Builds a polynomial, rejecting out-of-range indices and duplicate
    /// tuples (duplicates would silently cancel mod 2).
    pub fn new(n: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = Self::zero(n)?;
        for m in monomials {
            if m.indices().iter().any(|&i| i as usize >= n) {
                return Err(Error::invalid(
                    "polynomial",
                    format!("monomial {:?} references a variable >= n = {n}", m.indices()),
                ));
            }
            if !p.monomials.insert(m.clone()) {
                return Err(Error::invalid(
                    "polynomial",
                    format!("duplicate monomial {:?}", m.indices()),
                ));
            }
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolynomialFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial json: {e}")))?;
        let monos = file
            .monomials
            .into_iter()
            .map(Monomial::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, monos)
    }

    pub fn to_json(&self) -> String {
        let file = PolynomialFile {
            n: self.n,
            monomials: self
                .monomials
                .iter()
                .map(|m| m.indices().to_vec())
                .collect(),
        };
        serde_json::to_string(&file).expect("polynomial serialization cannot fail")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    /// Maximum monomial size; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Evaluates at a bit vector: XOR over monomials of the AND of their
    /// variables.
    pub fn evaluate(&self, x: &BitVector) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut acc = false;
        for m in &self.monomials {
            acc ^= m.indices().iter().all(|&i| x.get(i as usize));
        }
        Ok(acc)
    }

    /// Index-form evaluation for `n <= 64`.
    pub fn eval_index(&self, x: u64) -> bool {
        debug_assert!(self.n <= 64);
        let mut acc = false;
        for m in &self.monomials {
            let mask = m.mask();
            acc ^= x & mask == mask;
        }
        acc
    }

    /// Symmetric difference: `(f ^ g)(x) = f(x) ^ g(x)`.
    pub fn xor(&self, other: &Gf2Polynomial) -> Result<Gf2Polynomial> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let monomials = self
            .monomials
            .symmetric_difference(&other.monomials)
            .cloned()
            .collect();
        Ok(Gf2Polynomial {
            n: self.n,
            monomials,
        })
    }

    /// `f_z(x) = f(x) + Σ z_i x_i`: toggles the linear monomial `(i)` for
    /// every set bit of `z`. An involution in `z`.
    pub fn shift_by_z(&self, z: &BitVector) -> Result<Gf2Polynomial> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            if z.get(i) {
                let m = Monomial::linear(i as u32);
                if !out.monomials.remove(&m) {
                    out.monomials.insert(m);
                }
            }
        }
        Ok(out)
    }

    /// Exact signed sum `Σ_x (-1)^{f(x)}` by Gray-code enumeration: between
    /// consecutive assignments exactly one bit flips, and only monomials
    /// containing that bit can change value.
    pub fn gap(&self) -> Result<i64> {
        limits::check_enum_bits("gap enumeration", self.n)?;
        let n = self.n;
        // rest-masks of monomials grouped by contained variable
        let mut by_var: Vec<Vec<u64>> = vec![Vec::new(); n];
        for m in &self.monomials {
            let mask = m.mask();
            for &i in m.indices() {
                by_var[i as usize].push(mask & !(1u64 << i));
            }
        }
        let mut x = 0u64;
        let mut value = false; // f(0) = 0: every monomial has a zero factor
        let mut sum: i64 = 1;
        for i in 1u64..(1u64 << n) {
            let bit = i.trailing_zeros() as usize;
            x ^= 1u64 << bit;
            let mut delta = false;
            for &rest in &by_var[bit] {
                delta ^= x & rest == rest;
            }
            value ^= delta;
            sum += if value { -1 } else { 1 };
        }
        Ok(sum)
    }

    /// Sign vector `(-1)^{f(x)}` for all `x`, as `±1` integers.
    pub(crate) fn sign_vector(&self) -> Result<Vec<i64>> {
        limits::check_enum_bits("sign vector", self.n)?;
        let n = self.n;
        let mut by_var: Vec<Vec<u64>> = vec![Vec::new(); n];
        for m in &self.monomials {
            let mask = m.mask();
            for &i in m.indices() {
                by_var[i as usize].push(mask & !(1u64 << i));
            }
        }
        let mut signs = vec![0i64; 1usize << n];
        let mut x = 0u64;
        let mut value = false;
        signs[0] = 1;
        for i in 1u64..(1u64 << n) {
            let bit = i.trailing_zeros() as usize;
            x ^= 1u64 << bit;
            let mut delta = false;
            for &rest in &by_var[bit] {
                delta ^= x & rest == rest;
            }
            value ^= delta;
            signs[x as usize] = if value { -1 } else { 1 };
        }
        Ok(signs)
    }

    /// All shifted gaps at once: entry `z` equals `gap(shift_by_z(f, z))`.
    /// O(n·2^n) via the Walsh–Hadamard transform of the sign vector.
    pub fn gap_spectrum(&self) -> Result<Vec<i64>> {
        let mut signs = self.sign_vector()?;
        walsh_hadamard(&mut signs);
        Ok(signs)
    }
}

/// In-place Walsh–Hadamard transform:
/// `v'[z] = Σ_x (-1)^{popcount(x & z)} v[x]`.
pub fn walsh_hadamard(values: &mut [i64]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut h = 1;
    while h < len {
        for base in (0..len).step_by(h * 2) {
            for j in base..base + h {
                let a = values[j];
                let b = values[j + h];
                values[j] = a + b;
                values[j + h] = a - b;
            }
        }
        h <<= 1;
    }
}

/// Uniformly random polynomial: every candidate monomial of size
/// `1..=degree` is included independently with probability 1/2.
/// `degree` must be in `1..=3`.
pub fn random_polynomial(n: usize, degree: usize, rng: &mut impl Rng) -> Result<Gf2Polynomial> {
    if n == 0 {
        return Err(Error::Argument("n must be >= 1".into()));
    }
    if !(1..=3).contains(&degree) {
        return Err(Error::Argument(format!(
            "random polynomial degree must be in 1..=3, got {degree}"
        )));
    }
    let mut poly = Gf2Polynomial::zero(n)?;
    for size in 1..=degree.min(n) {
        for combo in combinations(n as u32, size) {
            if rng.gen_bool(0.5) {
                poly.monomials.insert(Monomial(combo));
            }
        }
    }
    Ok(poly)
}

/// All candidate monomials of size `1..=degree` in canonical order; the
/// coefficient mask layout used when enumerating polynomials exhaustively.
pub fn candidate_monomials(n: usize, degree: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for size in 1..=degree.min(n) {
        for combo in combinations(n as u32, size) {
            out.push(Monomial(combo));
        }
    }
    out
}

/// Lexicographic k-combinations of `0..n`.
fn combinations(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds;

    fn mono(ix: &[u32]) -> Monomial {
        Monomial::new(ix.to_vec()).unwrap()
    }

    fn poly(n: usize, monos: &[&[u32]]) -> Gf2Polynomial {
        Gf2Polynomial::new(n, monos.iter().map(|m| mono(m))).unwrap()
    }

    /// Definitional gap: plain sum over all assignments via `evaluate`.
    fn gap_by_definition(f: &Gf2Polynomial) -> i64 {
        let n = f.n();
        (0..1u64 << n)
            .map(|x| {
                let xv = BitVector::from_index(n, x);
                if f.evaluate(&xv).unwrap() {
                    -1
                } else {
                    1
                }
            })
            .sum()
    }

    #[test]
    fn evaluate_examples() {
        let f = poly(3, &[&[0, 1, 2]]);
        assert!(f.evaluate(&"111".parse().unwrap()).unwrap());
        assert!(!f.evaluate(&"110".parse().unwrap()).unwrap());
        // x0 + x0*x1 at x = 11: 1 ^ 1 = 0
        let g = poly(2, &[&[0], &[0, 1]]);
        assert!(!g.evaluate(&"11".parse().unwrap()).unwrap());
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let f = poly(3, &[&[0]]);
        assert!(f.evaluate(&"11".parse().unwrap()).is_err());
    }

    #[test]
    fn monomial_invariants() {
        assert!(Monomial::new(vec![]).is_err());
        assert!(Monomial::new(vec![1, 1]).is_err());
        assert!(Monomial::new(vec![2, 1]).is_err());
        assert!(Gf2Polynomial::new(2, vec![mono(&[0]), mono(&[0])]).is_err());
        assert!(Gf2Polynomial::new(2, vec![mono(&[5])]).is_err());
    }

    #[test]
    fn shift_examples() {
        let zero = Gf2Polynomial::zero(2).unwrap();
        let z: BitVector = "10".parse().unwrap();
        let shifted = zero.shift_by_z(&z).unwrap();
        assert_eq!(shifted, poly(2, &[&[0]]));
        // toggling twice cancels
        assert_eq!(shifted.shift_by_z(&z).unwrap(), zero);
        // existing linear coefficient cancels mod 2
        let f = poly(2, &[&[0]]);
        assert!(f.shift_by_z(&z).unwrap().is_zero());
    }

    #[test]
    fn gap_examples() {
        assert_eq!(Gf2Polynomial::zero(4).unwrap().gap().unwrap(), 16);
        for n in 1..=6 {
            let f = poly(n, &[&[0]]);
            assert_eq!(f.gap().unwrap(), 0, "linear form is balanced at n={n}");
        }
        // one satisfying assignment out of 8
        assert_eq!(poly(3, &[&[0, 1, 2]]).gap().unwrap(), 6);
    }

    #[test]
    fn gap_matches_definition_on_random_polynomials() {
        let mut rng = seeds::rng(11);
        for n in 1..=9 {
            for _ in 0..10 {
                let f = random_polynomial(n, 3.min(n), &mut rng).unwrap();
                assert_eq!(f.gap().unwrap(), gap_by_definition(&f));
            }
        }
    }

    #[test]
    fn gap_respects_enum_limit() {
        // limit defaults to 28; a 40-variable polynomial must be refused
        let f = Gf2Polynomial::zero(40).unwrap();
        assert!(matches!(f.gap(), Err(Error::Resource { .. })));
    }

    #[test]
    fn spectrum_hand_example() {
        // f = x0*x1 on two variables: gaps (2, 2, 2, -2) at z = 00,10,01,11
        let f = poly(2, &[&[0, 1]]);
        assert_eq!(f.gap_spectrum().unwrap(), vec![2, 2, 2, -2]);
    }

    #[test]
    fn spectrum_matches_per_z_gap_exhaustively() {
        let mut rng = seeds::rng(12);
        for n in [1usize, 2, 3, 5, 8, 10] {
            let f = random_polynomial(n, 3.min(n), &mut rng).unwrap();
            let spectrum = f.gap_spectrum().unwrap();
            for z in 0..1u64 << n {
                let zv = BitVector::from_index(n, z);
                assert_eq!(
                    spectrum[z as usize],
                    f.shift_by_z(&zv).unwrap().gap().unwrap(),
                    "n={n} z={z:b}"
                );
            }
        }
    }

    #[test]
    fn parseval_holds_exactly() {
        let mut rng = seeds::rng(13);
        for n in 1..=8 {
            let f = random_polynomial(n, 3.min(n), &mut rng).unwrap();
            let sum: i128 = f
                .gap_spectrum()
                .unwrap()
                .iter()
                .map(|&g| (g as i128) * (g as i128))
                .sum();
            assert_eq!(sum, 1i128 << (2 * n));
        }
    }

    #[test]
    fn random_polynomial_contract() {
        // n=3, degree 3: exactly 7 candidate slots
        assert_eq!(
            combinations(3, 1).len() + combinations(3, 2).len() + combinations(3, 3).len(),
            7
        );
        // determinism for a fixed seed
        let a = random_polynomial(6, 3, &mut seeds::rng(42)).unwrap();
        let b = random_polynomial(6, 3, &mut seeds::rng(42)).unwrap();
        assert_eq!(a, b);
        // n=1: only x0 exists
        let mut seen_zero = false;
        let mut seen_linear = false;
        for s in 0..64 {
            let f = random_polynomial(1, 3, &mut seeds::rng(s)).unwrap();
            if f.is_zero() {
                seen_zero = true;
            } else {
                assert_eq!(f, poly(1, &[&[0]]));
                seen_linear = true;
            }
        }
        assert!(seen_zero && seen_linear);
        // coefficient inclusion is unbiased: count x0 over many seeds
        let hits = (0..2000)
            .filter(|&s| {
                random_polynomial(4, 1, &mut seeds::rng(s))
                    .unwrap()
                    .contains(&mono(&[0]))
            })
            .count();
        // 3 sigma around 1000 for Bin(2000, 1/2) is about ±67
        assert!((933..=1067).contains(&hits), "hits = {hits}");
        assert!(random_polynomial(3, 4, &mut seeds::rng(0)).is_err());
        assert!(random_polynomial(3, 0, &mut seeds::rng(0)).is_err());
    }

    #[test]
    fn xor_is_pointwise() {
        let mut rng = seeds::rng(14);
        let f = random_polynomial(5, 3, &mut rng).unwrap();
        let g = random_polynomial(5, 3, &mut rng).unwrap();
        let fg = f.xor(&g).unwrap();
        for x in 0..32u64 {
            assert_eq!(fg.eval_index(x), f.eval_index(x) ^ g.eval_index(x));
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = poly(3, &[&[0], &[0, 1], &[0, 1, 2]]);
        let parsed = Gf2Polynomial::from_json(&f.to_json()).unwrap();
        assert_eq!(parsed, f);
        assert!(Gf2Polynomial::from_json(r#"{"n":2,"monomials":[[0,0]]}"#).is_err());
        assert!(Gf2Polynomial::from_json(r#"{"n":2,"monomials":[[3]]}"#).is_err());
        assert!(Gf2Polynomial::from_json(r#"{"n":2,"monomials":[[]]}"#).is_err());
        assert!(Gf2Polynomial::from_json(r#"{"n":2,"monomials":[[0],[0]]}"#).is_err());
    }
}
