//! Generalized Stirling permutations of a multiset `{1^k_1, ..., n^k_n}`.
//!
//! A word is a generalized Stirling permutation when every symbol found
//! between two occurrences of `i` is at least `i`. Labels are `1..=n`.

mod enumerate;
mod sample;
mod stats;

pub use enumerate::{enumerate, enumerate_flavor, Enumeration, DEFAULT_ENUMERATION_CAP};
pub use sample::{sample_uniform, sample_with, StirlingGrower};
pub use stats::{block_decomposition, reflect, stat_profile, Block, BlockDecomposition, StatProfile};

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occurrence counts `(k_1, ..., k_n)`, one per label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multiplicities(Vec<u32>);

impl Multiplicities {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidMultiplicities(format!(
                "label {} has multiplicity 0",
                pos + 1
            )));
        }
        Ok(Self(counts))
    }

    /// `{1^k, ..., n^k}`.
    pub fn k_stirling(n: usize, k: u32) -> Result<Self> {
        Self::new(vec![k; n])
    }

    /// `{1^k, 2^(k+2), ..., n^(k+2)}`.
    pub fn bundled(n: usize, k: u32) -> Result<Self> {
        let mut counts = vec![k + 2; n];
        if let Some(first) = counts.first_mut() {
            *first = k;
        }
        Self::new(counts)
    }

    pub fn for_flavor(n: usize, k: u32, flavor: Flavor) -> Result<Self> {
        match flavor {
            Flavor::KStirling => Self::k_stirling(n, k),
            Flavor::Bundled => Self::bundled(n, k),
        }
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Word length `ℓ = Σ k_i`.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn of(&self, label: u32) -> u32 {
        self.0[label as usize - 1]
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl TryFrom<Vec<u32>> for Multiplicities {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Multiplicities> for Vec<u32> {
    fn from(m: Multiplicities) -> Self {
        m.0
    }
}

/// The two named families of generalized Stirling permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Flavor {
    KStirling,
    Bundled,
}

/// Checks multiplicities and the nesting property in one pass.
///
/// Open labels sit on a stack in increasing order; a repeated label must be
/// the top of that stack and a fresh label must exceed it.
pub fn validate(word: &[u32], mult: &Multiplicities) -> bool {
    check(word, mult).is_ok()
}

fn check(word: &[u32], mult: &Multiplicities) -> Result<()> {
    let n = mult.order();
    if word.len() != mult.total() {
        return Err(Error::InvalidPermutation(format!(
            "length {} but multiplicities sum to {}",
            word.len(),
            mult.total()
        )));
    }
    let mut used = vec![0u32; n + 1];
    let mut open: Vec<u32> = Vec::new();
    for (i, &a) in word.iter().enumerate() {
        if a == 0 || a as usize > n {
            return Err(Error::InvalidPermutation(format!(
                "label {a} at position {} outside 1..={n}",
                i + 1
            )));
        }
        let k = mult.of(a);
        let u = &mut used[a as usize];
        if *u == k {
            return Err(Error::InvalidPermutation(format!(
                "label {a} occurs more than {k} times"
            )));
        }
        if *u == 0 {
            if let Some(&top) = open.last() {
                if a < top {
                    return Err(Error::InvalidPermutation(format!(
                        "label {a} at position {} lies between two occurrences of {top}",
                        i + 1
                    )));
                }
            }
            open.push(a);
        } else if open.last() != Some(&a) {
            return Err(Error::InvalidPermutation(format!(
                "label {a} at position {} closes over the still open label {}",
                i + 1,
                open.last().copied().unwrap_or(0)
            )));
        }
        *u += 1;
        if *u == k {
            open.pop();
        }
    }
    Ok(())
}

/// A validated generalized Stirling permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StirlingPerm {
    word: Vec<u32>,
    mult: Multiplicities,
}

impl StirlingPerm {
    pub fn new(word: Vec<u32>, mult: Multiplicities) -> Result<Self> {
        check(&word, &mult)?;
        Ok(Self { word, mult })
    }

    pub(crate) fn new_unchecked(word: Vec<u32>, mult: Multiplicities) -> Self {
        debug_assert!(validate(&word, &mult));
        Self { word, mult }
    }

    /// Parses a word and infers multiplicities from the occurrence counts.
    /// Labels must be exactly `1..=max`.
    pub fn from_word(word: Vec<u32>) -> Result<Self> {
        let n = word.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u32; n];
        for &a in &word {
            if a == 0 {
                return Err(Error::InvalidPermutation("label 0".into()));
            }
            counts[a as usize - 1] += 1;
        }
        let mult = Multiplicities::new(counts)
            .map_err(|e| Error::InvalidPermutation(format!("labels are not contiguous: {e}")))?;
        Self::new(word, mult)
    }

    /// Compact notation, one digit per symbol (requires every label < 10).
    pub fn parse_compact(s: &str) -> Result<Self> {
        let word = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .ok_or_else(|| Error::InvalidPermutation(format!("bad symbol {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_word(word)
    }

    /// Compact notation when all labels are single digits.
    pub fn compact(&self) -> Option<String> {
        if self.mult.order() >= 10 {
            return None;
        }
        Some(self.word.iter().map(|a| char::from(b'0' + *a as u8)).collect())
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn into_word(self) -> Vec<u32> {
        self.word
    }

    pub fn multiplicities(&self) -> &Multiplicities {
        &self.mult
    }

    /// Number of distinct labels.
    pub fn order(&self) -> usize {
        self.mult.order()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Positions (0-based) of every occurrence, grouped by label.
    pub fn occurrences(&self) -> Vec<Vec<usize>> {
        let mut occ: Vec<Vec<usize>> = self
            .mult
            .as_slice()
            .iter()
            .map(|&k| Vec::with_capacity(k as usize))
            .collect();
        for (i, &a) in self.word.iter().enumerate() {
            occ[a as usize - 1].push(i);
        }
        occ
    }
}

impl fmt::Display for StirlingPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compact() {
            Some(s) => f.write_str(&s),
            None => {
                let parts: Vec<String> = self.word.iter().map(|a| a.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl Serialize for StirlingPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StirlingPerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let word = Vec::<u32>::deserialize(d)?;
        StirlingPerm::from_word(word).map_err(serde::de::Error::custom)
    }
}

/// `∏_{i=1}^{n-1} (ℓ_i + 1)` with `ℓ_i = k_1 + ... + k_i`.
pub fn count_generalized(mult: &Multiplicities) -> BigUint {
    let mut acc = BigUint::one();
    let mut prefix = 0u64;
    let counts = mult.as_slice();
    for &k in counts.iter().take(counts.len().saturating_sub(1)) {
        prefix += k as u64;
        acc *= BigUint::from(prefix + 1);
    }
    acc
}

/// `∏_{i=1}^{n-1} (k i + 1)`.
pub fn count_k_stirling(n: u64, k: u64) -> BigUint {
    (1..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(k * i + 1))
}

/// `∏_{i=1}^{n-1} (i (k+2) - 1)`.
pub fn count_bundled(n: u64, k: u64) -> BigUint {
    (1..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i * (k + 2) - 1))
}

pub fn count_flavor(n: u64, k: u64, flavor: Flavor) -> BigUint {
    match flavor {
        Flavor::KStirling => count_k_stirling(n, k),
        Flavor::Bundled => count_bundled(n, k),
    }
}
