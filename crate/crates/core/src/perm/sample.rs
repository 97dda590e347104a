use rand::Rng;

use super::{Flavor, Multiplicities, StirlingPerm};
use crate::error::{Error, Result};
use crate::rng;

/// Grows a random generalized Stirling permutation by gap insertion.
///
/// Label `i` is inserted as a run of copies into one of the `ℓ + 1` gaps of
/// the current word, each gap equally likely. Gaps are addressed by the
/// element they follow (or the front), not by position, so an insertion is
/// `O(copies)` on a linked list. Every prefix permutation has the same number
/// of gaps, hence the result is uniform at every order along one trajectory.
#[derive(Debug, Clone)]
pub struct StirlingGrower {
    flavor: Option<(Flavor, u32)>,
    counts: Vec<u32>,
    // next[0] is the head sentinel; element ids are 1..=len, 0 terminates.
    next: Vec<u32>,
    labels: Vec<u32>,
}

impl StirlingGrower {
    pub fn new(flavor: Flavor, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMultiplicities("k must be at least 1".into()));
        }
        Ok(Self {
            flavor: Some((flavor, k)),
            ..Self::generalized()
        })
    }

    /// Grower with caller-chosen multiplicities (see [`Self::grow_step_with`]).
    pub fn generalized() -> Self {
        Self {
            flavor: None,
            counts: Vec::new(),
            next: vec![0],
            labels: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inserts the next label with the flavor's multiplicity.
    pub fn grow_step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let (flavor, k) = self.flavor.expect("grow_step needs a flavored grower");
        let copies = match (flavor, self.order()) {
            (Flavor::Bundled, n) if n > 0 => k + 2,
            _ => k,
        };
        self.grow_step_with(rng, copies);
    }

    /// Inserts the next label with `copies` occurrences; returns the chosen gap id.
    pub fn grow_step_with<R: Rng + ?Sized>(&mut self, rng: &mut R, copies: u32) -> usize {
        assert!(copies > 0, "a label needs at least one occurrence");
        let label = self.order() as u32 + 1;
        let gap = rng.random_range(0..=self.len());
        let after = self.next[gap];
        let mut prev = gap;
        for _ in 0..copies {
            let id = self.labels.len();
            self.labels.push(label);
            self.next.push(0);
            self.next[prev] = id as u32;
            prev = id;
        }
        self.next[prev] = after;
        self.counts.push(copies);
        gap
    }

    pub fn word(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.next[0];
        while cur != 0 {
            out.push(self.labels[cur as usize]);
            cur = self.next[cur as usize];
        }
        out
    }

    pub fn to_perm(&self) -> StirlingPerm {
        let mult = Multiplicities::new(self.counts.clone()).expect("positive copies");
        StirlingPerm::new_unchecked(self.word(), mult)
    }
}

/// Uniform random permutation of the flavor, deterministic in `seed`.
pub fn sample_uniform(n: usize, k: u32, flavor: Flavor, seed: u64) -> Result<StirlingPerm> {
    let mut rng = rng::seeded(seed);
    sample_with(n, k, flavor, &mut rng)
}

pub fn sample_with<R: Rng + ?Sized>(n: usize, k: u32, flavor: Flavor, rng: &mut R) -> Result<StirlingPerm> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let mut grower = StirlingGrower::new(flavor, k)?;
    for _ in 0..n {
        grower.grow_step(rng);
    }
    Ok(grower.to_perm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::validate;
    use std::collections::HashMap;

    #[test]
    fn order_one_is_constant() {
        for seed in 0..5 {
            let p = sample_uniform(1, 4, Flavor::KStirling, seed).unwrap();
            assert_eq!(p.word(), &[1, 1, 1, 1]);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = sample_uniform(30, 3, Flavor::KStirling, 99).unwrap();
        let b = sample_uniform(30, 3, Flavor::KStirling, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_uniform(30, 3, Flavor::KStirling, 100).unwrap());
    }

    #[test]
    fn samples_are_valid() {
        for seed in 0..50 {
            for flavor in [Flavor::KStirling, Flavor::Bundled] {
                let p = sample_uniform(12, 2, flavor, seed).unwrap();
                assert!(validate(p.word(), p.multiplicities()));
            }
        }
    }

    #[test]
    fn bundled_order_two_is_fair() {
        let mut rng = rng::seeded(5);
        let mut freq: HashMap<String, u32> = HashMap::new();
        let runs = 20_000;
        for _ in 0..runs {
            let p = sample_with(2, 1, Flavor::Bundled, &mut rng).unwrap();
            *freq.entry(p.to_string()).or_default() += 1;
        }
        assert_eq!(freq.len(), 2);
        for c in freq.values() {
            let f = *c as f64 / runs as f64;
            assert!((f - 0.5).abs() < 0.02, "{freq:?}");
        }
    }
}
