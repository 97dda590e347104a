//! Urn processes behind the statistics of Stirling permutations.
//!
//! * symmetric urn with `q` colours: draw a ball, discard it, add one ball
//!   of every colour (the exterior slots of a random `q`-ary tree)
//! * fixed addition: draw and discard, then add `s_i` balls of colour `i`
//! * triangular block urn, colours `[black, white]`: a black draw adds `k`
//!   black balls, a white draw adds `k-1` black and one white; started from
//!   `(k-1, 2)` the white count is one more than the number of blocks
//! * Pólya urn, colours `[white, black]`: the drawn ball goes back with `k`
//!   more of its colour

mod covariance;
mod nested;

pub use covariance::{fixed_addition_covariance, urn_a_covariance, LimitCovariance};
pub use nested::{nested_block_urns, nested_block_urns_with};

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum UrnKind {
    SymmetricA { q: usize },
    FixedAddition { s: Vec<u64> },
    TriangularB { k: u64 },
    PolyaC { k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrnSpec {
    pub kind: UrnKind,
    pub init: Vec<u64>,
}

impl UrnSpec {
    pub fn new(kind: UrnKind, init: Vec<u64>) -> Result<Self> {
        let spec = Self { kind, init };
        spec.check()?;
        Ok(spec)
    }

    /// `q` colours, one ball each.
    pub fn symmetric_a(q: usize) -> Result<Self> {
        Self::new(UrnKind::SymmetricA { q }, vec![1; q])
    }

    pub fn fixed_addition(s: Vec<u64>, init: Vec<u64>) -> Result<Self> {
        Self::new(UrnKind::FixedAddition { s }, init)
    }

    /// Block urn started at `(black, white) = (k-1, 2)`.
    pub fn triangular_b(k: u64) -> Result<Self> {
        Self::new(UrnKind::TriangularB { k }, vec![k.saturating_sub(1), 2])
    }

    pub fn polya_c(k: u64, white: u64, black: u64) -> Result<Self> {
        Self::new(UrnKind::PolyaC { k }, vec![white, black])
    }

    pub fn colours(&self) -> usize {
        match &self.kind {
            UrnKind::SymmetricA { q } => *q,
            UrnKind::FixedAddition { s } => s.len(),
            UrnKind::TriangularB { .. } | UrnKind::PolyaC { .. } => 2,
        }
    }

    fn check(&self) -> Result<()> {
        match &self.kind {
            UrnKind::SymmetricA { q } if *q < 1 => return Err(Error::InvalidUrn("need at least one colour".into())),
            UrnKind::FixedAddition { s } if s.is_empty() => {
                return Err(Error::InvalidUrn("need at least one colour".into()))
            }
            UrnKind::TriangularB { k } | UrnKind::PolyaC { k } if *k == 0 => {
                return Err(Error::InvalidUrn("k must be positive".into()))
            }
            _ => {}
        }
        if self.init.len() != self.colours() {
            return Err(Error::InvalidUrn(format!(
                "{} initial counts for {} colours",
                self.init.len(),
                self.colours()
            )));
        }
        if self.init.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidUrn("the urn starts empty".into()));
        }
        Ok(())
    }

    /// Counts after drawing colour `c` from `counts`.
    pub fn apply(&self, counts: &mut [u64], c: usize) {
        match &self.kind {
            UrnKind::SymmetricA { .. } => {
                counts.iter_mut().for_each(|x| *x += 1);
                counts[c] -= 1;
            }
            UrnKind::FixedAddition { s } => {
                counts[c] -= 1;
                counts.iter_mut().zip(s).for_each(|(x, add)| *x += add);
            }
            UrnKind::TriangularB { k } => {
                if c == 0 {
                    counts[0] += k;
                } else {
                    counts[0] += k - 1;
                    counts[1] += 1;
                }
            }
            UrnKind::PolyaC { k } => counts[c] += k,
        }
    }

    /// Draws one ball (uniformly) and updates `counts`; returns the colour.
    /// Panics if the urn is empty.
    pub fn step<R: Rng + ?Sized>(&self, counts: &mut [u64], rng: &mut R) -> usize {
        let total: u64 = counts.iter().sum();
        let mut r = rng.random_range(0..total);
        let mut c = 0;
        while r >= counts[c] {
            r -= counts[c];
            c += 1;
        }
        self.apply(counts, c);
        c
    }

    /// Exact one-step kernel: every possible next state with its probability.
    /// Colours with no balls are skipped.
    pub fn transition(&self, counts: &[u64]) -> Vec<(Rational, Vec<u64>)> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Vec::new();
        }
        counts
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(c, &x)| {
                let mut next = counts.to_vec();
                self.apply(&mut next, c);
                (int(x as i64) / int(total as i64), next)
            })
            .collect()
    }

    /// `E[counts after one step | counts]`, exactly.
    pub fn expected_next(&self, counts: &[u64]) -> Vec<Rational> {
        let mut mean = vec![Rational::zero(); counts.len()];
        for (p, next) in self.transition(counts) {
            for (m, x) in mean.iter_mut().zip(next) {
                *m += &p * int(x as i64);
            }
        }
        mean
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UrnTrajectory {
    pub steps: u64,
    pub counts: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Counts after each step, starting with the initial state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<Vec<u64>>>,
}

pub fn simulate(spec: &UrnSpec, steps: u64, seed: u64) -> Result<UrnTrajectory> {
    let mut t = simulate_with(spec, steps, &mut seeded(seed), false)?;
    t.seed = Some(seed);
    Ok(t)
}

pub fn simulate_with<R: Rng + ?Sized>(spec: &UrnSpec, steps: u64, rng: &mut R, record_path: bool) -> Result<UrnTrajectory> {
    spec.check()?;
    let mut counts = spec.init.clone();
    let mut path = record_path.then(|| vec![counts.clone()]);
    for _ in 0..steps {
        if counts.iter().all(|&x| x == 0) {
            return Err(Error::InvalidUrn("the urn ran empty".into()));
        }
        spec.step(&mut counts, rng);
        if let Some(p) = path.as_mut() {
            p.push(counts.clone());
        }
    }
    Ok(UrnTrajectory {
        steps,
        counts,
        seed: None,
        path,
    })
}

/// White count of the block urn after `n - 1` steps (order `n`), with an
/// O(1) draw per step.
pub fn block_urn_white<R: Rng + ?Sized>(k: u64, n: u64, rng: &mut R) -> u64 {
    let mut white = 2u64;
    let mut total = k + 1;
    for _ in 1..n {
        if rng.random_range(0..total) >= total - white {
            white += 1;
        }
        total += k;
    }
    white
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn spec_checks() {
        assert!(UrnSpec::new(UrnKind::SymmetricA { q: 3 }, vec![1, 1]).is_err());
        assert!(UrnSpec::new(UrnKind::PolyaC { k: 2 }, vec![0, 0]).is_err());
        assert!(UrnSpec::triangular_b(0).is_err());
        assert_eq!(UrnSpec::triangular_b(3).unwrap().init, vec![2, 2]);
    }

    #[test]
    fn zero_steps() {
        let t = simulate(&UrnSpec::symmetric_a(3).unwrap(), 0, 1).unwrap();
        assert_eq!(t.counts, vec![1, 1, 1]);
    }

    #[test]
    fn totals_are_deterministic() {
        let mut rng = seeded(4);
        let a = simulate_with(&UrnSpec::symmetric_a(4).unwrap(), 100, &mut rng, true).unwrap();
        assert_eq!(a.counts.iter().sum::<u64>(), 4 + 3 * 100);
        assert_eq!(a.path.as_ref().unwrap().len(), 101);
        let b = simulate_with(&UrnSpec::triangular_b(3).unwrap(), 99, &mut rng, false).unwrap();
        assert_eq!(b.counts.iter().sum::<u64>(), 3 * 100 + 1);
        let c = simulate_with(&UrnSpec::polya_c(2, 1, 2).unwrap(), 50, &mut rng, false).unwrap();
        assert_eq!(c.counts.iter().sum::<u64>(), 3 + 100);
        let f = simulate_with(&UrnSpec::fixed_addition(vec![1, 1, 1], vec![1, 1, 1]).unwrap(), 50, &mut rng, false)
            .unwrap();
        assert_eq!(f.counts.iter().sum::<u64>(), 3 + 100);
    }

    #[test]
    fn block_urn_kernel() {
        let spec = UrnSpec::triangular_b(2).unwrap();
        let next = spec.transition(&spec.init);
        assert_eq!(next, vec![(frac(1, 3), vec![3, 2]), (frac(2, 3), vec![2, 3])]);
        for n in 1..30u64 {
            for w in 2..=(n + 1).min(50) {
                let total = 2 * n + 1;
                let mean = spec.expected_next(&[total - w, w]);
                assert_eq!(mean[1], int(w as i64) * int(2 * n as i64 + 2) / int(2 * n as i64 + 1));
            }
        }
    }

    #[test]
    fn fast_block_urn_agrees() {
        let spec = UrnSpec::triangular_b(3).unwrap();
        let mut a = seeded(9);
        let mut b = seeded(9);
        for n in [1, 2, 10, 200] {
            let slow = simulate_with(&spec, n - 1, &mut a, false).unwrap();
            assert_eq!(block_urn_white(3, n, &mut b), slow.counts[1]);
        }
    }
}
