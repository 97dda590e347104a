use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{count_generalized, Flavor, Multiplicities, StirlingPerm};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Lexicographic stream of all generalized Stirling permutations of a multiset.
///
/// The word is extended one symbol at a time. A prefix accepted by the
/// open-label stack rule always extends to a full permutation, so the search
/// never backtracks out of a dead branch and the work per emitted word is
/// `O(ℓ · n)`.
#[derive(Debug, Clone)]
pub struct Enumeration {
    mult: Multiplicities,
    word: Vec<u32>,
    used: Vec<u32>,
    open: Vec<u32>,
    started: bool,
    done: bool,
}

pub fn enumerate(mult: &Multiplicities, cap: u64) -> Result<Enumeration> {
    let count = count_generalized(mult);
    if count > BigUint::from(cap) {
        return Err(Error::ResourceLimit {
            count: count.to_string(),
            cap,
        });
    }
    Ok(Enumeration {
        mult: mult.clone(),
        word: Vec::with_capacity(mult.total()),
        used: vec![0; mult.order() + 1],
        open: Vec::new(),
        started: false,
        done: false,
    })
}

pub fn enumerate_flavor(n: usize, k: u32, flavor: Flavor, cap: u64) -> Result<Enumeration> {
    enumerate(&Multiplicities::for_flavor(n, k, flavor)?, cap)
}

impl Enumeration {
    /// Exact number of words the stream yields in total.
    pub fn total(&self) -> u64 {
        count_generalized(&self.mult).to_u64().unwrap_or(u64::MAX)
    }

    fn push(&mut self, a: u32) {
        let u = &mut self.used[a as usize];
        *u += 1;
        if *u == 1 {
            self.open.push(a);
        }
        if *u == self.mult.of(a) {
            self.open.pop();
        }
        self.word.push(a);
    }

    fn pop(&mut self) -> u32 {
        let a = self.word.pop().expect("pop on empty prefix");
        let k = self.mult.of(a);
        let u = &mut self.used[a as usize];
        if *u == k {
            self.open.push(a);
        }
        *u -= 1;
        if *u == 0 {
            self.open.pop();
        }
        a
    }

    fn smallest_unused_above(&self, floor: u32) -> Option<u32> {
        ((floor + 1)..=self.mult.order() as u32).find(|&b| self.used[b as usize] == 0)
    }

    /// Smallest admissible symbol strictly greater than `after` (0 = any).
    fn next_candidate(&self, after: u32) -> Option<u32> {
        match self.open.last().copied() {
            Some(top) if after < top => Some(top),
            Some(top) => self.smallest_unused_above(after.max(top)),
            None => self.smallest_unused_above(after),
        }
    }

    fn fill(&mut self) {
        while self.word.len() < self.mult.total() {
            let a = self.next_candidate(0).expect("stack-valid prefix is always extendable");
            self.push(a);
        }
    }
}

impl Iterator for Enumeration {
    type Item = StirlingPerm;

    fn next(&mut self) -> Option<StirlingPerm> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
        } else {
            loop {
                let Some(last) = (!self.word.is_empty()).then(|| self.pop()) else {
                    self.done = true;
                    return None;
                };
                if let Some(a) = self.next_candidate(last) {
                    self.push(a);
                    self.fill();
                    break;
                }
            }
        }
        Some(StirlingPerm::new_unchecked(self.word.clone(), self.mult.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::validate;
    use std::collections::BTreeSet;

    fn words(n: usize, k: u32, flavor: Flavor) -> Vec<String> {
        enumerate_flavor(n, k, flavor, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .map(|p| p.to_string())
            .collect()
    }

    /// Independent oracle: every distinct arrangement of the multiset,
    /// filtered by the nesting property.
    fn brute_force(mult: &Multiplicities) -> BTreeSet<Vec<u32>> {
        fn rec(rem: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>, mult: &Multiplicities) {
            if rem.iter().all(|&r| r == 0) {
                if validate(cur, mult) {
                    out.insert(cur.clone());
                }
                return;
            }
            for i in 0..rem.len() {
                if rem[i] > 0 {
                    rem[i] -= 1;
                    cur.push(i as u32 + 1);
                    rec(rem, cur, out, mult);
                    cur.pop();
                    rem[i] += 1;
                }
            }
        }
        let mut out = BTreeSet::new();
        rec(&mut mult.as_slice().to_vec(), &mut Vec::new(), &mut out, mult);
        out
    }

    #[test]
    fn small_listings() {
        assert_eq!(words(2, 2, Flavor::KStirling), ["1122", "1221", "2211"]);
        assert_eq!(words(2, 3, Flavor::KStirling), ["111222", "112221", "122211", "222111"]);
        assert_eq!(words(1, 2, Flavor::KStirling), ["11"]);
        assert_eq!(words(2, 1, Flavor::Bundled), ["1222", "2221"]);
    }

    #[test]
    fn matches_brute_force_filter() {
        for counts in [vec![2, 2, 2], vec![1, 3, 2], vec![3, 1, 1, 2], vec![2, 3, 3], vec![1, 2, 1, 2]] {
            let mult = Multiplicities::new(counts).unwrap();
            let listed: Vec<Vec<u32>> = enumerate(&mult, 1_000_000).unwrap().map(|p| p.into_word()).collect();
            let oracle: Vec<Vec<u32>> = brute_force(&mult).into_iter().collect();
            assert_eq!(listed, oracle);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_flavor(6, 2, Flavor::KStirling, 100).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { cap: 100, .. }));
    }

    #[test]
    fn empty_multiset_yields_one_empty_word() {
        let mult = Multiplicities::new(vec![]).unwrap();
        let all: Vec<_> = enumerate(&mult, 10).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_empty());
    }
}
