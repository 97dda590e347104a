use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

use super::{
    ary_to_seq_bundled, bundled_from_ftree, decode_ary, decode_bundled, decode_plane_recursive, encode_ary,
    encode_bundled, encode_plane_recursive, enumerate_ftrees, ftree_from_bundled, seq_bundled_to_ary,
};
use crate::error::Result;
use crate::perm::{enumerate_flavor, stat_profile, Flavor};
use crate::tree::{
    ary_stats, bundled_stats, enumerate_ary, enumerate_bundled_direct, enumerate_bundled_sequences, enumerate_plane,
};

const MAX_COUNTEREXAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub order: usize,
    pub object: String,
    pub detail: String,
}

/// Outcome of an exhaustive check over all orders `1..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub max_n: usize,
    pub k: u32,
    pub checks: Vec<Check>,
    pub counterexamples: Vec<Counterexample>,
}

impl TransferReport {
    pub(crate) fn new(max_n: usize, k: u32) -> Self {
        Self {
            max_n,
            k,
            checks: Vec::new(),
            counterexamples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn merge(&mut self, other: TransferReport) {
        self.checks.extend(other.checks);
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(c);
            }
        }
    }

    fn check(&mut self, name: &str) -> usize {
        if let Some(i) = self.checks.iter().position(|c| c.name == name) {
            return i;
        }
        self.checks.push(Check {
            name: name.to_string(),
            cases: 0,
            failures: 0,
        });
        self.checks.len() - 1
    }

    pub(crate) fn record(&mut self, name: &str, order: usize, ok: bool, object: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        let i = self.check(name);
        self.checks[i].cases += 1;
        if !ok {
            self.checks[i].failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample {
                    check: name.to_string(),
                    order,
                    object: object(),
                    detail: detail(),
                });
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// Compares code statistics with tree statistics on every `(k+1)`-ary tree
/// and every `(k+1)`-bundled tree of order at most `max_n`:
///
/// * `X_j = D_{j+1}`, `Y_j = D_j`, `Z_j = L_{j+1}`, `X = L_1`, `Y = L_{k+1}`,
///   `Z = L_2 + ... + L_k`, blocks = left-right nodes
/// * `(B_A, B_D, B_E) = (X, Y, Z)` for bundled codes
pub fn verify_stat_transfer(max_n: usize, k: u32, cap: u64) -> Result<TransferReport> {
    let mut rep = TransferReport::new(max_n, k);
    let ku = k as usize;
    for n in 1..=max_n {
        for t in enumerate_ary(n, ku + 1, cap)? {
            let code = encode_ary(&t)?;
            let p = stat_profile(&code);
            let s = ary_stats(&t);
            let blocks = crate::perm::block_decomposition(&code).count() as u64;
            let mut pairs: Vec<(String, u64, u64)> = Vec::new();
            for j in 1..=ku {
                pairs.push((format!("X_{j} = D_{}", j + 1), p.j_ascent(j), s.d(j + 1)));
                pairs.push((format!("Y_{j} = D_{j}"), p.j_descent(j), s.d(j)));
            }
            for j in 1..ku {
                pairs.push((format!("Z_{j} = L_{}", j + 1), p.j_plateau(j), s.l(j + 1)));
            }
            pairs.push(("X = L_1".into(), p.ascents, s.l(1)));
            pairs.push((format!("Y = L_{}", ku + 1), p.descents, s.l(ku + 1)));
            pairs.push(("Z = L_2 + ... + L_k".into(), p.plateaux, (2..=ku).map(|j| s.l(j)).sum()));
            pairs.push(("S = LR".into(), blocks, s.left_right));
            for (name, from_code, from_tree) in pairs {
                rep.record(
                    &format!("ary: {name}"),
                    n,
                    from_code == from_tree,
                    || code.to_string(),
                    || format!("code gives {from_code}, tree gives {from_tree}"),
                );
            }
        }
        if k >= 1 {
            for t in enumerate_bundled_direct(n, ku + 1, cap)? {
                let code = encode_bundled(&t)?;
                let p = stat_profile(&code);
                let b = bundled_stats(&t);
                let got = (p.ascents, p.descents, p.plateaux);
                let want = (b.b_a, b.b_d, b.b_e);
                rep.record(
                    "bundled: (B_A, B_D, B_E) = (X, Y, Z)",
                    n,
                    got == want,
                    || code.to_string(),
                    || format!("code gives {got:?}, tree gives {want:?}"),
                );
            }
        }
    }
    Ok(rep)
}

fn roundtrip<A, B, FA, FB>(
    rep: &mut TransferReport,
    name: &str,
    n: usize,
    left: Vec<A>,
    right: Vec<B>,
    to: FA,
    from: FB,
) -> Result<()>
where
    A: Eq + Hash + Serialize,
    B: Eq + Hash + Serialize,
    FA: Fn(&A) -> Result<B>,
    FB: Fn(&B) -> Result<A>,
{
    let mut images = HashSet::new();
    for a in &left {
        let b = to(a)?;
        let back = from(&b)?;
        rep.record(name, n, back == *a, || json(a), || format!("maps to {} and back to {}", json(&b), json(&back)));
        images.insert(b);
    }
    let count_ok = images.len() == left.len() && left.len() == right.len();
    rep.record(
        name,
        n,
        count_ok,
        || format!("order {n}"),
        || format!("{} objects, {} distinct images, {} targets", left.len(), images.len(), right.len()),
    );
    for b in &right {
        let a = from(b)?;
        let back = to(&a)?;
        rep.record(name, n, back == *b, || json(b), || format!("maps to {} and back to {}", json(&a), json(&back)));
    }
    Ok(())
}

/// Exhaustive roundtrip and injectivity checks for every codec, over all
/// orders `1..=max_n`:
///
/// * `(k+1)`-ary trees and `k`-Stirling permutations
/// * `(k+1)`-bundled trees and `k`-bundled Stirling permutations
/// * sequences of `k`-bundled trees and `(k+2)`-ary trees
/// * `k`-bundled trees and F-trees
/// * for `k = 2`, plane recursive trees of order `n + 1` and 2-Stirling
///   permutations of order `n`
pub fn verify_codecs(max_n: usize, k: u32, cap: u64) -> Result<TransferReport> {
    let mut rep = TransferReport::new(max_n, k);
    let ku = k as usize;
    for n in 1..=max_n {
        let perms: Vec<_> = enumerate_flavor(n, k, Flavor::KStirling, cap)?.collect();
        roundtrip(&mut rep, "ary", n, enumerate_ary(n, ku + 1, cap)?, perms, encode_ary, |p| decode_ary(p, k))?;
        let bperms: Vec<_> = enumerate_flavor(n, k, Flavor::Bundled, cap)?.collect();
        roundtrip(
            &mut rep,
            "bundled",
            n,
            enumerate_bundled_direct(n, ku + 1, cap)?,
            bperms,
            encode_bundled,
            |p| decode_bundled(p, k),
        )?;
        roundtrip(
            &mut rep,
            "seq",
            n,
            enumerate_bundled_sequences(n, ku, cap)?,
            enumerate_ary(n, ku + 2, cap)?,
            seq_bundled_to_ary,
            ary_to_seq_bundled,
        )?;
        let trees = enumerate_bundled_direct(n, ku, cap)?;
        let ftrees = enumerate_ftrees(n, ku, cap)?;
        roundtrip(&mut rep, "ftree", n, trees, ftrees, ftree_from_bundled, bundled_from_ftree)?;
        if k == 2 {
            let perms: Vec<_> = enumerate_flavor(n, 2, Flavor::KStirling, cap)?.collect();
            roundtrip(
                &mut rep,
                "plane",
                n,
                enumerate_plane(n + 1, cap)?,
                perms,
                |t| Ok(encode_plane_recursive(t)),
                decode_plane_recursive,
            )?;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_ENUMERATION_CAP as CAP;

    #[test]
    fn small_cases_pass() {
        for (n, k) in [(4, 1), (4, 2), (3, 3)] {
            let rep = verify_stat_transfer(n, k, CAP).unwrap();
            assert!(rep.passed(), "{:?}", rep.counterexamples);
            let rep = verify_codecs(n, k, CAP).unwrap();
            assert!(rep.passed(), "{:?}", rep.counterexamples);
        }
    }

    #[test]
    fn order_one() {
        let rep = verify_stat_transfer(1, 2, CAP).unwrap();
        assert!(rep.passed());
        assert!(rep.checks.iter().all(|c| c.cases == 1));
    }
}
