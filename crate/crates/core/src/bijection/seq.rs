use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{enumerate_ary, AryTree, BundledForest, BundledTree};

/// Min-rooted Cartesian tree of a sequence: `(root, left, right)` with
/// `left`/`right` indexed by label (0 for none).
fn cartesian(seq: &[u32], left: &mut [u32], right: &mut [u32]) -> u32 {
    let mut stack: Vec<u32> = Vec::with_capacity(seq.len());
    for &x in seq {
        let mut last = 0;
        while stack.last().is_some_and(|&t| t > x) {
            last = stack.pop().expect("non-empty");
        }
        left[x as usize] = last;
        if let Some(&t) = stack.last() {
            right[t as usize] = x;
        }
        stack.push(x);
    }
    stack.first().copied().unwrap_or(0)
}

/// Sequence of `k`-bundled trees to a `(k+2)`-ary tree. In every sequence
/// (the top level or one bundle) the tree with the smallest root becomes
/// the subtree root; the trees to its left go to slot 1, those to its right
/// to slot `k+2`, and its bundle `b` to slot `b+1`.
pub fn seq_bundled_to_ary(f: &BundledForest) -> Result<AryTree> {
    let k = f.bundles();
    let n = f.order();
    if n == 0 || k == 0 {
        return Err(Error::InvalidTree("need a non-empty sequence of trees with at least one bundle".into()));
    }
    let d = k + 2;
    let mut left = vec![0u32; n + 1];
    let mut right = vec![0u32; n + 1];
    let mut parent = vec![0u32; n];
    let mut slot = vec![0u32; n];
    let mut link = |root: u32, owner: u32, owner_slot: u32, left: &[u32], right: &[u32], seq: &[u32]| {
        if root != 0 && owner != 0 {
            parent[root as usize - 1] = owner;
            slot[root as usize - 1] = owner_slot;
        }
        for &x in seq {
            for (c, s) in [(left[x as usize], 1), (right[x as usize], d as u32)] {
                if c != 0 {
                    parent[c as usize - 1] = x;
                    slot[c as usize - 1] = s;
                }
            }
        }
    };
    let top = cartesian(f.roots(), &mut left, &mut right);
    link(top, 0, 0, &left, &right, f.roots());
    for u in 1..=n as u32 {
        for b in 1..=k {
            let seq = f.bundle_contents(u, b);
            let r = cartesian(seq, &mut left, &mut right);
            link(r, u, b as u32 + 1, &left, &right, seq);
        }
    }
    AryTree::new(d, parent, slot)
}

/// Inverse of [`seq_bundled_to_ary`]: slot-1 and slot-`(k+2)` edges stay
/// inside one sequence, an inner slot `s` of `u` starts bundle `s-1` of `u`;
/// positions in a sequence follow the in-order walk of its component.
pub fn ary_to_seq_bundled(t: &AryTree) -> Result<BundledForest> {
    let d = t.arity();
    if d < 3 {
        return Err(Error::InvalidTree("sequences of bundled trees correspond to arity >= 3".into()));
    }
    let n = t.order();
    let mut parent = vec![0u32; n];
    let mut bundle = vec![0u32; n];
    let mut pos = vec![0u32; n];
    let mut heads = vec![1u32];
    for c in 2..=n as u32 {
        let p = t.parent(c).expect("non-root");
        let s = t.slot(c) as usize;
        let ci = c as usize - 1;
        if s == 1 || s == d {
            parent[ci] = parent[p as usize - 1];
            bundle[ci] = bundle[p as usize - 1];
        } else {
            parent[ci] = p;
            bundle[ci] = s as u32 - 1;
            heads.push(c);
        }
    }
    let mut stack: Vec<u32> = Vec::new();
    for h in heads {
        let mut next = 1;
        let mut cur = Some(h);
        while cur.is_some() || !stack.is_empty() {
            while let Some(v) = cur {
                stack.push(v);
                cur = t.child(v, 1);
            }
            let v = stack.pop().expect("non-empty");
            pos[v as usize - 1] = next;
            next += 1;
            cur = t.child(v, d);
        }
    }
    BundledForest::new(d - 2, parent, bundle, pos)
}

/// Increasing tree whose root has `root_arity` slots and every other node
/// `root_arity + 2` slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FTree {
    root_arity: usize,
    inner: AryTree,
}

impl FTree {
    pub fn new(root_arity: usize, parent: Vec<u32>, slot: Vec<u32>) -> Result<Self> {
        if root_arity == 0 {
            return Err(Error::InvalidTree("root arity must be positive".into()));
        }
        if let Some(i) = (1..parent.len()).find(|&i| parent[i] == 1 && slot[i] as usize > root_arity) {
            return Err(Error::InvalidTree(format!(
                "node {} uses root slot {} of {root_arity}",
                i + 1,
                slot[i]
            )));
        }
        Ok(Self {
            root_arity,
            inner: AryTree::new(root_arity + 2, parent, slot)?,
        })
    }

    pub fn root_arity(&self) -> usize {
        self.root_arity
    }

    pub fn arity(&self) -> usize {
        self.root_arity + 2
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    /// Slot-level view; the root only ever uses slots `1..=root_arity`.
    pub fn as_ary(&self) -> &AryTree {
        &self.inner
    }

    /// For a root with a single slot: the subtree below the root, relabelled
    /// down by one.
    pub fn chop_root(&self) -> Result<AryTree> {
        if self.root_arity != 1 || self.order() < 2 {
            return Err(Error::InvalidTree("chopping needs a one-slot root with a child".into()));
        }
        let t = &self.inner;
        let parent = t.parents()[1..].iter().map(|&p| p.saturating_sub(1)).collect();
        let mut slot = t.slots()[1..].to_vec();
        slot[0] = 0;
        AryTree::new(self.arity(), parent, slot)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct FTreeJson {
    root_arity: usize,
    arity: usize,
    parent: Vec<u32>,
    slot: Vec<u32>,
}

impl Serialize for FTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FTreeJson {
            root_arity: self.root_arity,
            arity: self.arity(),
            parent: self.inner.parents().to_vec(),
            slot: self.inner.slots().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FTreeJson::deserialize(d)?;
        if j.arity != j.root_arity + 2 {
            return Err(serde::de::Error::custom("arity must be root arity + 2"));
        }
        FTree::new(j.root_arity, j.parent, j.slot).map_err(serde::de::Error::custom)
    }
}

/// All F-trees of order `n` whose root has `root_arity` slots, filtered
/// from the `(root_arity + 2)`-ary trees.
pub fn enumerate_ftrees(n: usize, root_arity: usize, cap: u64) -> Result<Vec<FTree>> {
    Ok(enumerate_ary(n, root_arity + 2, cap)?
        .into_iter()
        .filter(|t| t.child_slots(1)[root_arity..].iter().all(|&c| c == 0))
        .map(|t| FTree {
            root_arity,
            inner: t,
        })
        .collect())
}

/// A tree with `k` bundles to an F-tree: bundle `b` of the root, a sequence
/// of `k`-bundled trees, becomes the `(k+2)`-ary tree in root slot `b`.
pub fn ftree_from_bundled(t: &BundledTree) -> Result<FTree> {
    let ary = seq_bundled_to_ary(t.as_forest())?;
    let mut slot = ary.slots().to_vec();
    for (i, &p) in ary.parents().iter().enumerate() {
        if p == 1 {
            slot[i] -= 1;
        }
    }
    FTree::new(t.bundles(), ary.parents().to_vec(), slot)
}

pub fn bundled_from_ftree(f: &FTree) -> Result<BundledTree> {
    let t = f.as_ary();
    let mut slot = t.slots().to_vec();
    for (i, &p) in t.parents().iter().enumerate() {
        if p == 1 {
            slot[i] += 1;
        }
    }
    let ary = AryTree::new(f.arity(), t.parents().to_vec(), slot)?;
    BundledTree::from_forest(ary_to_seq_bundled(&ary)?)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::bijection::{decode_ary, encode_ary, encode_plane_recursive};
    use crate::perm::DEFAULT_ENUMERATION_CAP as CAP;
    use crate::tree::{enumerate_bundled_direct, enumerate_bundled_sequences, enumerate_plane};

    #[test]
    fn sequences_of_order_two() {
        let seqs = enumerate_bundled_sequences(2, 1, CAP).unwrap();
        let trees: HashSet<_> = seqs.iter().map(|f| seq_bundled_to_ary(f).unwrap()).collect();
        let all: HashSet<_> = enumerate_ary(2, 3, CAP).unwrap().into_iter().collect();
        assert_eq!(trees, all);
    }

    #[test]
    fn sequence_roundtrips() {
        for (k, max_n) in [(1, 5), (2, 4), (3, 4)] {
            for n in 1..=max_n {
                for f in enumerate_bundled_sequences(n, k, CAP).unwrap() {
                    assert_eq!(ary_to_seq_bundled(&seq_bundled_to_ary(&f).unwrap()).unwrap(), f);
                }
                for t in enumerate_ary(n, k + 2, CAP).unwrap() {
                    assert_eq!(seq_bundled_to_ary(&ary_to_seq_bundled(&t).unwrap()).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn ftree_roundtrips() {
        for k in 1..=2 {
            for n in 1..=5 {
                let trees = enumerate_bundled_direct(n, k, CAP).unwrap();
                let images: HashSet<_> = trees.iter().map(|t| ftree_from_bundled(t).unwrap()).collect();
                assert_eq!(images.len(), trees.len());
                for t in &trees {
                    assert_eq!(&bundled_from_ftree(&ftree_from_bundled(t).unwrap()).unwrap(), t);
                }
            }
        }
        let single = ftree_from_bundled(&BundledTree::root(2)).unwrap();
        assert_eq!(single.order(), 1);
        assert!(FTree::new(1, vec![0, 1], vec![0, 2]).is_err());
    }

    #[test]
    fn chopping_matches_the_plane_code() {
        // plane recursive trees of order n+1 against ternary trees of order n, two ways
        for n in 1..=5 {
            for t in enumerate_plane(n + 1, CAP).unwrap() {
                let chopped = ftree_from_bundled(&t.to_bundled()).unwrap().chop_root().unwrap();
                let code = encode_plane_recursive(&t);
                assert_eq!(encode_ary(&chopped).unwrap(), code);
                assert_eq!(decode_ary(&code, 2).unwrap(), chopped);
            }
        }
    }
}
