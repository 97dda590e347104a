//! Increasing trees: positional `d`-ary trees, bundled trees (each node has
//! a fixed number of ordered bundles, each bundle an ordered sequence of
//! subtrees) and generalized plane trees with ordered children.
//!
//! All trees are stored as parent arrays indexed by label; label 1 is the
//! root, and parents always carry smaller labels. Empty slots are implicit.

mod enumerate;
mod family;
mod growth;
mod stats;

pub use enumerate::{
    enumerate_ary, enumerate_bundled, enumerate_bundled_direct, enumerate_bundled_sequences, enumerate_plane,
    enumerate_trees,
    TreeFlavor,
};
pub use family::{tree_weight, DegreeWeightFamily, FamilyKind, Weighted};
pub use growth::{
    attachment_probabilities, grow_ary, grow_bundled, grow_plane, grow_random, grow_random_with, AnyTree,
    AryGrower,
};
pub use stats::{ary_stats, bundled_stats, BundleStats, TreeStatProfile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_parents(parent: &[u32]) -> Result<()> {
    if parent.is_empty() {
        return Err(Error::InvalidTree("a tree needs at least the root".into()));
    }
    for (i, &p) in parent.iter().enumerate() {
        let v = i as u32 + 1;
        if v > 1 && (p == 0 || p >= v) {
            return Err(Error::InvalidTree(format!(
                "node {v} has parent {p}; parents must carry smaller labels"
            )));
        }
    }
    Ok(())
}

/// A `d`-ary increasing tree: every node has `d` ordered child slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AryTree {
    arity: usize,
    parent: Vec<u32>,
    slot: Vec<u32>,
    // children[(v-1)*arity + (s-1)], 0 when the slot is exterior
    children: Vec<u32>,
}

impl AryTree {
    /// Builds a tree from 1-based parent labels and 1-based slots; the root
    /// entry is `(0, 0)`.
    pub fn new(arity: usize, parent: Vec<u32>, slot: Vec<u32>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidTree("arity must be positive".into()));
        }
        if parent.len() != slot.len() {
            return Err(Error::InvalidTree("parent and slot lengths differ".into()));
        }
        if parent.first() == Some(&0) && slot[0] != 0 {
            return Err(Error::InvalidTree("the root has no slot".into()));
        }
        if parent.first().is_some_and(|&p| p != 0) {
            return Err(Error::InvalidTree("node 1 must be the root".into()));
        }
        check_parents(&parent)?;
        let mut children = vec![0u32; parent.len() * arity];
        for i in 1..parent.len() {
            let (p, s) = (parent[i] as usize, slot[i] as usize);
            if s == 0 || s > arity {
                return Err(Error::InvalidTree(format!("node {} uses slot {s} of {arity}", i + 1)));
            }
            let cell = &mut children[(p - 1) * arity + s - 1];
            if *cell != 0 {
                return Err(Error::InvalidTree(format!(
                    "slot {s} of node {p} holds both {} and {}",
                    *cell,
                    i + 1
                )));
            }
            *cell = i as u32 + 1;
        }
        Ok(Self {
            arity,
            parent,
            slot,
            children,
        })
    }

    pub fn root(arity: usize) -> Self {
        Self::new(arity, vec![0], vec![0]).expect("positive arity")
    }

    /// Attaches node `n + 1` at `slot` (1-based) of `parent`.
    pub fn attach(&mut self, parent: u32, slot: u32) -> Result<u32> {
        let n = self.order() as u32;
        if parent == 0 || parent > n || slot == 0 || slot as usize > self.arity {
            return Err(Error::InvalidTree(format!("no slot {slot} at node {parent}")));
        }
        let idx = (parent as usize - 1) * self.arity + slot as usize - 1;
        if self.children[idx] != 0 {
            return Err(Error::InvalidTree(format!("slot {slot} of node {parent} is occupied")));
        }
        let v = n + 1;
        self.children[idx] = v;
        self.children.extend(std::iter::repeat_n(0, self.arity));
        self.parent.push(parent);
        self.slot.push(slot);
        Ok(v)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        Some(self.parent[v as usize - 1]).filter(|&p| p != 0)
    }

    /// 1-based slot of `v` under its parent (0 for the root).
    pub fn slot(&self, v: u32) -> u32 {
        self.slot[v as usize - 1]
    }

    /// Child in slot `s` (1-based) of `v`.
    pub fn child(&self, v: u32, s: usize) -> Option<u32> {
        Some(self.children[(v as usize - 1) * self.arity + s - 1]).filter(|&c| c != 0)
    }

    pub fn child_slots(&self, v: u32) -> &[u32] {
        let base = (v as usize - 1) * self.arity;
        &self.children[base..base + self.arity]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.child_slots(v).iter().filter(|&&c| c != 0).count()
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    pub fn slots(&self) -> &[u32] {
        &self.slot
    }

    /// Forgets slot positions, keeping the left-to-right order of children.
    pub fn to_plane(&self) -> PlaneTree {
        let kids = (1..=self.order() as u32)
            .map(|v| self.child_slots(v).iter().copied().filter(|&c| c != 0).collect())
            .collect();
        PlaneTree::from_children(kids)
    }
}

#[derive(Serialize, Deserialize)]
struct AryTreeJson {
    arity: usize,
    parent: Vec<u32>,
    slot: Vec<u32>,
}

impl Serialize for AryTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AryTreeJson {
            arity: self.arity,
            parent: self.parent.clone(),
            slot: self.slot.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AryTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AryTreeJson::deserialize(d)?;
        AryTree::new(j.arity, j.parent, j.slot).map_err(serde::de::Error::custom)
    }
}

/// An ordered sequence of bundled increasing trees on labels `1..=n`.
///
/// Each node has `bundles` ordered bundles. Top-level trees have parent 0,
/// bundle 0 and their 1-based place in the sequence as position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BundledForest {
    bundles: usize,
    parent: Vec<u32>,
    bundle: Vec<u32>,
    pos: Vec<u32>,
    roots: Vec<u32>,
    // contents[(v-1)*bundles + (b-1)] lists the subtree roots of bundle b of v
    contents: Vec<Vec<u32>>,
}

impl BundledForest {
    pub fn new(bundles: usize, parent: Vec<u32>, bundle: Vec<u32>, pos: Vec<u32>) -> Result<Self> {
        let n = parent.len();
        if bundle.len() != n || pos.len() != n {
            return Err(Error::InvalidTree("parent, bundle and position lengths differ".into()));
        }
        let mut roots_at: Vec<(u32, u32)> = Vec::new();
        let mut contents: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n * bundles];
        for i in 0..n {
            let v = i as u32 + 1;
            let (p, b) = (parent[i], bundle[i] as usize);
            if p == 0 {
                if b != 0 {
                    return Err(Error::InvalidTree(format!("top-level node {v} names bundle {b}")));
                }
                roots_at.push((pos[i], v));
                continue;
            }
            if p >= v {
                return Err(Error::InvalidTree(format!(
                    "node {v} has parent {p}; parents must carry smaller labels"
                )));
            }
            if b == 0 || b > bundles {
                return Err(Error::InvalidTree(format!("node {v} uses bundle {b} of {bundles}")));
            }
            contents[(p as usize - 1) * bundles + b - 1].push((pos[i], v));
        }
        let sort_check = |list: &mut Vec<(u32, u32)>, what: &str| -> Result<Vec<u32>> {
            list.sort_unstable();
            for (i, &(p, v)) in list.iter().enumerate() {
                if p as usize != i + 1 {
                    return Err(Error::InvalidTree(format!(
                        "positions in {what} are not 1..={} (node {v} at {p})",
                        list.len()
                    )));
                }
            }
            Ok(list.iter().map(|&(_, v)| v).collect())
        };
        let roots = sort_check(&mut roots_at, "the top-level sequence")?;
        let contents = contents
            .iter_mut()
            .map(|c| sort_check(c, "a bundle"))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            bundles,
            parent,
            bundle,
            pos,
            roots,
            contents,
        })
    }

    pub(crate) fn from_contents(bundles: usize, roots: Vec<u32>, contents: Vec<Vec<u32>>) -> Self {
        let n = contents.len() / bundles.max(1);
        let n = if bundles == 0 { roots.len() } else { n };
        let mut parent = vec![0u32; n];
        let mut bundle = vec![0u32; n];
        let mut pos = vec![0u32; n];
        for (i, &r) in roots.iter().enumerate() {
            pos[r as usize - 1] = i as u32 + 1;
        }
        for (cell, list) in contents.iter().enumerate() {
            let (v, b) = (cell / bundles + 1, cell % bundles + 1);
            for (i, &c) in list.iter().enumerate() {
                parent[c as usize - 1] = v as u32;
                bundle[c as usize - 1] = b as u32;
                pos[c as usize - 1] = i as u32 + 1;
            }
        }
        Self {
            bundles,
            parent,
            bundle,
            pos,
            roots,
            contents,
        }
    }

    /// Concatenates trees given on their own labels `1..=m`, each paired
    /// with the sorted global labels it occupies.
    pub fn from_sequence(trees: &[(Vec<u32>, BundledTree)]) -> Result<Self> {
        let n: usize = trees.iter().map(|(labels, _)| labels.len()).sum();
        let bundles = trees.first().map(|(_, t)| t.bundles()).unwrap_or(0);
        let mut seen = vec![false; n + 1];
        let mut parent = vec![0u32; n];
        let mut bundle = vec![0u32; n];
        let mut pos = vec![0u32; n];
        for (idx, (labels, tree)) in trees.iter().enumerate() {
            if tree.bundles() != bundles {
                return Err(Error::InvalidTree("trees in a sequence must share a bundle count".into()));
            }
            if labels.len() != tree.order() {
                return Err(Error::NotAPartition {
                    n,
                    detail: format!("tree {} has {} nodes but {} labels", idx + 1, tree.order(), labels.len()),
                });
            }
            if labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotAPartition {
                    n,
                    detail: format!("labels of tree {} are not increasing", idx + 1),
                });
            }
            for (local, &g) in labels.iter().enumerate() {
                if g == 0 || g as usize > n || seen[g as usize] {
                    return Err(Error::NotAPartition {
                        n,
                        detail: format!("label {g} is out of range or repeated"),
                    });
                }
                seen[g as usize] = true;
                let f = tree.as_forest();
                let gi = g as usize - 1;
                match f.parent[local] {
                    0 => {
                        pos[gi] = idx as u32 + 1;
                    }
                    p => {
                        parent[gi] = labels[p as usize - 1];
                        bundle[gi] = f.bundle[local];
                        pos[gi] = f.pos[local];
                    }
                }
            }
        }
        Self::new(bundles, parent, bundle, pos)
    }

    pub fn bundles(&self) -> usize {
        self.bundles
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    /// Top-level roots in sequence order.
    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    /// Subtree roots of bundle `b` (1-based) of `v`, left to right.
    pub fn bundle_contents(&self, v: u32, b: usize) -> &[u32] {
        &self.contents[(v as usize - 1) * self.bundles + b - 1]
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        Some(self.parent[v as usize - 1]).filter(|&p| p != 0)
    }

    pub fn bundle_of(&self, v: u32) -> u32 {
        self.bundle[v as usize - 1]
    }

    pub fn position(&self, v: u32) -> u32 {
        self.pos[v as usize - 1]
    }

    pub fn degree(&self, v: u32) -> usize {
        (1..=self.bundles).map(|b| self.bundle_contents(v, b).len()).sum()
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    pub fn bundle_indices(&self) -> &[u32] {
        &self.bundle
    }

    pub fn positions(&self) -> &[u32] {
        &self.pos
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BundledJson {
    bundle_count: usize,
    parent: Vec<u32>,
    bundle: Vec<u32>,
    pos_in_bundle: Vec<u32>,
}

impl Serialize for BundledForest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BundledJson {
            bundle_count: self.bundles,
            parent: self.parent.clone(),
            bundle: self.bundle.clone(),
            pos_in_bundle: self.pos.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BundledForest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BundledJson::deserialize(d)?;
        BundledForest::new(j.bundle_count, j.parent, j.bundle, j.pos_in_bundle).map_err(serde::de::Error::custom)
    }
}

/// A single bundled increasing tree: a forest whose only top-level node is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BundledTree(BundledForest);

impl BundledTree {
    pub fn new(bundles: usize, parent: Vec<u32>, bundle: Vec<u32>, pos: Vec<u32>) -> Result<Self> {
        Self::from_forest(BundledForest::new(bundles, parent, bundle, pos)?)
    }

    pub fn from_forest(f: BundledForest) -> Result<Self> {
        if f.roots != [1] {
            return Err(Error::InvalidTree(format!(
                "a bundled tree has exactly one root, node 1 (got roots {:?})",
                f.roots
            )));
        }
        Ok(Self(f))
    }

    pub fn root(bundles: usize) -> Self {
        Self::new(bundles, vec![0], vec![0], vec![1]).expect("single root")
    }

    pub fn as_forest(&self) -> &BundledForest {
        &self.0
    }

    pub fn into_forest(self) -> BundledForest {
        self.0
    }

    pub fn bundles(&self) -> usize {
        self.0.bundles
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn bundle_contents(&self, v: u32, b: usize) -> &[u32] {
        self.0.bundle_contents(v, b)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.0.degree(v)
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        self.0.parent(v)
    }

    /// Concatenates the bundles of every node into one ordered child list.
    pub fn to_plane(&self) -> PlaneTree {
        let kids = (1..=self.order() as u32)
            .map(|v| (1..=self.bundles()).flat_map(|b| self.bundle_contents(v, b).iter().copied()).collect())
            .collect();
        PlaneTree::from_children(kids)
    }
}

impl<'de> Deserialize<'de> for BundledTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = BundledForest::deserialize(d)?;
        BundledTree::from_forest(f).map_err(serde::de::Error::custom)
    }
}

/// Increasing plane tree: children ordered, no fixed slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    parent: Vec<u32>,
    kids: Vec<Vec<u32>>,
}

impl PlaneTree {
    pub fn root() -> Self {
        Self {
            parent: vec![0],
            kids: vec![Vec::new()],
        }
    }

    /// `position` is the 1-based index of each node among its siblings.
    pub fn new(parent: Vec<u32>, position: Vec<u32>) -> Result<Self> {
        if parent.len() != position.len() {
            return Err(Error::InvalidTree("parent and position lengths differ".into()));
        }
        if parent.first().is_some_and(|&p| p != 0) {
            return Err(Error::InvalidTree("node 1 must be the root".into()));
        }
        check_parents(&parent)?;
        let mut slots: Vec<Vec<(u32, u32)>> = vec![Vec::new(); parent.len()];
        for i in 1..parent.len() {
            slots[parent[i] as usize - 1].push((position[i], i as u32 + 1));
        }
        let mut kids = Vec::with_capacity(parent.len());
        for mut list in slots {
            list.sort_unstable();
            if list.iter().enumerate().any(|(i, &(p, _))| p as usize != i + 1) {
                return Err(Error::InvalidTree("sibling positions must be 1..=degree".into()));
            }
            kids.push(list.into_iter().map(|(_, v)| v).collect());
        }
        Ok(Self { parent, kids })
    }

    pub(crate) fn from_children(kids: Vec<Vec<u32>>) -> Self {
        let mut parent = vec![0u32; kids.len()];
        for (i, list) in kids.iter().enumerate() {
            for &c in list {
                parent[c as usize - 1] = i as u32 + 1;
            }
        }
        Self { parent, kids }
    }

    /// Inserts node `n + 1` as child of `parent` at 0-based `index`.
    pub fn attach(&mut self, parent: u32, index: usize) -> Result<u32> {
        let n = self.order() as u32;
        if parent == 0 || parent > n || index > self.kids[parent as usize - 1].len() {
            return Err(Error::InvalidTree(format!("cannot insert at {index} under {parent}")));
        }
        let v = n + 1;
        self.kids[parent as usize - 1].insert(index, v);
        self.kids.push(Vec::new());
        self.parent.push(parent);
        Ok(v)
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        Some(self.parent[v as usize - 1]).filter(|&p| p != 0)
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.kids[v as usize - 1]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.kids[v as usize - 1].len()
    }

    pub fn leaves(&self) -> usize {
        self.kids.iter().filter(|k| k.is_empty()).count()
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    pub fn positions(&self) -> Vec<u32> {
        let mut pos = vec![0u32; self.order()];
        for list in &self.kids {
            for (i, &c) in list.iter().enumerate() {
                pos[c as usize - 1] = i as u32 + 1;
            }
        }
        pos
    }

    /// Views a plane tree as a 1-bundled tree.
    pub fn to_bundled(&self) -> BundledTree {
        BundledTree(BundledForest::from_contents(1, vec![1], self.kids.clone()))
    }
}

#[derive(Serialize, Deserialize)]
struct PlaneJson {
    parent: Vec<u32>,
    position: Vec<u32>,
}

impl Serialize for PlaneTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlaneJson {
            parent: self.parent.clone(),
            position: self.positions(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PlaneJson::deserialize(d)?;
        PlaneTree::new(j.parent, j.position).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ary_construction_errors() {
        assert!(AryTree::new(3, vec![0, 1, 1], vec![0, 2, 2]).is_err());
        assert!(AryTree::new(3, vec![0, 2], vec![0, 1]).is_err());
        assert!(AryTree::new(3, vec![0, 1], vec![0, 4]).is_err());
        assert!(AryTree::new(3, vec![1], vec![0]).is_err());
        let t = AryTree::new(3, vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        assert_eq!(t.child(1, 1), Some(2));
        assert_eq!(t.child(2, 2), Some(3));
        assert_eq!(t.child(1, 3), None);
        assert_eq!(t.degree(1), 1);
    }

    #[test]
    fn attach_matches_new() {
        let mut t = AryTree::root(3);
        t.attach(1, 3).unwrap();
        t.attach(2, 1).unwrap();
        assert!(t.attach(1, 3).is_err());
        assert_eq!(t, AryTree::new(3, vec![0, 1, 2], vec![0, 3, 1]).unwrap());
    }

    #[test]
    fn bundled_validation() {
        // node 3 placed at position 2 with nothing at position 1
        assert!(BundledTree::new(2, vec![0, 1, 1], vec![0, 1, 2], vec![1, 1, 2]).is_err());
        // two roots is a forest, not a tree
        let f = BundledForest::new(2, vec![0, 0], vec![0, 0], vec![2, 1]).unwrap();
        assert_eq!(f.roots(), &[2, 1]);
        assert!(BundledTree::from_forest(f).is_err());
        let t = BundledTree::new(2, vec![0, 1, 1], vec![0, 1, 1], vec![1, 2, 1]).unwrap();
        assert_eq!(t.bundle_contents(1, 1), &[3, 2]);
        assert_eq!(t.bundle_contents(1, 2), &[] as &[u32]);
    }

    #[test]
    fn sequence_assembly() {
        let single = BundledTree::root(1);
        let pair = BundledTree::new(1, vec![0, 1], vec![0, 1], vec![1, 1]).unwrap();
        let f = BundledForest::from_sequence(&[(vec![2], single.clone()), (vec![1, 3], pair.clone())]).unwrap();
        assert_eq!(f.roots(), &[2, 1]);
        assert_eq!(f.bundle_contents(1, 1), &[3]);
        let err = BundledForest::from_sequence(&[(vec![1], single.clone()), (vec![1, 3], pair)]).unwrap_err();
        assert!(matches!(err, Error::NotAPartition { .. }));
        assert!(BundledForest::from_sequence(&[(vec![2], single)]).is_err());
    }

    #[test]
    fn json_shapes() {
        let t = AryTree::new(3, vec![0, 1], vec![0, 1]).unwrap();
        let plane = t.to_plane();
        assert_eq!(plane.children(1), &[2]);
        let b = plane.to_bundled();
        assert_eq!(b.bundle_contents(1, 1), &[2]);
        assert_eq!(b.as_forest().positions(), &[1, 1]);
    }
}
