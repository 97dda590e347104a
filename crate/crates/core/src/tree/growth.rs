use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use super::{AryTree, BundledForest, BundledTree, DegreeWeightFamily, FamilyKind, PlaneTree};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::rng::seeded;

/// A tree of any of the supported shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum AnyTree {
    Ary(AryTree),
    Bundled(BundledTree),
    Plane(PlaneTree),
}

impl AnyTree {
    pub fn order(&self) -> usize {
        match self {
            AnyTree::Ary(t) => t.order(),
            AnyTree::Bundled(t) => t.order(),
            AnyTree::Plane(t) => t.order(),
        }
    }

    pub fn to_plane(&self) -> PlaneTree {
        match self {
            AnyTree::Ary(t) => t.to_plane(),
            AnyTree::Bundled(t) => t.to_plane(),
            AnyTree::Plane(t) => t.clone(),
        }
    }
}

/// Attachment probability `p(v)` of each node when node `i + 1` joins a
/// tree of order `i`:
///
/// * d-ary: `(d - d(v)) / ((d-1) i + 1)`
/// * generalized plane: `(d(v) + α) / ((α+1) i - 1)`
/// * recursive: `1 / i`
pub fn attachment_probabilities(family: &DegreeWeightFamily, tree: &PlaneTree) -> Result<Vec<Rational>> {
    let i = int(tree.order() as i64);
    let degrees = (1..=tree.order() as u32).map(|v| int(tree.degree(v) as i64));
    match family.kind() {
        FamilyKind::DAry => {
            let d = int(family.arity().expect("ary") as i64);
            let den = (&d - int(1)) * &i + int(1);
            degrees
                .map(|deg| {
                    if deg > d {
                        Err(Error::DegreeNotAllowed {
                            degree: deg.to_integer().to_usize().unwrap_or(usize::MAX),
                        })
                    } else {
                        Ok((&d - deg) / &den)
                    }
                })
                .collect()
        }
        FamilyKind::GeneralizedPlane => {
            let alpha = family.alpha().expect("plane");
            let den = (&alpha + int(1)) * &i - int(1);
            Ok(degrees.map(|deg| (deg + &alpha) / &den).collect())
        }
        FamilyKind::Recursive => Ok(degrees.map(|_| int(1) / &i).collect()),
    }
}

/// Grows a random tree of order `n` from the family's evolution process.
///
/// Ary families give [`AnyTree::Ary`]; plane and recursive families give
/// [`AnyTree::Plane`] (recursive trees append each new child last).
pub fn grow_random(family: &DegreeWeightFamily, n: usize, seed: u64) -> Result<AnyTree> {
    grow_random_with(family, n, &mut seeded(seed))
}

pub fn grow_random_with<R: Rng + ?Sized>(family: &DegreeWeightFamily, n: usize, rng: &mut R) -> Result<AnyTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("trees have at least one node".into()));
    }
    Ok(match family.kind() {
        FamilyKind::DAry => AnyTree::Ary(grow_ary(family.arity().expect("ary"), n, rng)),
        FamilyKind::GeneralizedPlane => AnyTree::Plane(grow_plane(&family.alpha().expect("plane"), n, rng)?),
        FamilyKind::Recursive => {
            let mut t = PlaneTree::root();
            for i in 1..n {
                let v = rng.random_range(1..=i as u32);
                t.attach(v, t.degree(v)).expect("valid parent");
            }
            AnyTree::Plane(t)
        }
    })
}

/// Grows a `d`-ary tree one node at a time; every exterior slot is equally
/// likely to receive the next node.
#[derive(Debug, Clone)]
pub struct AryGrower {
    tree: AryTree,
    free: Vec<(u32, u32)>,
}

impl AryGrower {
    pub fn new(arity: usize) -> Self {
        let tree = AryTree::root(arity);
        let free = (1..=arity as u32).map(|s| (1, s)).collect();
        Self { tree, free }
    }

    /// Adds the next node and returns its `(parent, slot)`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (u32, u32) {
        let idx = rng.random_range(0..self.free.len());
        let (p, s) = self.free.swap_remove(idx);
        let v = self.tree.attach(p, s).expect("free slot");
        self.free.extend((1..=self.tree.arity() as u32).map(|s| (v, s)));
        (p, s)
    }

    pub fn tree(&self) -> &AryTree {
        &self.tree
    }

    pub fn into_tree(self) -> AryTree {
        self.tree
    }
}

pub fn grow_ary<R: Rng + ?Sized>(arity: usize, n: usize, rng: &mut R) -> AryTree {
    let mut g = AryGrower::new(arity);
    for _ in 1..n {
        g.step(rng);
    }
    g.into_tree()
}

/// Generalized plane growth with `p(v) ∝ d(v) + α`; the new child takes a
/// uniform position among the `d(v) + 1` places under `v`.
///
/// With `α = p/q` in lowest terms, node `v` holds `q d(v) + p` balls and a
/// uniform ball picks the parent.
pub fn grow_plane<R: Rng + ?Sized>(alpha: &Rational, n: usize, rng: &mut R) -> Result<PlaneTree> {
    if !alpha.is_positive() {
        return Err(Error::InvalidFamily(format!("α must be positive (got {alpha})")));
    }
    let (p, q) = (
        alpha.numer().to_usize().ok_or_else(|| Error::InvalidFamily("α numerator too large".into()))?,
        alpha.denom().to_usize().ok_or_else(|| Error::InvalidFamily("α denominator too large".into()))?,
    );
    let mut t = PlaneTree::root();
    let mut balls: Vec<u32> = vec![1; p];
    for _ in 1..n {
        let v = balls[rng.random_range(0..balls.len())];
        let at = rng.random_range(0..=t.degree(v));
        let c = t.attach(v, at)?;
        balls.extend(std::iter::repeat_n(v, q));
        balls.extend(std::iter::repeat_n(c, p));
    }
    Ok(t)
}

/// Grows a tree with `bundles` bundles per node: the new node takes one of
/// the `Σ (d(v) + bundles)` insertion places uniformly.
pub fn grow_bundled<R: Rng + ?Sized>(bundles: usize, n: usize, rng: &mut R) -> Result<BundledTree> {
    if bundles == 0 {
        return Err(Error::InvalidFamily("at least one bundle is needed".into()));
    }
    let mut contents: Vec<Vec<u32>> = vec![Vec::new(); bundles];
    let mut balls: Vec<u32> = vec![1; bundles];
    for i in 1..n {
        let v = balls[rng.random_range(0..balls.len())];
        let base = (v as usize - 1) * bundles;
        let deg: usize = contents[base..base + bundles].iter().map(Vec::len).sum();
        let mut gap = rng.random_range(0..deg + bundles);
        let c = i as u32 + 1;
        for b in 0..bundles {
            let list = &mut contents[base + b];
            if gap <= list.len() {
                list.insert(gap, c);
                break;
            }
            gap -= list.len() + 1;
        }
        contents.extend(std::iter::repeat_n(Vec::new(), bundles));
        balls.push(v);
        balls.extend(std::iter::repeat_n(c, bundles));
    }
    BundledTree::from_forest(BundledForest::from_contents(bundles, vec![1], contents))
}
