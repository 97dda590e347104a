use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{AnyTree, AryTree, BundledForest, BundledTree, PlaneTree};
use crate::bijection::decode_bundled;
use crate::error::{Error, Result};
use crate::perm::{count_bundled, count_k_stirling, enumerate_flavor, Flavor};

/// `Ary { k }` is the `(k+1)`-ary family, `Bundled { k }` the family with
/// `k+1` bundles per node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum TreeFlavor {
    Ary { k: u32 },
    Bundled { k: u32 },
}

fn guard(count: BigUint, cap: u64) -> Result<()> {
    match count.to_u64() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::ResourceLimit {
            count: count.to_string(),
            cap,
        }),
    }
}

fn need_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("trees have at least one node".into()))
    } else {
        Ok(())
    }
}

pub fn enumerate_trees(n: usize, flavor: TreeFlavor, cap: u64) -> Result<Vec<AnyTree>> {
    Ok(match flavor {
        TreeFlavor::Ary { k } => enumerate_ary(n, k as usize + 1, cap)?.into_iter().map(AnyTree::Ary).collect(),
        TreeFlavor::Bundled { k } => enumerate_bundled(n, k as usize + 1, cap)?
            .into_iter()
            .map(AnyTree::Bundled)
            .collect(),
    })
}

/// All `arity`-ary increasing trees of order `n`, by inserting each new
/// node into every exterior slot in (parent, slot) order.
pub fn enumerate_ary(n: usize, arity: usize, cap: u64) -> Result<Vec<AryTree>> {
    need_order(n)?;
    if arity == 0 {
        return Err(Error::InvalidTree("arity must be positive".into()));
    }
    guard(count_k_stirling(n as u64, arity as u64 - 1), cap)?;
    let mut out = Vec::new();
    let mut parent = vec![0u32];
    let mut slot = vec![0u32];
    let mut used = vec![false; n * arity];
    ary_rec(n, arity, &mut parent, &mut slot, &mut used, &mut out);
    Ok(out)
}

fn ary_rec(n: usize, arity: usize, parent: &mut Vec<u32>, slot: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<AryTree>) {
    let i = parent.len();
    if i == n {
        out.push(AryTree::new(arity, parent.clone(), slot.clone()).expect("valid by construction"));
        return;
    }
    for cell in 0..i * arity {
        if used[cell] {
            continue;
        }
        used[cell] = true;
        parent.push((cell / arity) as u32 + 1);
        slot.push((cell % arity) as u32 + 1);
        ary_rec(n, arity, parent, slot, used, out);
        parent.pop();
        slot.pop();
        used[cell] = false;
    }
}

/// All bundled increasing trees with `bundles` bundles per node.
///
/// With two or more bundles the trees are decoded from the enumerated
/// bundled Stirling permutations, so both listings agree in order; one
/// bundle (plane recursive trees) uses direct insertion.
pub fn enumerate_bundled(n: usize, bundles: usize, cap: u64) -> Result<Vec<BundledTree>> {
    need_order(n)?;
    if bundles < 2 {
        return enumerate_bundled_direct(n, bundles, cap);
    }
    let k = bundles as u32 - 1;
    enumerate_flavor(n, k, Flavor::Bundled, cap)?
        .map(|p| decode_bundled(&p, k))
        .collect()
}

/// Bundled trees by direct insertion of each new node into every place of
/// every bundle.
pub fn enumerate_bundled_direct(n: usize, bundles: usize, cap: u64) -> Result<Vec<BundledTree>> {
    need_order(n)?;
    if bundles == 0 {
        return Err(Error::InvalidTree("at least one bundle is needed".into()));
    }
    guard(count_bundled(n as u64, bundles as u64 - 1), cap)?;
    let mut out = Vec::new();
    let mut st = ForestState {
        bundles,
        n,
        roots: vec![1],
        contents: vec![Vec::new(); bundles],
        forest: false,
    };
    st.rec(2, &mut |f| out.push(BundledTree::from_forest(f).expect("single root")));
    Ok(out)
}

/// Ordered sequences of bundled trees whose label sets partition `1..=n`.
pub fn enumerate_bundled_sequences(n: usize, bundles: usize, cap: u64) -> Result<Vec<BundledForest>> {
    if bundles == 0 {
        return Err(Error::InvalidTree("at least one bundle is needed".into()));
    }
    guard(count_k_stirling(n as u64, bundles as u64 + 1), cap)?;
    let mut out = Vec::new();
    let mut st = ForestState {
        bundles,
        n,
        roots: Vec::new(),
        contents: Vec::new(),
        forest: true,
    };
    st.rec(1, &mut |f| out.push(f));
    Ok(out)
}

/// Increasing plane trees of order `n` (children ordered, any degree).
pub fn enumerate_plane(n: usize, cap: u64) -> Result<Vec<PlaneTree>> {
    Ok(enumerate_bundled_direct(n, 1, cap)?.iter().map(BundledTree::to_plane).collect())
}

struct ForestState {
    bundles: usize,
    n: usize,
    roots: Vec<u32>,
    contents: Vec<Vec<u32>>,
    forest: bool,
}

impl ForestState {
    fn rec(&mut self, c: u32, emit: &mut dyn FnMut(BundledForest)) {
        if c as usize > self.n {
            emit(BundledForest::from_contents(self.bundles, self.roots.clone(), self.contents.clone()));
            return;
        }
        self.contents.extend(std::iter::repeat_n(Vec::new(), self.bundles));
        if self.forest {
            for at in 0..=self.roots.len() {
                self.roots.insert(at, c);
                self.rec(c + 1, emit);
                self.roots.remove(at);
            }
        }
        for cell in 0..(c as usize - 1) * self.bundles {
            for at in 0..=self.contents[cell].len() {
                self.contents[cell].insert(at, c);
                self.rec(c + 1, emit);
                self.contents[cell].remove(at);
            }
        }
        self.contents.truncate(self.contents.len() - self.bundles);
    }
}
