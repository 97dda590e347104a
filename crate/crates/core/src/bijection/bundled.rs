use crate::error::{Error, Result};
use crate::perm::{Multiplicities, StirlingPerm};
use crate::tree::{BundledTree, PlaneTree};

/// Contour word of a bundled tree: every proper edge is written on the way
/// down and on the way up (as the child's label) and every separation wall
/// between two bundles of `v` is written once as `v`.
fn contour(t: &BundledTree) -> Vec<u32> {
    let b = t.bundles();
    let n = t.order();
    let mut word = Vec::with_capacity((b + 1) * n);
    // (node, bundle index 0-based, next child index within the bundle)
    let mut stack: Vec<(u32, usize, usize)> = vec![(1, 0, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, bi, ci) = *top;
        let list = t.bundle_contents(v, bi + 1);
        if ci < list.len() {
            top.2 += 1;
            word.push(list[ci]);
            stack.push((list[ci], 0, 0));
            continue;
        }
        if bi + 1 < b {
            word.push(v);
            *top = (v, bi + 1, 0);
            continue;
        }
        stack.pop();
        if v != 1 {
            word.push(v);
        }
    }
    word
}

/// Code of a tree with `k+1` bundles per node, a `k`-bundled Stirling
/// permutation on `{1^k, 2^(k+2), ..., n^(k+2)}`. Needs `k >= 1`; single
/// bundle trees go through [`encode_plane_recursive`].
pub fn encode_bundled(t: &BundledTree) -> Result<StirlingPerm> {
    if t.bundles() < 2 {
        return Err(Error::InvalidTree(
            "single-bundle trees are plane recursive trees; use the plane recursive code".into(),
        ));
    }
    let mult = Multiplicities::bundled(t.order(), t.bundles() as u32 - 1)?;
    Ok(StirlingPerm::new_unchecked(contour(t), mult))
}

/// Rebuilds the tree: the occurrences of `v` other than its first and last
/// cut its run into bundles, and the top-level blocks of each bundle are
/// the subtrees hanging there.
fn rebuild(word: &[u32], n: usize, bundles: usize) -> BundledTree {
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, &a) in word.iter().enumerate() {
        occ[a as usize].push(i);
    }
    let mut parent = vec![0u32; n];
    let mut bundle = vec![0u32; n];
    let mut pos = vec![1u32; n];
    // (node, start, end) of a run still to split, end exclusive
    let mut work: Vec<(u32, usize, usize)> = vec![(1, 0, word.len())];
    while let Some((v, start, end)) = work.pop() {
        let cuts = if v == 1 {
            &occ[1][..]
        } else {
            let o = &occ[v as usize];
            &o[1..o.len() - 1]
        };
        let mut lo = start;
        for b in 0..bundles {
            let hi = cuts.get(b).copied().unwrap_or(end);
            let mut i = lo;
            let mut place = 1;
            while i < hi {
                let c = word[i];
                let o = &occ[c as usize];
                let last = o[o.len() - 1];
                let ci = c as usize - 1;
                parent[ci] = v;
                bundle[ci] = b as u32 + 1;
                pos[ci] = place;
                place += 1;
                work.push((c, i + 1, last));
                i = last + 1;
            }
            lo = hi + 1;
        }
    }
    BundledTree::new(bundles, parent, bundle, pos).expect("valid code gives a valid tree")
}

/// Inverse of [`encode_bundled`] for a `k`-bundled Stirling permutation.
pub fn decode_bundled(p: &StirlingPerm, k: u32) -> Result<BundledTree> {
    let n = p.order();
    if n == 0 || *p.multiplicities() != Multiplicities::bundled(n, k)? {
        return Err(Error::InvalidPermutation(format!(
            "{p} is not a {k}-bundled Stirling permutation"
        )));
    }
    Ok(rebuild(p.word(), n, k as usize + 1))
}

/// Code of a plane recursive tree of order `n + 1`: each non-root label is
/// written on the way down and on the way up, then all labels drop by one,
/// giving a 2-Stirling permutation of order `n`.
pub fn encode_plane_recursive(t: &PlaneTree) -> StirlingPerm {
    let word = contour(&t.to_bundled()).into_iter().map(|a| a - 1).collect();
    let mult = Multiplicities::k_stirling(t.order() - 1, 2).expect("k = 2");
    StirlingPerm::new_unchecked(word, mult)
}

/// Inverse of [`encode_plane_recursive`].
pub fn decode_plane_recursive(p: &StirlingPerm) -> Result<PlaneTree> {
    if p.multiplicities().as_slice().iter().any(|&m| m != 2) {
        return Err(Error::InvalidPermutation(format!("{p} is not a 2-Stirling permutation")));
    }
    let word: Vec<u32> = p.word().iter().map(|&a| a + 1).collect();
    let t = rebuild(&word, p.order() + 1, 1);
    Ok(t.to_plane())
}
