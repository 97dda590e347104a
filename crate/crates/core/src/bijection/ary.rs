use crate::error::{Error, Result};
use crate::perm::{Multiplicities, StirlingPerm};
use crate::tree::AryTree;

/// Depth-first contour code of a `(k+1)`-ary tree: walking around the tree,
/// label `v` is written each time the walk comes back to `v` between two
/// consecutive slots. The result is a `k`-Stirling permutation of order `n`.
pub fn encode_ary(t: &AryTree) -> Result<StirlingPerm> {
    let d = t.arity();
    if d < 2 {
        return Err(Error::InvalidTree("contour codes need arity at least 2".into()));
    }
    let n = t.order();
    let mut word = Vec::with_capacity(n * (d - 1));
    // (node, slots already walked)
    let mut stack: Vec<(u32, usize)> = vec![(1, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, s) = *top;
        if s == d {
            stack.pop();
            continue;
        }
        if s > 0 {
            word.push(v);
        }
        top.1 += 1;
        if let Some(c) = t.child(v, s + 1) {
            stack.push((c, 0));
        }
    }
    let mult = Multiplicities::k_stirling(n, d as u32 - 1)?;
    Ok(StirlingPerm::new_unchecked(word, mult))
}

/// Inverse of [`encode_ary`].
///
/// The subtree of `v` is a contiguous run of labels `>= v`. The nearest
/// smaller entries just outside that run are an occurrence of the parent
/// and something smaller than the parent, so the parent is the larger of
/// the two, and the rank of the left one fixes the slot.
pub fn decode_ary(p: &StirlingPerm, k: u32) -> Result<AryTree> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if p.multiplicities().as_slice().iter().any(|&m| m != k) || p.order() == 0 {
        return Err(Error::InvalidPermutation(format!(
            "{p} is not a {k}-Stirling permutation of positive order"
        )));
    }
    let word = p.word();
    let n = p.order();
    let len = word.len();
    let mut rank = vec![0u32; len];
    let mut seen = vec![0u32; n + 1];
    let mut first = vec![usize::MAX; n + 1];
    let mut last = vec![0usize; n + 1];
    for (i, &a) in word.iter().enumerate() {
        seen[a as usize] += 1;
        rank[i] = seen[a as usize];
        if first[a as usize] == usize::MAX {
            first[a as usize] = i;
        }
        last[a as usize] = i;
    }
    let none = usize::MAX;
    let mut left = vec![none; len];
    let mut right = vec![none; len];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..len {
        while stack.last().is_some_and(|&j| word[j] >= word[i]) {
            stack.pop();
        }
        left[i] = stack.last().copied().unwrap_or(none);
        stack.push(i);
    }
    stack.clear();
    for i in (0..len).rev() {
        while stack.last().is_some_and(|&j| word[j] >= word[i]) {
            stack.pop();
        }
        right[i] = stack.last().copied().unwrap_or(none);
        stack.push(i);
    }
    let label = |pos: usize| if pos == none { 0 } else { word[pos] };
    let mut parent = vec![0u32; n];
    let mut slot = vec![0u32; n];
    for v in 2..=n {
        let l = left[first[v]];
        let r = right[last[v]];
        let pv = label(l).max(label(r));
        parent[v - 1] = pv;
        slot[v - 1] = if l != none && word[l] == pv { rank[l] + 1 } else { 1 };
    }
    AryTree::new(k as usize + 1, parent, slot)
}
