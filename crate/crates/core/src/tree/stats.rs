use serde::Serialize;

use super::{AryTree, BundledTree};

/// Slot statistics of a `d`-ary increasing tree.
///
/// `interior[j-1]` counts nodes sitting in slot `j` of their parent and
/// `exterior[j-1]` counts empty `j`-th slots, so `exterior_j = n - interior_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeStatProfile {
    pub interior: Vec<u64>,
    pub exterior: Vec<u64>,
    pub left_right: u64,
    pub leaves: u64,
}

impl TreeStatProfile {
    /// `D_{n,j}`, 1-based.
    pub fn d(&self, j: usize) -> u64 {
        self.interior[j - 1]
    }

    /// `L_{n,j}`, 1-based.
    pub fn l(&self, j: usize) -> u64 {
        self.exterior[j - 1]
    }
}

/// A node is left-right when every step of its root path goes through the
/// first or the last slot; the root always is.
pub fn ary_stats(t: &AryTree) -> TreeStatProfile {
    let d = t.arity();
    let n = t.order();
    let mut interior = vec![0u64; d];
    let mut lr = vec![false; n];
    let mut left_right = 0;
    let mut leaves = 0;
    for v in 1..=n as u32 {
        let i = v as usize - 1;
        lr[i] = match t.parent(v) {
            None => true,
            Some(p) => {
                let s = t.slot(v) as usize;
                interior[s - 1] += 1;
                lr[p as usize - 1] && (s == 1 || s == d)
            }
        };
        left_right += lr[i] as u64;
        leaves += (t.degree(v) == 0) as u64;
    }
    let exterior = interior.iter().map(|&c| n as u64 - c).collect();
    TreeStatProfile {
        interior,
        exterior,
        left_right,
        leaves,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleStats {
    pub b_a: u64,
    pub b_d: u64,
    pub b_e: u64,
}

/// Bundle parameters:
///
/// * `B_A`: ascents inside bundles + non-empty bundles + 1 if the root's
///   first bundle is empty
/// * `B_D`: descents inside bundles + non-empty bundles + 1 if the root's
///   last bundle is empty
/// * `B_E`: empty bundles of non-root nodes + empty inner bundles of the root
pub fn bundled_stats(t: &BundledTree) -> BundleStats {
    let bundles = t.bundles();
    let mut s = BundleStats { b_a: 0, b_d: 0, b_e: 0 };
    for v in 1..=t.order() as u32 {
        for b in 1..=bundles {
            let list = t.bundle_contents(v, b);
            if list.is_empty() {
                let inner = b != 1 && b != bundles;
                if v != 1 || inner {
                    s.b_e += 1;
                }
                if v == 1 && b == 1 {
                    s.b_a += 1;
                }
                if v == 1 && b == bundles {
                    s.b_d += 1;
                }
                continue;
            }
            s.b_a += 1;
            s.b_d += 1;
            for w in list.windows(2) {
                if w[0] < w[1] {
                    s.b_a += 1;
                } else {
                    s.b_d += 1;
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_only() {
        let s = ary_stats(&AryTree::root(3));
        assert_eq!(s.interior, vec![0, 0, 0]);
        assert_eq!(s.exterior, vec![1, 1, 1]);
        assert_eq!((s.left_right, s.leaves), (1, 1));
        assert_eq!(bundled_stats(&BundledTree::root(2)), BundleStats { b_a: 1, b_d: 1, b_e: 0 });
    }

    #[test]
    fn small_ary() {
        let t = AryTree::new(3, vec![0, 1], vec![0, 1]).unwrap();
        let s = ary_stats(&t);
        assert_eq!(s.interior, vec![1, 0, 0]);
        assert_eq!(s.exterior, vec![1, 2, 2]);
        assert_eq!((s.left_right, s.leaves), (2, 1));
        let mid = AryTree::new(3, vec![0, 1, 2], vec![0, 2, 1]).unwrap();
        assert_eq!(ary_stats(&mid).left_right, 1);
    }

    #[test]
    fn small_bundled() {
        // node 2 in the first of two root bundles
        let t = BundledTree::new(2, vec![0, 1], vec![0, 1], vec![1, 1]).unwrap();
        assert_eq!(bundled_stats(&t), BundleStats { b_a: 1, b_d: 2, b_e: 2 });
        let desc = BundledTree::new(1, vec![0, 1, 1], vec![0, 1, 1], vec![1, 2, 1]).unwrap();
        assert_eq!(bundled_stats(&desc), BundleStats { b_a: 1, b_d: 2, b_e: 2 });
    }
}
