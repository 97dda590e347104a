use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;

/// Label-ordered block sizes of a random `k`-Stirling permutation of order
/// `n`, from a chain of Pólya urns.
///
/// Urn `m` holds white balls for the gaps inside block `m` and black balls
/// for the gaps after the first `m` blocks; it starts with `k-1` white and
/// `m+1` black. A black draw in urn `m` passes the insertion on to urn
/// `m+1`, which is created when the chain first reaches it. Block `m` has
/// size `white_m + 1`.
pub fn nested_block_urns(k: u64, n: u64, seed: u64) -> Result<Vec<u64>> {
    nested_block_urns_with(k, n, &mut seeded(seed))
}

pub fn nested_block_urns_with<R: Rng + ?Sized>(k: u64, n: u64, rng: &mut R) -> Result<Vec<u64>> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("need k >= 1 and n >= 1".into()));
    }
    // (white, black) per urn
    let mut urns: Vec<(u64, u64)> = vec![(k - 1, 2)];
    for _ in 1..n {
        let mut m = 0;
        loop {
            let Some(&(w, b)) = urns.get(m) else {
                urns.push((k - 1, m as u64 + 2));
                break;
            };
            if rng.random_range(0..w + b) < w {
                urns[m].0 += k;
                break;
            }
            urns[m].1 += k;
            m += 1;
        }
    }
    Ok(urns.into_iter().map(|(w, _)| w + 1).collect())
}
