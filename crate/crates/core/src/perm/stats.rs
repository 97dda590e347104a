use serde::{Deserialize, Serialize};

use super::StirlingPerm;

/// Refined and total ascent / descent / plateau counts.
///
/// `j_ascents[j-1]` is the number of `j`-ascents, likewise for descents;
/// `j_plateaux[j-1]` for `1 <= j <= max k_i - 1`. Totals use the sentinels
/// `a_0 = a_{ℓ+1} = 0` and range over indices `0..=ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StatProfile {
    pub j_ascents: Vec<u64>,
    pub j_descents: Vec<u64>,
    pub j_plateaux: Vec<u64>,
    pub ascents: u64,
    pub descents: u64,
    pub plateaux: u64,
}

impl StatProfile {
    pub fn j_ascent(&self, j: usize) -> u64 {
        self.j_ascents.get(j.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn j_descent(&self, j: usize) -> u64 {
        self.j_descents.get(j.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn j_plateau(&self, j: usize) -> u64 {
        self.j_plateaux.get(j.wrapping_sub(1)).copied().unwrap_or(0)
    }
}

pub fn stat_profile(p: &StirlingPerm) -> StatProfile {
    let word = p.word();
    let kmax = p.multiplicities().max() as usize;
    let mut prof = StatProfile {
        j_ascents: vec![0; kmax],
        j_descents: vec![0; kmax],
        j_plateaux: vec![0; kmax.saturating_sub(1)],
        ascents: 0,
        descents: 0,
        plateaux: 0,
    };
    if word.is_empty() {
        // the single index 0 compares a_0 = 0 with a_1 = 0
        prof.plateaux = 1;
        return prof;
    }
    // occurrence rank (1-based) of each position
    let mut seen = vec![0u32; p.order() + 1];
    let rank: Vec<usize> = word
        .iter()
        .map(|&a| {
            seen[a as usize] += 1;
            seen[a as usize] as usize
        })
        .collect();
    prof.ascents = 1;
    prof.descents = 1;
    let last = word.len() - 1;
    for i in 0..last {
        let (a, b) = (word[i], word[i + 1]);
        if a < b {
            prof.ascents += 1;
            prof.j_ascents[rank[i] - 1] += 1;
        } else if a > b {
            prof.descents += 1;
            prof.j_descents[rank[i + 1] - 1] += 1;
        } else {
            prof.plateaux += 1;
            prof.j_plateaux[rank[i] - 1] += 1;
        }
    }
    prof
}

/// One block: a maximal substring that starts and ends with `label`.
/// `start`/`end` are 0-based inclusive positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub label: u32,
    pub start: usize,
    pub end: usize,
}

impl Block {
    pub fn size(&self) -> usize {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockDecomposition {
    /// Blocks in left-to-right order.
    pub blocks: Vec<Block>,
    /// Blocks ordered by their label.
    pub blocks_by_label: Vec<Block>,
    pub sizes_descending: Vec<usize>,
}

impl BlockDecomposition {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes ordered by block label.
    pub fn sizes_by_label(&self) -> Vec<usize> {
        self.blocks_by_label.iter().map(Block::size).collect()
    }
}

pub fn block_decomposition(p: &StirlingPerm) -> BlockDecomposition {
    let blocks = top_level_blocks(p.word(), 0, p.len(), &last_occurrences(p));
    let mut blocks_by_label = blocks.clone();
    blocks_by_label.sort_by_key(|b| b.label);
    let mut sizes_descending: Vec<usize> = blocks.iter().map(Block::size).collect();
    sizes_descending.sort_unstable_by(|a, b| b.cmp(a));
    BlockDecomposition {
        blocks,
        blocks_by_label,
        sizes_descending,
    }
}

pub(crate) fn last_occurrences(p: &StirlingPerm) -> Vec<usize> {
    let mut last = vec![0usize; p.order() + 1];
    for (i, &a) in p.word().iter().enumerate() {
        last[a as usize] = i;
    }
    last
}

/// Blocks of `word[start..end]`, assuming that range is a concatenation of
/// blocks; jumps from each block head straight to the last occurrence of its
/// label.
pub(crate) fn top_level_blocks(word: &[u32], start: usize, end: usize, last: &[usize]) -> Vec<Block> {
    let mut out = Vec::new();
    let mut i = start;
    while i < end {
        let label = word[i];
        let j = last[label as usize];
        debug_assert!(j >= i && j < end);
        out.push(Block { label, start: i, end: j });
        i = j + 1;
    }
    out
}

/// Reverses the word; `j`-ascents become `(k+1-j)`-descents.
pub fn reflect(p: &StirlingPerm) -> StirlingPerm {
    let mut word = p.word().to_vec();
    word.reverse();
    StirlingPerm::new_unchecked(word, p.multiplicities().clone())
}
