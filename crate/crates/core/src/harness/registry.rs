use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::StatProfile;
use crate::tree::TreeStatProfile;

/// One replicate's raw outcome, before statistics are read off it.
#[derive(Debug, Clone)]
pub enum Observation {
    Perm { profile: StatProfile, blocks: Vec<u64> },
    Counts(Vec<u64>),
    White(u64),
    Blocks(Vec<u64>),
    Tree { ary: Option<TreeStatProfile>, leaves: u64 },
    Sticks { components: Vec<f64>, remainder: f64, largest: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub n: u64,
    pub k: u32,
}

impl Ctx {
    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn kf(&self) -> f64 {
        self.k as f64
    }
}

type Eval = fn(&Observation, &Ctx, usize) -> Option<f64>;

/// A named statistic. Indexed statistics are written `name.j` with `j >= 1`.
#[derive(Clone, Copy, Serialize)]
pub struct StatDef {
    pub name: &'static str,
    pub indexed: bool,
    pub help: &'static str,
    #[serde(skip)]
    eval: Eval,
}

fn blocks_of(o: &Observation) -> Option<Vec<u64>> {
    match o {
        Observation::Perm { blocks, .. } | Observation::Blocks(blocks) => Some(blocks.clone()),
        _ => None,
    }
}

fn block_count(o: &Observation) -> Option<f64> {
    match o {
        Observation::Perm { blocks, .. } | Observation::Blocks(blocks) => Some(blocks.len() as f64),
        Observation::White(w) => Some(*w as f64 - 1.0),
        Observation::Tree { ary: Some(a), .. } => Some(a.left_right as f64),
        _ => None,
    }
}

fn profile(o: &Observation) -> Option<&StatProfile> {
    match o {
        Observation::Perm { profile, .. } => Some(profile),
        _ => None,
    }
}

fn ary(o: &Observation) -> Option<&TreeStatProfile> {
    match o {
        Observation::Tree { ary: Some(a), .. } => Some(a),
        _ => None,
    }
}

fn scaled(x: f64, rate: f64, c: &Ctx) -> f64 {
    (x - rate * c.nf()) / c.nf().sqrt()
}

static STATS: &[StatDef] = &[
    StatDef {
        name: "ascents",
        indexed: false,
        help: "number of ascents X_n",
        eval: |o, _, _| profile(o).map(|p| p.ascents as f64),
    },
    StatDef {
        name: "descents",
        indexed: false,
        help: "number of descents Y_n",
        eval: |o, _, _| profile(o).map(|p| p.descents as f64),
    },
    StatDef {
        name: "plateaux",
        indexed: false,
        help: "number of plateaux Z_n",
        eval: |o, _, _| profile(o).map(|p| p.plateaux as f64),
    },
    StatDef {
        name: "jAscents",
        indexed: true,
        help: "number of j-ascents X_{n,j}",
        eval: |o, _, j| profile(o).map(|p| p.j_ascent(j) as f64),
    },
    StatDef {
        name: "jDescents",
        indexed: true,
        help: "number of j-descents Y_{n,j}",
        eval: |o, _, j| profile(o).map(|p| p.j_descent(j) as f64),
    },
    StatDef {
        name: "jPlateaux",
        indexed: true,
        help: "number of j-plateaux Z_{n,j}",
        eval: |o, _, j| profile(o).map(|p| p.j_plateau(j) as f64),
    },
    StatDef {
        name: "xi",
        indexed: false,
        help: "(X_n - k n/(k+1)) / sqrt(n)",
        eval: |o, c, _| profile(o).map(|p| scaled(p.ascents as f64, c.kf() / (c.kf() + 1.0), c)),
    },
    StatDef {
        name: "eta",
        indexed: false,
        help: "(Y_n - k n/(k+1)) / sqrt(n)",
        eval: |o, c, _| profile(o).map(|p| scaled(p.descents as f64, c.kf() / (c.kf() + 1.0), c)),
    },
    StatDef {
        name: "zeta",
        indexed: false,
        help: "(Z_n - k(k-1) n/(k+1)) / sqrt(n)",
        eval: |o, c, _| {
            profile(o).map(|p| scaled(p.plateaux as f64, c.kf() * (c.kf() - 1.0) / (c.kf() + 1.0), c))
        },
    },
    StatDef {
        name: "blocks",
        indexed: false,
        help: "number of blocks S_n (left-right nodes for ary trees, white - 1 for the block urn)",
        eval: |o, _, _| block_count(o),
    },
    StatDef {
        name: "blocksScaled",
        indexed: false,
        help: "n^(-1/k) S_n",
        eval: |o, c, _| block_count(o).map(|s| s / c.nf().powf(1.0 / c.kf())),
    },
    StatDef {
        name: "block",
        indexed: true,
        help: "size of the j-th block in label order (0 when absent)",
        eval: |o, _, j| blocks_of(o).map(|b| b.get(j - 1).copied().unwrap_or(0) as f64),
    },
    StatDef {
        name: "blockFraction",
        indexed: true,
        help: "size of the j-th block in label order divided by k n",
        eval: |o, c, j| blocks_of(o).map(|b| b.get(j - 1).copied().unwrap_or(0) as f64 / (c.kf() * c.nf())),
    },
    StatDef {
        name: "largestBlockFraction",
        indexed: false,
        help: "largest block size divided by k n",
        eval: |o, c, _| blocks_of(o).map(|b| b.iter().copied().max().unwrap_or(0) as f64 / (c.kf() * c.nf())),
    },
    StatDef {
        name: "count",
        indexed: true,
        help: "balls of colour j in the urn",
        eval: |o, _, j| match o {
            Observation::Counts(c) => c.get(j - 1).map(|&x| x as f64),
            _ => None,
        },
    },
    StatDef {
        name: "white",
        indexed: false,
        help: "white balls in the block urn",
        eval: |o, _, _| match o {
            Observation::White(w) => Some(*w as f64),
            _ => None,
        },
    },
    StatDef {
        name: "leaves",
        indexed: false,
        help: "leaves of the grown tree",
        eval: |o, _, _| match o {
            Observation::Tree { leaves, .. } => Some(*leaves as f64),
            _ => None,
        },
    },
    StatDef {
        name: "leftRight",
        indexed: false,
        help: "left-right nodes of a grown ary tree",
        eval: |o, _, _| ary(o).map(|a| a.left_right as f64),
    },
    StatDef {
        name: "exterior",
        indexed: true,
        help: "exterior j-th slots L_{n,j} of a grown ary tree",
        eval: |o, _, j| ary(o).and_then(|a| a.exterior.get(j - 1).map(|&x| x as f64)),
    },
    StatDef {
        name: "interior",
        indexed: true,
        help: "nodes in slot j, D_{n,j}, of a grown ary tree",
        eval: |o, _, j| ary(o).and_then(|a| a.interior.get(j - 1).map(|&x| x as f64)),
    },
    StatDef {
        name: "exteriorScaled",
        indexed: true,
        help: "(L_{n,j} - k n/(k+1)) / sqrt(n) for a grown (k+1)-ary tree",
        eval: |o, c, j| {
            ary(o).and_then(|a| {
                let k = a.exterior.len() as f64 - 1.0;
                a.exterior.get(j - 1).map(|&x| scaled(x as f64, k / (k + 1.0), c))
            })
        },
    },
    StatDef {
        name: "stick",
        indexed: true,
        help: "j-th stick-breaking piece",
        eval: |o, _, j| match o {
            Observation::Sticks { components, .. } => components.get(j - 1).copied(),
            _ => None,
        },
    },
    StatDef {
        name: "remainder",
        indexed: false,
        help: "unallocated stick after the recorded pieces",
        eval: |o, _, _| match o {
            Observation::Sticks { remainder, .. } => Some(*remainder),
            _ => None,
        },
    },
    StatDef {
        name: "largestStick",
        indexed: false,
        help: "largest stick-breaking piece",
        eval: |o, _, _| match o {
            Observation::Sticks { largest, .. } => Some(*largest),
            _ => None,
        },
    },
];

pub fn registry() -> &'static [StatDef] {
    STATS
}

/// A parsed statistic name.
#[derive(Clone, Copy)]
pub struct StatRef {
    def: &'static StatDef,
    index: usize,
}

impl StatRef {
    pub fn parse(name: &str) -> Result<Self> {
        let (base, index) = match name.split_once('.') {
            Some((b, j)) => {
                let j: usize = j.parse().map_err(|_| Error::UnknownStatistic(name.to_string()))?;
                (b, Some(j))
            }
            None => (name, None),
        };
        let def = STATS
            .iter()
            .find(|d| d.name == base)
            .ok_or_else(|| Error::UnknownStatistic(name.to_string()))?;
        match (def.indexed, index) {
            (true, Some(j)) if j >= 1 => Ok(Self { def, index: j }),
            (false, None) => Ok(Self { def, index: 0 }),
            _ => Err(Error::UnknownStatistic(format!(
                "{name} ({} {} an index)",
                def.name,
                if def.indexed { "needs" } else { "takes no" }
            ))),
        }
    }

    pub fn base(&self) -> &'static str {
        self.def.name
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn eval(&self, o: &Observation, c: &Ctx) -> Result<f64> {
        (self.def.eval)(o, c, self.index).ok_or_else(|| {
            Error::UnknownStatistic(format!("{} is not defined for this generator or index", self.name()))
        })
    }

    pub fn name(&self) -> String {
        if self.def.indexed {
            format!("{}.{}", self.def.name, self.index)
        } else {
            self.def.name.to_string()
        }
    }
}
