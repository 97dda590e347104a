//! Replicated Monte Carlo experiments and their comparison with theory.
//!
//! Replicate `i` of an experiment with seed `s` draws from
//! [`replicate_stream(s, i)`](crate::rng::replicate_stream), and rows are
//! stored in replicate order, so results do not depend on the number of
//! worker threads.

mod compare;
mod registry;
mod theory;

pub use compare::{
    chi_square_gof, chi_square_homogeneity, compare, covariance_with_jackknife, ks_two_sample, ComparisonReport, CovComparison, NamedTest, StatComparison,
    TestResult,
};
pub use registry::{registry, Ctx, Observation, StatDef, StatRef};
pub use theory::{default_theory, CovEntry, Theory};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{finish_largest, stick_breaking_with};
use crate::error::{Error, Result};
use crate::perm::{block_decomposition, sample_with, stat_profile, Flavor};
use crate::rng::{replicate_stream, StreamRng};
use crate::tree::{ary_stats, grow_random_with, AnyTree, DegreeWeightFamily};
use crate::urn::{block_urn_white, nested_block_urns_with, simulate_with, UrnSpec};

/// Source of one random object per replicate. Order-`n` objects: urns run
/// `n - 1` draws from their initial state, trees have `n` nodes and
/// stick-breaking records `n` pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Generator {
    Permutation {
        #[serde(default = "default_flavor")]
        flavor: Flavor,
    },
    Urn {
        urn: UrnSpec,
    },
    BlockUrn,
    NestedUrns,
    TreeGrowth {
        family: DegreeWeightFamily,
    },
    StickBreaking,
}

fn default_flavor() -> Flavor {
    Flavor::KStirling
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSpec {
    pub generator: Generator,
    pub n: u64,
    #[serde(default = "default_k")]
    pub k: u32,
    pub replicates: u64,
    pub statistics: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<Theory>,
}

fn default_k() -> u32 {
    2
}

pub const DEFAULT_THRESHOLD: f64 = 5.0;

impl ExperimentSpec {
    pub fn validate(&self) -> Result<Vec<StatRef>> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("replicates must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.statistics.is_empty() {
            return Err(Error::InvalidArgument("no statistics requested".into()));
        }
        self.statistics.iter().map(|s| StatRef::parse(s)).collect()
    }

    pub fn ctx(&self) -> Ctx {
        Ctx { n: self.n, k: self.k }
    }
}

/// Replicates × statistics, rows in replicate order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SampleMatrix {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with a `replicate` column first; floats use Rust's shortest
    /// round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("replicate");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn observe<R: Rng + ?Sized>(spec: &ExperimentSpec, rng: &mut R) -> Result<Observation> {
    let (n, k) = (spec.n, spec.k);
    Ok(match &spec.generator {
        Generator::Permutation { flavor } => {
            let p = sample_with(n as usize, k, *flavor, rng)?;
            let blocks = block_decomposition(&p).sizes_by_label().into_iter().map(|s| s as u64).collect();
            Observation::Perm {
                profile: stat_profile(&p),
                blocks,
            }
        }
        Generator::Urn { urn } => Observation::Counts(simulate_with(urn, n - 1, rng, false)?.counts),
        Generator::BlockUrn => Observation::White(block_urn_white(k as u64, n, rng)),
        Generator::NestedUrns => Observation::Blocks(nested_block_urns_with(k as u64, n, rng)?),
        Generator::TreeGrowth { family } => match grow_random_with(family, n as usize, rng)? {
            AnyTree::Ary(t) => {
                let a = ary_stats(&t);
                Observation::Tree {
                    leaves: a.leaves,
                    ary: Some(a),
                }
            }
            other => Observation::Tree {
                ary: None,
                leaves: other.to_plane().leaves() as u64,
            },
        },
        Generator::StickBreaking => {
            let s = stick_breaking_with(k, n as usize, rng)?;
            let best = s.components.iter().copied().fold(0.0, f64::max);
            let largest = finish_largest(k, n as usize + 1, s.remainder, best, rng);
            Observation::Sticks {
                components: s.components,
                remainder: s.remainder,
                largest,
            }
        }
    })
}

/// Runs `f` once per replicate on its own stream, in parallel on the current
/// rayon pool, and returns the results in replicate order.
pub fn replicate_map<T, F>(seed: u64, replicates: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut StreamRng) -> Result<T> + Sync,
{
    (0..replicates)
        .into_par_iter()
        .map(|i| f(&mut replicate_stream(seed, i)))
        .collect()
}

/// Runs `f` on a dedicated pool with `threads` workers (`None` for rayon's
/// default).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

/// Runs every replicate on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<SampleMatrix> {
    let stats = spec.validate()?;
    let ctx = spec.ctx();
    let rows = replicate_map(spec.seed, spec.replicates, |rng| {
        let o = observe(spec, rng)?;
        stats.iter().map(|s| s.eval(&o, &ctx)).collect::<Result<Vec<f64>>>()
    })?;
    Ok(SampleMatrix {
        columns: stats.iter().map(StatRef::name).collect(),
        rows,
    })
}

/// Runs on a dedicated pool with `threads` workers (`None` for rayon's default).
pub fn run_experiment_with_threads(spec: &ExperimentSpec, threads: Option<usize>) -> Result<SampleMatrix> {
    with_threads(threads, || run_experiment(spec))
}

/// Samples, then compares against `spec.theory` or, when that is absent,
/// [`default_theory`].
pub fn run_and_compare(spec: &ExperimentSpec, threads: Option<usize>) -> Result<(SampleMatrix, ComparisonReport)> {
    let samples = run_experiment_with_threads(spec, threads)?;
    let theory = match &spec.theory {
        Some(t) => t.clone(),
        None => default_theory(spec)?,
    };
    let report = compare(&samples, &theory, spec.threshold.unwrap_or(DEFAULT_THRESHOLD))?;
    Ok((samples, report))
}
