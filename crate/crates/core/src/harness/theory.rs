use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExperimentSpec, Generator};
use crate::dist::{block_binomial_moment_f64, tnormal_covariance};
use crate::error::Result;
use crate::perm::Flavor;
use crate::rational::to_f64;
use crate::tree::FamilyKind;
use crate::urn::{fixed_addition_covariance, urn_a_covariance, UrnKind, UrnSpec};

/// Reference values for an experiment: means by statistic name and
/// covariances by pair of names. Entries for statistics that were not
/// sampled are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    #[serde(default)]
    pub means: BTreeMap<String, f64>,
    #[serde(default)]
    pub covariances: Vec<CovEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovEntry {
    pub a: String,
    pub b: String,
    pub value: f64,
}

impl Theory {
    pub fn mean(&self, name: &str) -> Option<f64> {
        self.means.get(name).copied()
    }

    pub fn covariance(&self, a: &str, b: &str) -> Option<f64> {
        self.covariances
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map(|e| e.value)
    }

    fn set_mean(&mut self, name: impl Into<String>, v: f64) {
        self.means.insert(name.into(), v);
    }

    fn set_cov(&mut self, a: impl Into<String>, b: impl Into<String>, value: f64) {
        self.covariances.push(CovEntry {
            a: a.into(),
            b: b.into(),
            value,
        });
    }

    fn set_cov_block(&mut self, names: &[String], m: &[Vec<f64>]) {
        for i in 0..names.len() {
            for j in i..names.len() {
                self.set_cov(names[i].clone(), names[j].clone(), m[i][j]);
            }
        }
    }
}

/// Mean of the `m`-th stick-breaking piece, `(k-1)/(k+m) ∏_{i<m} (i+1)/(k+i)`.
fn stick_mean(k: f64, m: usize) -> f64 {
    let rest: f64 = (1..m).map(|i| (i as f64 + 1.0) / (k + i as f64)).product();
    rest * (k - 1.0) / (k + m as f64)
}

fn remainder_mean(k: f64, depth: usize) -> f64 {
    (1..=depth).map(|i| (i as f64 + 1.0) / (k + i as f64)).product()
}

/// Exact expected counts of a balanced urn after `steps` draws, iterating
/// `E N_{t+1} = E N_t + A E N_t / T_t` in floating point.
fn urn_means(urn: &UrnSpec, steps: u64) -> Vec<f64> {
    let q = urn.colours();
    // column c is the net change when colour c is drawn
    let delta: Vec<Vec<f64>> = (0..q)
        .map(|c| {
            let mut counts = vec![1u64; q];
            urn.apply(&mut counts, c);
            counts.iter().map(|&x| x as f64 - 1.0).collect()
        })
        .collect();
    let mut mean: Vec<f64> = urn.init.iter().map(|&x| x as f64).collect();
    let mut total: f64 = mean.iter().sum();
    let growth: f64 = delta[0].iter().sum();
    for _ in 0..steps {
        let p: Vec<f64> = mean.iter().map(|&m| m / total).collect();
        let mut next = mean.clone();
        for (c, pc) in p.iter().enumerate() {
            for (i, x) in next.iter_mut().enumerate() {
                *x += pc * delta[c][i];
            }
        }
        mean = next;
        total += growth;
    }
    mean
}

fn block_theory(t: &mut Theory, n: u64, k: u32, s_name: &str) -> Result<()> {
    let mean = block_binomial_moment_f64(n, k as u64, 1)? - 1.0;
    t.set_mean(s_name, mean);
    t.set_mean("blocksScaled", mean / (n as f64).powf(1.0 / k as f64));
    Ok(())
}

/// Block fractions converge to the stick-breaking pieces.
fn fraction_theory(t: &mut Theory, spec: &ExperimentSpec) {
    if spec.k < 2 {
        return;
    }
    let k = spec.k as f64;
    for s in &spec.statistics {
        if let Some(j) = s.strip_prefix("blockFraction.").and_then(|j| j.parse::<usize>().ok()) {
            if j >= 1 {
                t.set_mean(s.clone(), stick_mean(k, j));
            }
        }
    }
}

/// Theory attached by default: exact finite-`n` means where they are
/// known, limit means for normalised block sizes, and limit covariances
/// (scaled by `n` for raw urn counts).
pub fn default_theory(spec: &ExperimentSpec) -> Result<Theory> {
    let mut t = Theory::default();
    let (n, k) = (spec.n, spec.k);
    let nf = n as f64;
    let kf = k as f64;
    match &spec.generator {
        Generator::Permutation { flavor: Flavor::KStirling } => {
            let m = crate::dist::mean_profile(n, k as u64)?;
            let f = |r| to_f64(r);
            t.set_mean("ascents", f(&m.ascents));
            t.set_mean("descents", f(&m.descents));
            t.set_mean("plateaux", f(&m.plateaux));
            for j in 1..=k as usize {
                t.set_mean(format!("jAscents.{j}"), f(&m.j_ascents));
                t.set_mean(format!("jDescents.{j}"), f(&m.j_descents));
                if j < k as usize {
                    t.set_mean(format!("jPlateaux.{j}"), f(&m.j_plateaux));
                }
            }
            let rate = kf / (kf + 1.0);
            t.set_mean("xi", (f(&m.ascents) - rate * nf) / nf.sqrt());
            t.set_mean("eta", (f(&m.descents) - rate * nf) / nf.sqrt());
            t.set_mean("zeta", (f(&m.plateaux) - (kf - 1.0) * rate * nf) / nf.sqrt());
            let cov: Vec<Vec<f64>> = tnormal_covariance(k as u64)?
                .iter()
                .map(|r| r.iter().map(to_f64).collect())
                .collect();
            t.set_cov_block(&["xi".into(), "eta".into(), "zeta".into()], &cov);
            block_theory(&mut t, n, k, "blocks")?;
            fraction_theory(&mut t, spec);
        }
        Generator::Permutation { .. } => {}
        Generator::Urn { urn } => {
            let means = urn_means(urn, n - 1);
            for (j, m) in means.iter().enumerate() {
                t.set_mean(format!("count.{}", j + 1), *m);
            }
            let limit = match &urn.kind {
                UrnKind::SymmetricA { q } if *q >= 2 => Some(urn_a_covariance(*q)?),
                UrnKind::FixedAddition { s } if s.iter().sum::<u64>() >= 2 => Some(fixed_addition_covariance(s)?),
                _ => None,
            };
            if let Some(l) = limit {
                let names: Vec<String> = (1..=means.len()).map(|j| format!("count.{j}")).collect();
                let m: Vec<Vec<f64>> = l.matrix.iter().map(|r| r.iter().map(|x| to_f64(x) * nf).collect()).collect();
                t.set_cov_block(&names, &m);
            }
        }
        Generator::BlockUrn => {
            block_theory(&mut t, n, k, "blocks")?;
            t.set_mean("white", t.means["blocks"] + 1.0);
        }
        Generator::NestedUrns => {
            block_theory(&mut t, n, k, "blocks")?;
            fraction_theory(&mut t, spec);
        }
        Generator::TreeGrowth { family } if family.kind() == FamilyKind::DAry => {
            let d = family.arity().unwrap_or(2) as u64;
            let kk = d - 1;
            let m = crate::dist::mean_profile(n, kk)?;
            for j in 1..=d as usize {
                t.set_mean(format!("exterior.{j}"), to_f64(&m.exterior));
                t.set_mean(format!("interior.{j}"), to_f64(&m.interior));
                let c = kk as f64 / (kk as f64 + 1.0);
                t.set_mean(format!("exteriorScaled.{j}"), (to_f64(&m.exterior) - c * nf) / nf.sqrt());
            }
            if kk >= 1 {
                let mean = block_binomial_moment_f64(n, kk, 1)? - 1.0;
                t.set_mean("leftRight", mean);
            }
            if d >= 2 {
                let l = urn_a_covariance(d as usize)?;
                let names: Vec<String> = (1..=d as usize).map(|j| format!("exteriorScaled.{j}")).collect();
                let m: Vec<Vec<f64>> = l.matrix.iter().map(|r| r.iter().map(to_f64).collect()).collect();
                t.set_cov_block(&names, &m);
            }
        }
        Generator::TreeGrowth { .. } => {}
        Generator::StickBreaking => {
            if k >= 2 {
                for j in 1..=n as usize {
                    t.set_mean(format!("stick.{j}"), stick_mean(kf, j));
                }
                t.set_mean("remainder", remainder_mean(kf, n as usize));
            }
        }
    }
    let wanted: Vec<&String> = spec.statistics.iter().collect();
    t.means.retain(|k, _| wanted.contains(&k));
    t.covariances.retain(|e| wanted.contains(&&e.a) && wanted.contains(&&e.b));
    Ok(t)
}
