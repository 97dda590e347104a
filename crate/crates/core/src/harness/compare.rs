use std::fmt::Write;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{SampleMatrix, Theory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatComparison {
    pub name: String,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub expected: Option<f64>,
    pub z: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CovComparison {
    pub a: String,
    pub b: String,
    pub covariance: f64,
    /// delete-one jackknife
    pub std_error: f64,
    pub expected: f64,
    pub z: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonReport {
    pub replicates: usize,
    pub threshold: f64,
    pub statistics: Vec<StatComparison>,
    pub covariances: Vec<CovComparison>,
    /// Distribution tests attached with [`ComparisonReport::add_test`].
    pub tests: Vec<NamedTest>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedTest {
    pub name: String,
    #[serde(flatten)]
    pub result: TestResult,
    pub level: f64,
    pub pass: bool,
}

/// Pairwise summation, so the result does not depend on how replicates
/// were scheduled and rounding grows like `log N`.
pub(crate) fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 64 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn mean(x: &[f64]) -> f64 {
    pairwise_sum(x) / x.len() as f64
}

fn sum_map(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let v: Vec<f64> = (0..x.len()).map(f).collect();
    pairwise_sum(&v)
}

fn z_score(est: f64, expected: f64, se: f64) -> f64 {
    let d = est - expected;
    if se > 0.0 {
        d / se
    } else if d.abs() <= 1e-12 * expected.abs().max(1.0) {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

/// Sample covariance (divisor `N-1`) and its delete-one jackknife standard
/// error, both computed in `O(N)` from centred sums.
pub fn covariance_with_jackknife(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len();
    let (mx, my) = (mean(x), mean(y));
    let xc: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let yc: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sxy = sum_map(&xc, |i| xc[i] * yc[i]);
    let cov = if n > 1 { sxy / (n as f64 - 1.0) } else { 0.0 };
    if n < 3 {
        return (cov, f64::NAN);
    }
    let m = n as f64 - 1.0;
    // centred sums of x and y are zero, so dropping i leaves -xc[i], -yc[i]
    let loo: Vec<f64> = xc
        .iter()
        .zip(&yc)
        .map(|(a, b)| (sxy - a * b - a * b / m) / (m - 1.0))
        .collect();
    let lm = mean(&loo);
    let ss = sum_map(&loo, |i| (loo[i] - lm) * (loo[i] - lm));
    (cov, (ss * (m / n as f64)).sqrt())
}

/// z-scores of sample means against `theory.means` and of sample
/// covariances against `theory.covariances`; a check passes when
/// `|z| <= threshold`.
pub fn compare(samples: &SampleMatrix, theory: &Theory, threshold: f64) -> Result<ComparisonReport> {
    let n = samples.rows.len();
    if n < 2 {
        return Err(Error::InvalidArgument("comparison needs at least two replicates".into()));
    }
    let cols: Vec<Vec<f64>> = (0..samples.columns.len()).map(|j| samples.column(j)).collect();
    let statistics = samples
        .columns
        .iter()
        .zip(&cols)
        .map(|(name, x)| {
            let m = mean(x);
            let var = sum_map(x, |i| (x[i] - m) * (x[i] - m)) / (n as f64 - 1.0);
            let se = (var / n as f64).sqrt();
            let expected = theory.mean(name);
            let z = expected.map(|e| z_score(m, e, se));
            StatComparison {
                name: name.clone(),
                mean: m,
                variance: var,
                std_error: se,
                expected,
                z,
                pass: z.map(|z| z.abs() <= threshold),
            }
        })
        .collect::<Vec<_>>();
    let mut covariances = Vec::new();
    for i in 0..cols.len() {
        for j in i..cols.len() {
            let (a, b) = (&samples.columns[i], &samples.columns[j]);
            if let Some(expected) = theory.covariance(a, b) {
                let (c, se) = covariance_with_jackknife(&cols[i], &cols[j]);
                let z = z_score(c, expected, se);
                covariances.push(CovComparison {
                    a: a.clone(),
                    b: b.clone(),
                    covariance: c,
                    std_error: se,
                    expected,
                    z,
                    pass: z.abs() <= threshold,
                });
            }
        }
    }
    let passed = statistics.iter().all(|s| s.pass != Some(false)) && covariances.iter().all(|c| c.pass);
    Ok(ComparisonReport {
        replicates: n,
        threshold,
        statistics,
        covariances,
        tests: Vec::new(),
        passed,
    })
}

impl ComparisonReport {
    /// Records a test that passes when its p-value is at least `level`.
    pub fn add_test(&mut self, name: impl Into<String>, result: TestResult, level: f64) {
        let pass = result.p_value >= level;
        self.passed &= pass;
        self.tests.push(NamedTest {
            name: name.into(),
            result,
            level,
            pass,
        });
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
        let verdict = |p: Option<bool>| match p {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "-",
        };
        let _ = writeln!(
            out,
            "{:<22} {:>14} {:>12} {:>14} {:>9}",
            "statistic", "mean", "se", "expected", "z"
        );
        for s in &self.statistics {
            let _ = writeln!(
                out,
                "{:<22} {:>14.6} {:>12.6} {:>14} {:>9}  {}",
                s.name,
                s.mean,
                s.std_error,
                opt(s.expected),
                s.z.map_or("-".to_string(), |z| format!("{z:.3}")),
                verdict(s.pass)
            );
        }
        if !self.covariances.is_empty() {
            let _ = writeln!(
                out,
                "\n{:<22} {:>14} {:>12} {:>14} {:>9}",
                "covariance", "sample", "jackknife se", "expected", "z"
            );
            for c in &self.covariances {
                let _ = writeln!(
                    out,
                    "{:<22} {:>14.6} {:>12.6} {:>14.6} {:>9.3}  {}",
                    format!("{},{}", c.a, c.b),
                    c.covariance,
                    c.std_error,
                    c.expected,
                    c.z,
                    verdict(Some(c.pass))
                );
            }
        }
        for t in &self.tests {
            let _ = writeln!(
                out,
                "{:<22} statistic {:.6}, p = {:.4} (level {}) {}",
                t.name,
                t.result.statistic,
                t.result.p_value,
                t.level,
                verdict(Some(t.pass))
            );
        }
        let _ = writeln!(
            out,
            "\n{} replicates, threshold {}: {}",
            self.replicates,
            self.threshold,
            if self.passed { "pass" } else { "FAIL" }
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TestResult {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
}

fn chi_p(stat: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(df).expect("positive df").cdf(stat)
}

/// Pearson goodness of fit of `observed` counts against `probs`. Adjacent
/// cells are pooled left to right until each expected count reaches 5.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<TestResult> {
    if observed.len() != probs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} observed cells, {} probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(probs) {
        o += ob as f64;
        e += p * total as f64;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    let stat = cells.iter().filter(|c| c.1 > 0.0).map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = cells.len() as f64 - 1.0;
    Ok(TestResult {
        statistic: stat,
        df,
        p_value: chi_p(stat, df),
    })
}

/// Chi-square test that two count vectors over the same cells come from one
/// law; cells empty in both samples are dropped.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} cells", a.len(), b.len())));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidArgument("both samples must be non-empty".into()));
    }
    let n = na + nb;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (obs, row) in [(x as f64, na), (y as f64, nb)] {
            let e = row * col / n;
            stat += (obs - e) * (obs - e) / e;
        }
    }
    let df = cells as f64 - 1.0;
    Ok(TestResult {
        statistic: stat,
        df,
        p_value: chi_p(stat, df),
    })
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (-1)^(j-1) exp(-2 j² λ²)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let jf = j as f64;
        let term = sign * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value and the
/// usual small-sample correction of the effective size.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("both samples must be non-empty".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = if x[i] <= y[j] { x[i] } else { y[j] };
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    Ok(TestResult {
        statistic: d,
        df: en * en,
        p_value: kolmogorov_q((en + 0.12 + 0.11 / en) * d),
    })
}
