//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N ... PASS|FAIL` line with its measured values. Tolerances are
//! fixed constants below.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_traits::Zero;
use stirling::bijection::{verify_codecs, verify_stat_transfer};
use stirling::dist::{
    block_binomial_moment, block_count_pmf, mean_profile, zeta_density, zeta_moment, DEFAULT_TERM_CAP,
};
use stirling::harness::{
    chi_square_gof, chi_square_homogeneity, ks_two_sample, replicate_map, run_and_compare, run_experiment,
    ExperimentSpec, Generator,
};
use stirling::perm::{
    block_decomposition, count_bundled, count_k_stirling, enumerate_flavor, sample_with, stat_profile, Flavor,
    DEFAULT_ENUMERATION_CAP,
};
use stirling::rational::{binomial_u, from_biguint, int, Rational};
use stirling::tree::{ary_stats, enumerate_ary, enumerate_plane, tree_weight, DegreeWeightFamily};
use stirling::urn::{block_urn_white, nested_block_urns_with, UrnSpec};

const CAP: u64 = DEFAULT_ENUMERATION_CAP;
const COUNT_SECONDS: f64 = 10.0;
const CODEC_SECONDS: f64 = 60.0;
const JACKKNIFE_THRESHOLD: f64 = 5.0;
const FIRST_MOMENT_REL: f64 = 0.03;
const SECOND_MOMENT_REL: f64 = 0.05;
const DENSITY_MASS_TOL: f64 = 1e-4;
const DENSITY_MEAN_TOL: f64 = 1e-3;
const BETA_MEAN_SE: f64 = 3.0;
const TEST_LEVEL: f64 = 0.01;

fn report(n: u32, title: &str, pass: bool, detail: String) {
    println!(
        "criterion {n:>2} {title:<34} {}  {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

fn ratio(a: i64, b: usize) -> Rational {
    int(a) / int(b as i64)
}

#[test]
fn criterion_01_counting_identities() {
    let start = Instant::now();
    let mut ok = true;
    let mut seen = Vec::new();
    for (k, max_n, expected) in [(2u32, 5usize, vec![1u64, 3, 15, 105, 945]), (3, 4, vec![1, 4, 28, 280])] {
        for n in 1..=max_n {
            let listed = enumerate_flavor(n, k, Flavor::KStirling, CAP).unwrap().count() as u64;
            let formula = count_k_stirling(n as u64, k as u64);
            ok &= formula == listed.into() && listed == expected[n - 1];
            seen.push(listed);
        }
    }
    for k in [1u32, 2] {
        for n in 1..=4 {
            let listed = enumerate_flavor(n, k, Flavor::Bundled, CAP).unwrap().count() as u64;
            ok &= count_bundled(n as u64, k as u64) == listed.into();
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "counting identities",
        ok && secs < COUNT_SECONDS,
        format!("k-Stirling counts {seen:?}, bundled n<=4 k in {{1,2}} match, {secs:.2}s"),
    );
}

#[test]
fn criterion_02_bijection_roundtrips() {
    let start = Instant::now();
    let mut failures = 0;
    let mut cases = 0;
    for (max_n, k) in [(5, 1), (5, 2), (4, 3)] {
        let rep = verify_codecs(max_n, k, CAP).unwrap();
        failures += rep.checks.iter().map(|c| c.failures).sum::<u64>();
        cases += rep.checks.iter().map(|c| c.cases).sum::<u64>();
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "bijection roundtrips",
        failures == 0 && cases > 0 && secs < CODEC_SECONDS,
        format!("{cases} roundtrip/injectivity cases, {failures} counterexamples, {secs:.2}s"),
    );
}

#[test]
fn criterion_03_statistic_transfer() {
    let mut counterexamples = 0;
    let mut cases = 0;
    let mut bundled_cases = 0;
    for (max_n, k) in [(5, 2), (4, 3), (4, 1)] {
        let rep = verify_stat_transfer(max_n, k, CAP).unwrap();
        counterexamples += rep.counterexamples.len();
        cases += rep.checks.iter().map(|c| c.cases).sum::<u64>();
        bundled_cases += rep.checks.iter().filter(|c| c.name.starts_with("bundled")).map(|c| c.cases).sum::<u64>();
        counterexamples += rep.checks.iter().filter(|c| c.failures > 0).count();
    }
    report(
        3,
        "statistic transfer",
        counterexamples == 0 && bundled_cases > 0,
        format!("{cases} equalities checked ({bundled_cases} bundled), {counterexamples} counterexamples"),
    );
}

#[test]
fn criterion_04_exact_means() {
    let mut ok = true;
    let mut checked = 0;
    let mut ex2 = Rational::zero();
    for k in [2u32, 3] {
        for n in 1..=5 {
            let perms: Vec<_> = enumerate_flavor(n, k, Flavor::KStirling, CAP).unwrap().collect();
            let total = perms.len();
            let profiles: Vec<_> = perms.iter().map(stat_profile).collect();
            let avg = |f: &dyn Fn(&stirling::perm::StatProfile) -> u64| {
                ratio(profiles.iter().map(|p| f(p) as i64).sum(), total)
            };
            let m = mean_profile(n as u64, k as u64).unwrap();
            let x = avg(&|p| p.ascents);
            if n == 2 && k == 2 {
                ex2 = x.clone();
            }
            ok &= x == m.ascents && avg(&|p| p.descents) == m.descents && avg(&|p| p.plateaux) == m.plateaux;
            checked += 3;
            for j in 1..=k as usize {
                ok &= avg(&|p| p.j_ascent(j)) == m.j_ascents && avg(&|p| p.j_descent(j)) == m.j_descents;
                checked += 2;
                if j < k as usize {
                    ok &= avg(&|p| p.j_plateau(j)) == m.j_plateaux;
                    checked += 1;
                }
            }
        }
    }
    ok &= ex2 == ratio(5, 3);
    report(4, "exact means", ok, format!("{checked} exact rational equalities, E X_2 = {ex2} at k=2"));
}

#[test]
fn criterion_05_block_count_law() {
    let mut ok = true;
    let mut checked = 0;
    for k in [2u32, 3] {
        for n in 1..=5usize {
            let mut hist = vec![0i64; n + 1];
            let mut total = 0;
            for p in enumerate_flavor(n, k, Flavor::KStirling, CAP).unwrap() {
                hist[block_decomposition(&p).count()] += 1;
                total += 1;
            }
            let pmf = block_count_pmf(n as u64, k as u64).unwrap();
            for (m, &c) in hist.iter().enumerate().skip(1) {
                ok &= ratio(c, total) == pmf.prob(m as u64);
                checked += 1;
            }
            for r in 0..=3u64 {
                let mut acc = Rational::zero();
                for (m, &c) in hist.iter().enumerate() {
                    acc += from_biguint(&binomial_u(m as u64 + r, r)) * int(c);
                }
                ok &= acc / int(total as i64) == block_binomial_moment(n as u64, k as u64, r).unwrap();
                checked += 1;
            }
        }
    }
    let anchor = block_count_pmf(2, 2).unwrap().prob(1);
    ok &= anchor == ratio(1, 3);
    report(5, "block-count pmf and moments", ok, format!("{checked} exact equalities, P(S_2=1) = {anchor} at k=2"));
}

#[test]
fn criterion_06_leaves_versus_ascents() {
    let mut ok = true;
    let mut checked = 0;
    for k in [2u32, 3] {
        let family = DegreeWeightFamily::k_plane(k).unwrap();
        for n in 1..=4usize {
            let mut leaves: BTreeMap<u64, Rational> = BTreeMap::new();
            let mut weight = Rational::zero();
            for t in enumerate_plane(n + 1, CAP).unwrap() {
                let w = tree_weight(&t, &family).unwrap();
                weight += &w;
                *leaves.entry(t.leaves() as u64).or_insert_with(Rational::zero) += w;
            }
            let mut ascents: BTreeMap<u64, Rational> = BTreeMap::new();
            let perms: Vec<_> = enumerate_flavor(n, k, Flavor::KStirling, CAP).unwrap().collect();
            for p in &perms {
                *ascents.entry(stat_profile(p).ascents).or_insert_with(Rational::zero) += int(1);
            }
            let tree_law: BTreeMap<u64, Rational> = leaves.into_iter().map(|(a, w)| (a, w / &weight)).collect();
            let perm_law: BTreeMap<u64, Rational> =
                ascents.into_iter().map(|(a, c)| (a, c / int(perms.len() as i64))).collect();
            ok &= tree_law == perm_law;
            checked += 1;
        }
    }
    report(
        6,
        "plane-tree leaves = ascents",
        ok,
        format!("{checked} exact histograms compared (n<=4, k in {{2,3}})"),
    );
}

#[test]
fn criterion_07_asymptotic_normality() {
    let spec = ExperimentSpec {
        generator: Generator::Permutation { flavor: Flavor::KStirling },
        n: 10_000,
        k: 2,
        replicates: 10_000,
        statistics: vec!["xi".into(), "eta".into()],
        seed: 20_240_701,
        threshold: Some(JACKKNIFE_THRESHOLD),
        theory: None,
    };
    let (_, rep) = run_and_compare(&spec, None).unwrap();
    let covs: Vec<String> = rep
        .covariances
        .iter()
        .map(|c| format!("{}/{}: {:.5} vs {:.5} (z {:.2})", c.a, c.b, c.covariance, c.expected, c.z))
        .collect();
    let ok = rep.covariances.len() == 3 && rep.covariances.iter().all(|c| c.z.abs() <= JACKKNIFE_THRESHOLD);
    report(7, "asymptotic normality", ok, covs.join("; "));
}

#[test]
fn criterion_08_exchangeability() {
    let mut joint: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for t in enumerate_ary(4, 3, CAP).unwrap() {
        *joint.entry(ary_stats(&t).exterior).or_default() += 1;
    }
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let ok = perms.iter().all(|s| {
        let moved: BTreeMap<Vec<u64>, u64> = joint.iter().map(|(v, &c)| (s.iter().map(|&i| v[i]).collect(), c)).collect();
        moved == joint
    });
    report(
        8,
        "exchangeability of exterior counts",
        ok,
        format!("{} support points over 105 trees, invariant under all 6 permutations", joint.len()),
    );
}

#[test]
fn criterion_09_martingale_and_limit() {
    let mut symbolic = 0;
    let mut ok = true;
    for k in [2u64, 3] {
        let urn = UrnSpec::triangular_b(k).unwrap();
        for m in 1..=60u64 {
            let total = k * m + 1;
            for w in 2..=50u64.min(m + 1) {
                let next = urn.expected_next(&[total - w, w]);
                let want = int(w as i64) * int((k * m + 2) as i64) / int(total as i64);
                ok &= next[1] == want;
                symbolic += 1;
            }
        }
    }
    let n = 100_000u64;
    let mut details = vec![format!("{symbolic} exact one-step identities")];
    for k in [2u64, 3] {
        let scale = (n as f64).powf(1.0 / k as f64);
        let s: Vec<f64> =
            replicate_map(900 + k, 10_000, |rng| Ok((block_urn_white(k, n, rng) - 1) as f64 / scale)).unwrap();
        let m1 = s.iter().sum::<f64>() / s.len() as f64;
        let m2 = s.iter().map(|x| x * x).sum::<f64>() / s.len() as f64;
        let (z1, z2) = (zeta_moment(k as u32, 1.0).unwrap(), zeta_moment(k as u32, 2.0).unwrap());
        let (e1, e2) = ((m1 - z1) / z1, (m2 - z2) / z2);
        ok &= e1.abs() <= FIRST_MOMENT_REL && e2.abs() <= SECOND_MOMENT_REL;
        details.push(format!("k={k}: mean {m1:.4} vs {z1:.4} ({:+.2}%), second {m2:.4} vs {z2:.4} ({:+.2}%)", 100.0 * e1, 100.0 * e2));
    }
    report(9, "martingale and a.s. limit", ok, details.join("; "));
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `eps`.
#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, eps, 40)
}

#[test]
fn criterion_10_density() {
    // the series has no constant term, so the density tends to 0 at the origin
    let g = |x: f64| if x > 0.0 { zeta_density(2, x, DEFAULT_TERM_CAP).unwrap().value } else { 0.0 };
    let mass = simpson(&g, 0.0, 8.0, 1e-9);
    let mean = simpson(&|x| x * g(x), 0.0, 8.0, 1e-9);
    let root_pi = std::f64::consts::PI.sqrt();
    let ok = (mass - 1.0).abs() <= DENSITY_MASS_TOL && (mean - root_pi).abs() <= DENSITY_MEAN_TOL;
    report(
        10,
        "limit density",
        ok,
        format!("mass {mass:.8} (err {:.1e}), first moment {mean:.8} vs sqrt(pi) (err {:.1e})", mass - 1.0, mean - root_pi),
    );
}

#[test]
fn criterion_11_stick_breaking() {
    let (n, k, reps) = (10_000u64, 2u32, 10_000u64);
    let blocks = run_experiment(&ExperimentSpec {
        generator: Generator::NestedUrns,
        n,
        k,
        replicates: reps,
        statistics: vec!["blockFraction.1".into(), "largestBlockFraction".into()],
        seed: 1_100,
        threshold: None,
        theory: None,
    })
    .unwrap();
    let sticks = run_experiment(&ExperimentSpec {
        generator: Generator::StickBreaking,
        n: 1,
        k,
        replicates: reps,
        statistics: vec!["largestStick".into()],
        seed: 1_101,
        threshold: None,
        theory: None,
    })
    .unwrap();
    let first = blocks.column(0);
    let mean = first.iter().sum::<f64>() / first.len() as f64;
    let var = first.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (first.len() as f64 - 1.0);
    let se = (var / first.len() as f64).sqrt();
    let z = (mean - 1.0 / 3.0) / se;
    let ks = ks_two_sample(&blocks.column(1), &sticks.column(0)).unwrap();

    // n = 5: block sizes by label from the nested urns and from uniform
    // permutations, against the exact law from enumeration
    let small = 5usize;
    let mut exact: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for p in enumerate_flavor(small, k, Flavor::KStirling, CAP).unwrap() {
        let sizes = block_decomposition(&p).sizes_by_label().into_iter().map(|s| s as u64).collect();
        *exact.entry(sizes).or_default() += 1;
    }
    let total: u64 = exact.values().sum();
    let support: Vec<Vec<u64>> = exact.keys().cloned().collect();
    let probs: Vec<f64> = exact.values().map(|&c| c as f64 / total as f64).collect();
    let tally = |v: Vec<Vec<u64>>| -> Vec<u64> {
        let mut h = vec![0u64; support.len()];
        for s in v {
            h[support.binary_search(&s).expect("size vector in exact support")] += 1;
        }
        h
    };
    let draws = 100_000u64;
    let nested = tally(replicate_map(1_102, draws, |rng| nested_block_urns_with(k as u64, small as u64, rng)).unwrap());
    let direct = tally(
        replicate_map(1_103, draws, |rng| {
            let p = sample_with(small, k, Flavor::KStirling, rng)?;
            Ok(block_decomposition(&p).sizes_by_label().into_iter().map(|s| s as u64).collect())
        })
        .unwrap(),
    );
    let homog = chi_square_homogeneity(&nested, &direct).unwrap();
    let gof_nested = chi_square_gof(&nested, &probs).unwrap();
    let gof_direct = chi_square_gof(&direct, &probs).unwrap();

    let ok = z.abs() <= BETA_MEAN_SE
        && ks.p_value > TEST_LEVEL
        && homog.p_value > TEST_LEVEL
        && gof_nested.p_value > TEST_LEVEL
        && gof_direct.p_value > TEST_LEVEL;
    report(
        11,
        "stick-breaking and blocks",
        ok,
        format!(
            "first block {mean:.5} vs 1/3 (z {z:.2}); KS largest D {:.4} p {:.3}; n=5 over {} size vectors: \
             nested vs direct p {:.3}, nested vs exact p {:.3}, direct vs exact p {:.3}",
            ks.statistic,
            ks.p_value,
            support.len(),
            homog.p_value,
            gof_nested.p_value,
            gof_direct.p_value
        ),
    );
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_stirling")).args(args).output().expect("run the CLI");
    (out.stdout, out.status.code().unwrap_or(-1))
}

#[test]
fn criterion_12_determinism() {
    let dir = std::env::temp_dir().join(format!("stirling-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("experiment.json");
    std::fs::write(
        &spec,
        r#"{"generator": {"kind": "permutation"}, "n": 500, "k": 2, "replicates": 400,
            "statistics": ["xi", "eta", "zeta", "blocks", "blockFraction.1"], "seed": 12}"#,
    )
    .unwrap();
    let spec = spec.to_str().unwrap();
    let runs = [
        cli(&["verify", "--max-n", "4", "--k", "2"]),
        cli(&["verify", "--max-n", "4", "--k", "2"]),
        cli(&["verify", "--max-n", "4", "--k", "2", "--threads", "8"]),
    ];
    let exps = [
        cli(&["experiment", spec, "--threads", "1"]),
        cli(&["experiment", spec, "--threads", "1"]),
        cli(&["experiment", spec, "--threads", "8"]),
        cli(&["experiment", spec, "--threads", "8", "--csv"]),
        cli(&["experiment", spec, "--threads", "1", "--csv"]),
    ];
    let _ = std::fs::remove_dir_all(&dir);
    let same = |v: &[(Vec<u8>, i32)]| v.iter().all(|r| r == &v[0]) && !v[0].0.is_empty();
    let ok = same(&runs) && runs[0].1 == 0 && same(&exps[..3]) && same(&exps[3..]);
    report(
        12,
        "determinism",
        ok,
        format!(
            "verify: {} bytes x3 identical; experiment JSON: {} bytes x3 (1 and 8 threads), CSV: {} bytes x2",
            runs[0].0.len(),
            exps[0].0.len(),
            exps[3].0.len()
        ),
    );
}
