use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;
use stirling::bijection::{decode_ary, decode_bundled, encode_ary, encode_bundled};
use stirling::dist::block_count_pmf;
use stirling::harness::{run_experiment_with_threads, ExperimentSpec, Generator};
use stirling::perm::{
    block_decomposition, enumerate_flavor, reflect, sample_uniform, stat_profile, validate, Flavor,
    DEFAULT_ENUMERATION_CAP,
};
use stirling::rational::Rational;
use stirling::rng::seeded;
use stirling::tree::{
    ary_stats, enumerate_ary, enumerate_bundled_direct, enumerate_plane, grow_ary, grow_bundled, tree_weight,
    AryGrower, DegreeWeightFamily,
};
use stirling::urn::{nested_block_urns, UrnSpec};

const CAP: u64 = DEFAULT_ENUMERATION_CAP;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_permutations_are_valid(n in 1usize..60, k in 1u32..5, seed: u64, bundled: bool) {
        let flavor = if bundled { Flavor::Bundled } else { Flavor::KStirling };
        let p = sample_uniform(n, k, flavor, seed).unwrap();
        prop_assert!(validate(p.word(), p.multiplicities()));
        let s = stat_profile(&p);
        prop_assert_eq!(s.ascents + s.descents + s.plateaux, p.len() as u64 + 1);
        prop_assert_eq!(s.ascents, 1 + s.j_ascents.iter().sum::<u64>());
        prop_assert_eq!(s.descents, 1 + s.j_descents.iter().sum::<u64>());
        let r = stat_profile(&reflect(&p));
        prop_assert_eq!((r.ascents, r.descents), (s.descents, s.ascents));
        let d = block_decomposition(&p);
        prop_assert_eq!(d.sizes_descending.iter().sum::<usize>(), p.len());
    }

    #[test]
    fn grown_trees_roundtrip(n in 1usize..150, k in 1u32..5, seed: u64) {
        let mut rng = seeded(seed);
        let t = grow_ary(k as usize + 1, n, &mut rng);
        let code = encode_ary(&t).unwrap();
        prop_assert_eq!(decode_ary(&code, k).unwrap(), t);
        let b = grow_bundled(k as usize + 1, n, &mut rng).unwrap();
        let code = encode_bundled(&b).unwrap();
        prop_assert_eq!(decode_bundled(&code, k).unwrap(), b);
    }

    /// Adding node `n+1` to a tree inserts `(n+1)^k` into one gap of its code.
    #[test]
    fn growth_is_gap_insertion(n in 1usize..80, k in 1u32..4, seed: u64) {
        let mut rng = seeded(seed);
        let mut g = AryGrower::new(k as usize + 1);
        let mut prev = encode_ary(g.tree()).unwrap().into_word();
        for _ in 1..n {
            g.step(&mut rng);
            let code = encode_ary(g.tree()).unwrap().into_word();
            let label = g.tree().order() as u32;
            let at: Vec<usize> = (0..code.len()).filter(|&i| code[i] == label).collect();
            prop_assert_eq!(at.len(), k as usize);
            prop_assert_eq!(at[k as usize - 1] - at[0], k as usize - 1);
            let rest: Vec<u32> = code.iter().copied().filter(|&a| a != label).collect();
            prop_assert_eq!(&rest, &prev);
            prev = code;
        }
    }

    #[test]
    fn nested_urn_sizes(n in 1u64..300, k in 1u64..5, seed: u64) {
        let sizes = nested_block_urns(k, n, seed).unwrap();
        prop_assert_eq!(sizes.iter().sum::<u64>(), k * n);
        prop_assert!(sizes.iter().all(|&s| s >= k && s % k == 0));
    }
}

#[test]
fn weights_sum_to_total_weight() {
    for n in 1..=5usize {
        for d in [2usize, 3] {
            let fam = DegreeWeightFamily::d_ary(d as u32).unwrap();
            let total: Rational = enumerate_ary(n, d, CAP).unwrap().iter().map(|t| tree_weight(t, &fam).unwrap()).sum();
            assert_eq!(total, fam.total_weight(n).unwrap(), "d-ary d={d} n={n}");
        }
        for b in [1usize, 2, 3] {
            let fam = DegreeWeightFamily::bundled(b as u32).unwrap();
            let total: Rational = enumerate_bundled_direct(n, b, CAP)
                .unwrap()
                .iter()
                .map(|t| tree_weight(t, &fam).unwrap())
                .sum();
            assert_eq!(total, fam.total_weight(n).unwrap(), "bundled b={b} n={n}");
        }
        for k in [2u32, 3, 4] {
            let fam = DegreeWeightFamily::k_plane(k).unwrap();
            let total: Rational = enumerate_plane(n, CAP).unwrap().iter().map(|t| tree_weight(t, &fam).unwrap()).sum();
            assert_eq!(total, fam.total_weight(n).unwrap(), "k-plane k={k} n={n}");
        }
    }
}

/// Exact law of an urn after `steps` draws, by pushing the transition kernel.
fn urn_law(urn: &UrnSpec, steps: u64) -> BTreeMap<Vec<u64>, Rational> {
    let mut law = BTreeMap::from([(urn.init.clone(), Rational::one())]);
    for _ in 0..steps {
        let mut next: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        for (state, p) in &law {
            for (q, to) in urn.transition(state) {
                *next.entry(to).or_insert_with(Rational::zero) += p * q;
            }
        }
        law = next;
    }
    law
}

#[test]
fn symmetric_urn_law_is_the_exterior_law() {
    for d in [2usize, 3] {
        for n in 1..=5usize {
            let trees = enumerate_ary(n, d, CAP).unwrap();
            let mut tree_law: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
            let w = Rational::one() / Rational::from_integer((trees.len() as i64).into());
            for t in &trees {
                *tree_law.entry(ary_stats(t).exterior).or_insert_with(Rational::zero) += &w;
            }
            assert_eq!(urn_law(&UrnSpec::symmetric_a(d).unwrap(), n as u64 - 1), tree_law, "d={d} n={n}");
        }
    }
}

#[test]
fn block_urn_law_is_the_block_count_law() {
    for k in [1u64, 2, 3] {
        for n in 1..=7u64 {
            let law = urn_law(&UrnSpec::triangular_b(k).unwrap(), n - 1);
            let pmf = block_count_pmf(n, k).unwrap();
            for (state, p) in law {
                assert_eq!(p, pmf.prob(state[1] - 1), "k={k} n={n} state={state:?}");
            }
        }
    }
}

#[test]
fn exchangeable_ascent_descent_plateau_counts() {
    let mut joint: BTreeMap<(u64, u64, u64), u64> = BTreeMap::new();
    for p in enumerate_flavor(5, 2, Flavor::KStirling, CAP).unwrap() {
        let s = stat_profile(&p);
        *joint.entry((s.ascents, s.plateaux, s.descents)).or_default() += 1;
    }
    for (&(x, z, y), &c) in &joint {
        for key in [(x, y, z), (z, x, y), (z, y, x), (y, x, z), (y, z, x)] {
            assert_eq!(joint.get(&key).copied().unwrap_or(0), c);
        }
    }
}

#[test]
fn experiments_do_not_depend_on_threads() {
    let spec = ExperimentSpec {
        generator: Generator::TreeGrowth {
            family: DegreeWeightFamily::d_ary(4).unwrap(),
        },
        n: 300,
        k: 3,
        replicates: 200,
        statistics: vec!["exterior.1".into(), "leftRight".into(), "leaves".into()],
        seed: 77,
        threshold: None,
        theory: None,
    };
    let one = run_experiment_with_threads(&spec, Some(1)).unwrap();
    let many = run_experiment_with_threads(&spec, Some(5)).unwrap();
    assert_eq!(one, many);
    assert_eq!(one.to_csv(), many.to_csv());
}
