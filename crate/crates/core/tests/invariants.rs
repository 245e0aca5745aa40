mod common;

use common::{check_oracles, check_scaling, check_swap, default_corpus, scale_factor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn swap_reciprocity_on_corpus() {
    for (k, case) in default_corpus().iter().enumerate() {
        if let Err(e) = check_swap(case) {
            panic!("case {k}: {e}");
        }
    }
}

#[test]
fn homothety_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (k, case) in default_corpus().iter().enumerate() {
        let c = scale_factor(&mut rng);
        if let Err(e) = check_scaling(case, &c) {
            panic!("case {k}: {e}");
        }
    }
}

#[test]
fn oracles_agree_on_corpus() {
    for (k, case) in default_corpus().iter().enumerate() {
        if let Err(e) = check_oracles(case) {
            panic!("case {k}: {e}");
        }
    }
}

#[test]
fn corpus_is_not_trivial() {
    let corpus = default_corpus();
    let total: usize = corpus
        .iter()
        .map(|c| {
            yamabif::bifurcation::enumerate_instants(&c.family, &c.lo, &c.hi)
                .unwrap()
                .len()
        })
        .sum();
    assert!(total >= 100, "corpus has only {total} instants");
}

#[test]
fn contributors_are_exactly_the_vanishing_branches() {
    use num_traits::Zero;
    use yamabif::bifurcation::enumerate_instants;

    for (k, case) in default_corpus().iter().enumerate() {
        let fam = &case.family;
        let instants = enumerate_instants(fam, &case.lo, &case.hi).unwrap();
        let mut listed: Vec<(usize, usize)> = Vec::new();
        for inst in &instants {
            for c in &inst.contributors {
                assert!(c.i + c.j > 0, "case {k}: constant mode reported");
                assert!(fam.sigma_eval(c.i, c.j, &inst.lambda).unwrap().is_zero());
                listed.push((c.i, c.j));
            }
        }
        let mut vanishing: Vec<(usize, usize)> = fam
            .branches()
            .filter(|&(i, j)| {
                let z = fam.classify_branch(i, j).unwrap().zero;
                z.is_some_and(|z| case.lo <= z && z <= case.hi)
            })
            .collect();
        listed.sort();
        vanishing.sort();
        assert_eq!(listed, vanishing, "case {k}");
    }
}
