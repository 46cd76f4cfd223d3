use std::collections::BTreeSet;

use fqnres::solver::{
    brute_force_min, check, dump, parse_dump, preprocess, solve_min, solve_min_with, CoveringProblem, Model,
    SolveOptions,
};
use proptest::prelude::*;

/// Reference minimum computed without the library: every subset, ranked by
/// (weight, distinct labels, size, sorted ids).
fn reference_min(n: usize, clauses: &[Vec<usize>], weights: &[u64], labels: &[Option<u32>]) -> (Vec<usize>, u64) {
    let mut best: Option<(u64, usize, usize, Vec<usize>)> = None;
    for mask in 0u64..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if !clauses.iter().all(|c| c.iter().any(|v| set.contains(v))) {
            continue;
        }
        let cost = set.iter().map(|&v| weights[v]).sum();
        let distinct: BTreeSet<u32> = set.iter().filter_map(|&v| labels[v]).collect();
        let key = (cost, distinct.len(), set.len(), set);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    let (cost, _, _, set) = best.expect("positive CNF with non-empty clauses is satisfiable");
    (set, cost)
}

fn clauses_strategy(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=max_vars).prop_flat_map(move |n| {
        let clause = prop::collection::vec(0..n, 1..=5);
        (Just(n), prop::collection::vec(clause, 0..=max_clauses))
    })
}

fn vars(m: &Model) -> Vec<usize> {
    m.true_vars.iter().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_reference_with_unit_weights((n, clauses) in clauses_strategy(15, 10)) {
        let p = CoveringProblem::new(n, clauses.clone()).unwrap();
        let m = solve_min(&p).unwrap();
        let (set, cost) = reference_min(n, &clauses, &vec![1; n], &vec![None; n]);
        prop_assert_eq!(vars(&m), set);
        prop_assert_eq!(m.cost, cost);
        prop_assert_eq!(brute_force_min(&p).unwrap(), m);
    }

    #[test]
    fn matches_reference_with_weights_and_labels(
        (n, clauses) in clauses_strategy(10, 8),
        weights in prop::collection::vec(0u64..3, 10),
        labels in prop::collection::vec(prop::option::of(0u32..3), 10),
    ) {
        let weights = weights[..n].to_vec();
        let labels = labels[..n].to_vec();
        let mut p = CoveringProblem::new(n, clauses.clone()).unwrap().with_weights(weights.clone()).unwrap();
        for (v, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                p.set_label(v, *l).unwrap();
            }
        }
        let m = solve_min(&p).unwrap();
        let (set, cost) = reference_min(n, &clauses, &weights, &labels);
        prop_assert_eq!(vars(&m), set);
        prop_assert_eq!(m.cost, cost);
        prop_assert_eq!(&brute_force_min(&p).unwrap(), &m);
        let plain = solve_min_with(&p, SolveOptions { preprocess: false, bound: false }).unwrap();
        prop_assert_eq!(plain, m);
    }

    #[test]
    fn preprocessing_is_sound((n, clauses) in clauses_strategy(15, 10)) {
        let p = CoveringProblem::new(n, clauses).unwrap();
        let with = solve_min(&p).unwrap();
        let without = solve_min_with(&p, SolveOptions { preprocess: false, ..SolveOptions::default() }).unwrap();
        prop_assert_eq!(&with, &without);
        let (reduced, forced) = preprocess(&p);
        prop_assert!(reduced.clauses().iter().all(|c| c.len() > 1));
        prop_assert!(forced.is_subset(&with.true_vars));
    }

    #[test]
    fn models_are_minimal((n, clauses) in clauses_strategy(15, 10)) {
        let p = CoveringProblem::new(n, clauses).unwrap();
        let m = solve_min(&p).unwrap();
        prop_assert!(check(&p, &m));
        for &v in &m.true_vars {
            let mut smaller = m.clone();
            smaller.true_vars.remove(&v);
            prop_assert!(!check(&p, &smaller), "variable {} is redundant", v);
        }
    }

    #[test]
    fn adding_a_clause_never_lowers_cost(
        (n, clauses) in clauses_strategy(12, 8),
        extra in prop::collection::vec(0usize..12, 1..=5),
    ) {
        let extra: Vec<usize> = extra.into_iter().map(|v| v % n).collect();
        let p = CoveringProblem::new(n, clauses.clone()).unwrap();
        let mut more = clauses;
        more.push(extra);
        let q = CoveringProblem::new(n, more).unwrap();
        prop_assert!(solve_min(&q).unwrap().cost >= solve_min(&p).unwrap().cost);
    }

    #[test]
    fn dump_round_trips(
        (n, clauses) in clauses_strategy(15, 10),
        weights in prop::collection::vec(0u64..4, 15),
    ) {
        let p = CoveringProblem::new(n, clauses).unwrap().with_weights(weights[..n].to_vec()).unwrap();
        let text = dump(&p);
        prop_assert!(text.starts_with("p cover "));
        prop_assert_eq!(parse_dump(&text).unwrap(), p);
    }
}

#[test]
fn exclusions_match_filtered_reference() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let clauses: Vec<Vec<usize>> = (0..rng.gen_range(0..=6))
            .map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        let excl: Vec<(u32, u32)> = (0..n).map(|_| (rng.gen_range(0..2), rng.gen_range(0..2))).collect();
        let mut p = CoveringProblem::new(n, clauses.clone()).unwrap();
        for (v, &(f, m)) in excl.iter().enumerate() {
            p.set_exclusion(v, f, m).unwrap();
        }
        // reference: filter subsets that mix members within a family
        let mut best: Option<(usize, Vec<usize>)> = None;
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let covers = clauses.iter().all(|c| c.iter().any(|v| set.contains(v)));
            let clean = set
                .iter()
                .all(|&a| set.iter().all(|&b| excl[a].0 != excl[b].0 || excl[a].1 == excl[b].1));
            if covers && clean {
                let key = (set.len(), set);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        match (best, solve_min(&p)) {
            (Some((_, set)), Ok(m)) => assert_eq!(vars(&m), set),
            (None, Err(_)) => {}
            (expected, got) => panic!("reference {expected:?}, solver {got:?}"),
        }
    }
}
