use std::collections::BTreeSet;

use proptest::prelude::*;

use evalagg::aggregate::{stage_apply, Aggregate, Aggregator, IiaStage, IssueRule};
use evalagg::manipulate::classify_deviation;
use evalagg::metric::{nn_select, weighted_hamming, TieOrder, WeightVector};
use evalagg::space::{is_between, Evaluation, EvaluationSpace, IssueSet, PartialEvaluation, Profile};

fn ev(bits: u64, m: usize) -> Evaluation {
    Evaluation::new(bits, m).unwrap()
}

fn space_strategy(max_m: usize) -> impl Strategy<Value = EvaluationSpace> {
    (1..=max_m).prop_flat_map(|m| {
        prop::collection::btree_set(0..(1u64 << m), 1..=(1usize << m)).prop_map(move |set| {
            EvaluationSpace::explicit(m, set.into_iter().map(|b| ev(b, m))).unwrap()
        })
    })
}

fn point_triple() -> impl Strategy<Value = (usize, u64, u64, u64, Vec<u64>)> {
    (1usize..=10).prop_flat_map(|m| {
        let cube = 0..(1u64 << m);
        (
            Just(m),
            cube.clone(),
            cube.clone(),
            cube,
            prop::collection::vec(1u64..=5, m),
        )
    })
}

/// Infeasible partial evaluations none of whose one-smaller restrictions are infeasible.
fn brute_mipes(space: &EvaluationSpace) -> BTreeSet<PartialEvaluation> {
    let m = space.m();
    let full = (1u64 << m) - 1;
    let feasible = |support: u64, bits: u64| space.masks().iter().any(|&x| x & support == bits);
    let mut out = BTreeSet::new();
    for support in 1..=full {
        let issues: Vec<usize> = (0..m).filter(|&j| support >> (m - 1 - j) & 1 == 1).collect();
        let mut bits = 0u64;
        loop {
            let minimal = !feasible(support, bits)
                && issues.iter().all(|&j| {
                    let drop = 1u64 << (m - 1 - j);
                    support == drop || feasible(support & !drop, bits & !drop)
                });
            if minimal {
                let x = ev(bits, m);
                let set = IssueSet::from_issues(m, &issues).unwrap();
                out.insert(PartialEvaluation::restrict(&x, set).unwrap());
            }
            // next subset of `support`
            bits = (bits.wrapping_sub(support)) & support;
            if bits == 0 {
                break;
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn weighted_hamming_is_a_metric((m, a, b, c, w) in point_triple()) {
        let w = WeightVector::new(w).unwrap();
        let (a, b, c) = (ev(a, m), ev(b, m), ev(c, m));
        let d = |x: &Evaluation, y: &Evaluation| weighted_hamming(x, y, &w).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(
            is_between(&a, &c, &b).unwrap(),
            d(&a, &b) == d(&a, &c) + d(&c, &b)
        );
    }

    #[test]
    fn mipes_match_brute_force(space in space_strategy(6)) {
        let found: BTreeSet<PartialEvaluation> = space.mipes().iter().map(|a| *a.partial()).collect();
        prop_assert_eq!(&found, &brute_mipes(&space));
        for x in 0..(1u64 << space.m()) {
            let x = ev(x, space.m());
            let covered = space.mipes().iter().any(|a| a.covers(&x));
            prop_assert_eq!(covered, !space.is_feasible(&x).unwrap());
        }
    }

    #[test]
    fn nearest_selection_is_the_best_ranked_minimizer(
        space in space_strategy(7),
        seed in any::<u64>(),
        p in any::<u64>(),
        w in prop::collection::vec(1u64..=4, 7),
    ) {
        let m = space.m();
        let w = WeightVector::new(w[..m].to_vec()).unwrap();
        let ties = TieOrder::shuffled(&space, seed);
        let p = ev(p & ((1u64 << m) - 1), m);
        let best = space
            .feasible()
            .min_by_key(|x| (weighted_hamming(&p, x, &w).unwrap(), ties.rank(&space, x).unwrap()))
            .unwrap();
        prop_assert_eq!(nn_select(&space, &p, &w, &ties).unwrap(), best);
    }

    #[test]
    fn deviation_kinds_nest((m, x, z, y, w) in point_triple()) {
        let w = WeightVector::new(w).unwrap();
        let f = classify_deviation(&ev(x, m), &ev(z, m), &ev(y, m), &w).unwrap();
        prop_assert!(!f.full || f.hamming);
        prop_assert!(!f.hamming || f.partial);
    }

    #[test]
    fn monotone_stage_output_lies_between_truth_and_lied_output(
        rules in prop::collection::vec(0usize..20, 4),
        rows in prop::collection::vec(0u64..16, 3),
        voter in 0usize..3,
        lie in 0u64..16,
    ) {
        let all = IssueRule::all_monotone(3).unwrap();
        let stage = IiaStage::monotone(rules.iter().map(|&r| all[r].clone()).collect()).unwrap();
        let cube = EvaluationSpace::explicit(4, (0..16).map(|b| ev(b, 4))).unwrap();
        let truthful = Profile::new(&cube, rows.iter().map(|&b| ev(b, 4)).collect()).unwrap();
        let lied = truthful.with_row(voter, ev(lie, 4)).unwrap();
        let v = stage_apply(&stage, &truthful).unwrap();
        let u = stage_apply(&stage, &lied).unwrap();
        prop_assert!(is_between(&truthful.row(voter), &v, &u).unwrap());
    }

    #[test]
    fn welfare_maximizer_is_anonymous(
        space in space_strategy(5),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 4),
        shift in 1usize..4,
    ) {
        let rows: Vec<Evaluation> = picks.iter().map(|i| space.get(i.index(space.len()))).collect();
        let mut rotated = rows.clone();
        rotated.rotate_left(shift);
        let agg = Aggregator::swm(&space, 4, WeightVector::uniform(space.m()), TieOrder::ascending(&space)).unwrap();
        let a = agg.apply(&Profile::new(&space, rows).unwrap()).unwrap();
        let b = agg.apply(&Profile::new(&space, rotated).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn parallel_search_finds_the_sequential_witness() {
    use evalagg::builtin::{builtin_space, four_candidate_tie_order};
    use evalagg::manipulate::{find_witness, ManipulationKind, SearchOptions};

    let space = builtin_space("pref4").unwrap();
    let uniform = WeightVector::uniform(6);
    let kind = ManipulationKind::Hamming(uniform.clone());
    for ties in [TieOrder::ascending(&space), four_candidate_tie_order(&space).unwrap()] {
        let agg = Aggregator::nn_corrected(&space, IiaStage::majority(3, 6).unwrap(), uniform.clone(), ties).unwrap();
        let sequential = find_witness(&space, &agg, &kind, SearchOptions::sequential()).unwrap();
        for threads in [1, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let parallel = pool.install(|| find_witness(&space, &agg, &kind, SearchOptions::default()).unwrap());
            assert_eq!(
                parallel.as_ref().map(|w| w.to_string()),
                sequential.as_ref().map(|w| w.to_string())
            );
        }
    }
}
