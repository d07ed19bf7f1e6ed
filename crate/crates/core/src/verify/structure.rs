use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregate::{
    check_structural, issuewise_majority, Aggregate, Aggregator, FnAggregator, IiaStage, IssueRule, Property,
};
use crate::builtin::{builtin_space, partition_battery, sampled_stages, tie_battery, weight_battery, BATTERY_SPACES};
use crate::error::Result;
use crate::manipulate::{find_witness, ManipulationKind, ManipulationWitness, SearchOptions};
use crate::metric::{check_h2, TieOrder};
use crate::search::{fill_rows, next_digits, DEFAULT_BUDGET};
use crate::space::{EvaluationSpace, Profile};

use super::Check;

/// Seed for the random profiles of the permutation-invariance check.
const PERMUTATION_SEED: u64 = 43;

fn spaces() -> Vec<(&'static str, EvaluationSpace)> {
    BATTERY_SPACES
        .iter()
        .map(|&name| (name, builtin_space(name).expect("alias")))
        .collect()
}

fn witness_evidence(config: &str, w: &ManipulationWitness) -> String {
    format!("{config}\n{w}")
}

fn full(space: &EvaluationSpace, agg: &dyn Aggregate) -> Result<Option<ManipulationWitness>> {
    find_witness(space, agg, &ManipulationKind::Full, SearchOptions::default())
}

fn structural(space: &EvaluationSpace, agg: &dyn Aggregate, p: Property) -> Result<crate::aggregate::StructuralReport> {
    check_structural(space, agg, p, DEFAULT_BUDGET)
}

pub(super) fn partitions() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, space) in spaces() {
        for n in [2, 3] {
            let battery = partition_battery(space.m(), n);
            let mut failure = None;
            for (pname, part) in &battery {
                let agg = Aggregator::partition(&space, n, part.clone())?;
                if let Some(w) = full(&space, &agg)? {
                    failure = Some(witness_evidence(&format!("partition {pname}"), &w));
                    break;
                }
            }
            let label = format!("{name}, n={n}, partition aggregators full-free");
            checks.push(match failure {
                None => Check::new(label, true, format!("{} partitions, 0 witnesses", battery.len())),
                Some(e) => Check::new(label, false, e),
            });
        }
    }
    Ok(checks)
}

/// Every monotone IIA stage on three voters and `m` issues, in a fixed
/// order; `20^m` of them.
fn all_stages(m: usize) -> Result<impl Iterator<Item = IiaStage>> {
    let rules = IssueRule::all_monotone(3)?;
    Ok((0..m)
        .map(|_| rules.clone())
        .multi_cartesian_product()
        .map(|rs| IiaStage::monotone(rs).expect("monotone rules")))
}

fn is_consistent(space: &EvaluationSpace, agg: &dyn Aggregate) -> bool {
    let xs = space.masks();
    let mut digits = vec![0usize; agg.voters()];
    let mut rows = vec![0u64; agg.voters()];
    loop {
        fill_rows(xs, &digits, &mut rows);
        if !space.contains_mask(agg.aggregate(&rows)) {
            return false;
        }
        if !next_digits(&mut digits, xs.len()) {
            return true;
        }
    }
}

pub(super) fn pmf() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let partial = ManipulationKind::Partial;
    let opts = SearchOptions::default();

    let doctrinal = builtin_space("doctrinal").expect("alias");
    let un = Aggregator::stage(&doctrinal, IiaStage::unanimity(3, 3)?)?;
    checks.push(Check::new(
        "doctrinal, n=3, unanimity consistent",
        is_consistent(&doctrinal, &un),
        "every profile maps into the space",
    ));
    checks.push(match find_witness(&doctrinal, &un, &partial, opts)? {
        None => Check::new("doctrinal, n=3, unanimity partial-free", true, "0 witnesses"),
        Some(w) => Check::new("doctrinal, n=3, unanimity partial-free", false, w.to_string()),
    });

    let pref3 = builtin_space("pref3").expect("alias");
    let plurality = Aggregator::plurality(&pref3, 3, TieOrder::descending(&pref3))?;
    let iia = structural(&pref3, &plurality, Property::Iia)?;
    checks.push(Check::new("pref3, n=3, plurality not IIA", !iia.holds, iia.to_string()));
    checks.push(match find_witness(&pref3, &plurality, &partial, opts)? {
        Some(w) => Check::new("pref3, n=3, plurality partially manipulable", w.verify(&plurality)?, w.to_string()),
        None => Check::new("pref3, n=3, plurality partially manipulable", false, "no witness found"),
    });

    // Every consistent monotone IIA stage on the three-issue spaces.
    for name in ["pref3", "doctrinal", "cycle6"] {
        let space = builtin_space(name).expect("alias");
        let mut consistent = 0usize;
        let mut failure = None;
        for stage in all_stages(3)? {
            let agg = Aggregator::stage(&space, stage)?;
            if !is_consistent(&space, &agg) {
                continue;
            }
            consistent += 1;
            if let Some(w) = find_witness(&space, &agg, &partial, SearchOptions::sequential())? {
                failure = Some(format!("{:?}\n{w}", agg_rules(&agg)));
                break;
            }
        }
        let label = format!("{name}, n=3, consistent monotone IIA stages partial-free");
        checks.push(match failure {
            None => Check::new(label, consistent > 0, format!("{consistent} consistent of 8000 stages, 0 witnesses")),
            Some(e) => Check::new(label, false, e),
        });
    }

    // Perturbations: wherever IIA or monotonicity visibly fails, a partial
    // manipulation must exist.
    let mut perturbed_hits = Vec::new();
    for (pname, perturbation) in [("non-IIA", 0usize), ("non-monotone", 1)] {
        let mut witnesses = 0;
        let mut mismatch = None;
        for (name, space) in spaces() {
            let m = space.m();
            let maj = IiaStage::majority(3, m)?;
            let top = 1u64 << (m - 1);
            let second = top >> 1;
            let f = FnAggregator::new(m, 3, |rows: &[u64]| {
                let base = maj.apply_masks(rows);
                let ones1 = rows.iter().filter(|&&r| r & top != 0).count();
                let bit1 = match perturbation {
                    // issue 1 needs unanimity when every voter holds issue 2
                    0 => {
                        if rows.iter().all(|&r| r & second != 0) {
                            ones1 == 3
                        } else {
                            ones1 >= 2
                        }
                    }
                    // issue 1 follows the minority
                    _ => ones1 <= 1,
                };
                (base & !top) | if bit1 { top } else { 0 }
            });
            let property = if perturbation == 0 { Property::Iia } else { Property::Monotone };
            let violated = !structural(&space, &f, property)?.holds;
            let witness = find_witness(&space, &f, &partial, opts)?;
            if witness.is_some() {
                witnesses += 1;
            }
            if violated && witness.is_none() {
                mismatch = Some(format!("{name}: {property} fails but no partial witness"));
            }
        }
        let label = format!("{pname} perturbation of majority partially manipulable");
        let passed = mismatch.is_none() && witnesses > 0;
        perturbed_hits.push(Check::new(
            label,
            passed,
            mismatch.unwrap_or_else(|| format!("witnesses on {witnesses} of {} spaces", BATTERY_SPACES.len())),
        ));
    }
    checks.extend(perturbed_hits);
    Ok(checks)
}

fn agg_rules(agg: &Aggregator<'_>) -> String {
    match agg {
        Aggregator::Stage(s) => format!("{:?}", s.rules()),
        _ => String::new(),
    }
}

pub(super) fn nn_full() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, space) in spaces() {
        let m = space.m();
        let ties = tie_battery(&space, false);
        let weights = weight_battery(m);
        let mut stages = vec![("majority".to_string(), IiaStage::majority(3, m)?)];
        stages.extend(sampled_stages(3, m)?);
        for (sname, stage) in &stages {
            let mut failure = None;
            let mut anonymous_ok = true;
            'configs: for t in &ties {
                for w in &weights {
                    let agg = Aggregator::nn_corrected(&space, stage.clone(), w.clone(), t.order.clone())?;
                    if let Some(wit) = full(&space, &agg)? {
                        failure = Some(witness_evidence(&format!("ties {}, weights {w}", t.name), &wit));
                        break 'configs;
                    }
                    if stage.is_anonymous() && !structural(&space, &agg, Property::Anonymous)?.holds {
                        anonymous_ok = false;
                    }
                }
            }
            let configs = ties.len() * weights.len();
            let label = format!("{name}, n=3, nearest-neighbour {sname} full-free");
            checks.push(match failure {
                None => Check::new(label, true, format!("{configs} tie/weight configurations, 0 witnesses")),
                Some(e) => Check::new(label, false, e),
            });
            if stage.is_anonymous() {
                checks.push(Check::new(
                    format!("{name}, n=3, nearest-neighbour {sname} anonymous"),
                    anonymous_ok,
                    format!("{configs} configurations checked"),
                ));
            }
        }
        let mut crossings = Vec::new();
        for t in &ties {
            for w in &weights {
                let table = crate::metric::NearestTable::new(&space, w.clone(), t.order.clone())?;
                let select = |p: &crate::space::Evaluation| table.select(p).expect("same width");
                if let Some(c) = check_h2(select, &space, w)? {
                    crossings.push(format!("ties {}, weights {w}: {c:?}", t.name));
                }
            }
        }
        checks.push(Check::new(
            format!("{name}, tie-broken nearest neighbour never crosses"),
            crossings.is_empty(),
            if crossings.is_empty() {
                format!("{} selectors", ties.len() * weights.len())
            } else {
                crossings.join("\n")
            },
        ));
    }
    Ok(checks)
}

pub(super) fn swm_full() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(PERMUTATION_SEED);
    for (name, space) in spaces() {
        let m = space.m();
        let ties = tie_battery(&space, false);
        let weights = weight_battery(m);
        let mut failure = None;
        let mut anonymous = true;
        let mut correction = true;
        'configs: for t in &ties {
            for w in &weights {
                let agg = Aggregator::swm(&space, 3, w.clone(), t.order.clone())?;
                if let Some(wit) = full(&space, &agg)? {
                    failure = Some(witness_evidence(&format!("ties {}, weights {w}", t.name), &wit));
                    break 'configs;
                }
                anonymous &= structural(&space, &agg, Property::Anonymous)?.holds;
                if w.is_uniform() {
                    correction &= corrects_majority(&space, &agg);
                }
            }
        }
        let configs = ties.len() * weights.len();
        let label = format!("{name}, n=3, welfare maximizer full-free");
        checks.push(match failure {
            None => Check::new(label, true, format!("{configs} tie/weight configurations, 0 witnesses")),
            Some(e) => Check::new(label, false, e),
        });
        checks.push(Check::new(
            format!("{name}, n=3, welfare maximizer anonymous"),
            anonymous,
            format!("{configs} configurations, every profile"),
        ));
        checks.push(Check::new(
            format!("{name}, n=3, welfare maximizer returns feasible issue-wise majority"),
            correction,
            "every profile",
        ));

        // Random profiles with more voters, every row permutation.
        let agg = Aggregator::swm(&space, 4, weights[1].clone(), TieOrder::shuffled(&space, PERMUTATION_SEED))?;
        let mut bad = None;
        for _ in 0..1000 {
            let mut rows: Vec<u64> = (0..4).map(|_| space.masks()[rng.random_range(0..space.len())]).collect();
            let out = agg.aggregate(&rows);
            for _ in 0..4 {
                rows.shuffle(&mut rng);
                if agg.aggregate(&rows) != out {
                    bad = Some(Profile::from_masks(m, rows.clone()).to_string());
                }
            }
        }
        checks.push(Check::new(
            format!("{name}, n=4, welfare maximizer invariant under row shuffles"),
            bad.is_none(),
            bad.unwrap_or_else(|| "1000 random profiles, 4 shuffles each".into()),
        ));
    }
    Ok(checks)
}

fn corrects_majority(space: &EvaluationSpace, agg: &Aggregator<'_>) -> bool {
    let xs = space.masks();
    let mut digits = vec![0usize; 3];
    let mut rows = vec![0u64; 3];
    loop {
        fill_rows(xs, &digits, &mut rows);
        let maj = issuewise_majority(&Profile::from_masks(space.m(), rows.clone())).bits();
        if space.contains_mask(maj) && agg.aggregate(&rows) != maj {
            return false;
        }
        if !next_digits(&mut digits, xs.len()) {
            return true;
        }
    }
}
