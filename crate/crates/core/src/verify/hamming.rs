use itertools::Itertools;
use rayon::prelude::*;

use crate::aggregate::{swm_topk, Aggregate, Aggregator, IiaStage, IssueRule};
use crate::builtin::{builtin_space, four_candidate_tie_order, tie_battery, weight_battery};
use crate::error::Result;
use crate::manipulate::{find_witness, nn_issue_partition, profile_witnesses, ManipulationKind, SearchOptions};
use crate::metric::{TieOrder, WeightVector};
use crate::search::{fill_rows, next_digits};
use crate::space::{Evaluation, EvaluationSpace, Profile};

use super::Check;

pub(super) fn three_candidates() -> Result<Vec<Check>> {
    let space = builtin_space("pref3").expect("alias");
    let rules = IssueRule::all_monotone(3)?;
    let stages: Vec<IiaStage> = (0..3)
        .map(|_| rules.clone())
        .multi_cartesian_product()
        .map(IiaStage::monotone)
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for t in tie_battery(&space, false) {
        for w in weight_battery(3) {
            let kind = ManipulationKind::Hamming(w.clone());
            let found = stages
                .par_iter()
                .map(|stage| -> Result<Option<String>> {
                    let agg = Aggregator::nn_corrected(&space, stage.clone(), w.clone(), t.order.clone())?;
                    Ok(find_witness(&space, &agg, &kind, SearchOptions::sequential())?
                        .map(|wit| format!("stage {:?}\n{wit}", stage.rules())))
                })
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            let label = format!("pref3, n=3, ties {}, weights {w}: every monotone stage Hamming-free", t.name);
            checks.push(match found.transpose()?.flatten() {
                None => Check::new(label, true, format!("{} stages, 0 witnesses", stages.len())),
                Some(e) => Check::new(label, false, e),
            });
        }
    }
    Ok(checks)
}

fn ev(s: &str) -> Evaluation {
    s.parse().expect("literal evaluation")
}

pub(super) fn four_candidates() -> Result<Vec<Check>> {
    let space = builtin_space("pref4").expect("alias");
    let uniform = WeightVector::uniform(6);
    let kind = ManipulationKind::Hamming(uniform.clone());
    let majority = IiaStage::majority(3, 6)?;
    let mut checks = Vec::new();

    let ties = four_candidate_tie_order(&space)?;
    let agg = Aggregator::nn_corrected(&space, majority.clone(), uniform.clone(), ties)?;
    let found = find_witness(&space, &agg, &kind, SearchOptions::default())?;
    checks.push(match &found {
        Some(w) => Check::new(
            "pref4, n=3, majority, four-candidate ties: Hamming witness exists",
            w.verify(&agg)?,
            w.to_string(),
        ),
        None => Check::new("pref4, n=3, majority, four-candidate ties: Hamming witness exists", false, "FREE"),
    });

    let profile = Profile::from_strings(&space, &["110110", "011111", "101000"])?;
    let all = profile_witnesses(&agg, &space, &profile, &kind)?;
    let lie = all.iter().find(|w| w.voter == 1 && w.lie == ev("011011"));
    checks.push(match lie {
        Some(w) => {
            let (dz, dw) = w.distances();
            Check::new(
                "second judge lying b>c>d>a is a Hamming manipulation",
                dz == 3 && dw == 2 && w.truthful_outcome == ev("110110") && w.lied_outcome == ev("011010"),
                format!("z {} w {} distance {dz} -> {dw}", w.truthful_outcome, w.lied_outcome),
            )
        }
        None => Check::new("second judge lying b>c>d>a is a Hamming manipulation", false, "not a witness"),
    });
    if let (Some(w), Some(nn)) = (lie, agg.as_nn_corrected()) {
        let part = nn_issue_partition(nn, w)?;
        checks.push(Check::expect("second judge is pivotal only on issue a>d", part.part(2), "{4}"));
    }

    // Other tie orders: report what the exhaustive hunt finds.
    for t in tie_battery(&space, false) {
        let agg = Aggregator::nn_corrected(&space, majority.clone(), uniform.clone(), t.order)?;
        let outcome = match find_witness(&space, &agg, &kind, SearchOptions::default())? {
            Some(w) => format!(
                "witness: profile {} voter {} lie {} distance {} -> {}",
                w.profile,
                w.voter + 1,
                w.lie,
                w.distances().0,
                w.distances().1
            ),
            None => "FREE".into(),
        };
        checks.push(Check::new(format!("pref4, n=3, majority, ties {}: hunt outcome", t.name), true, outcome));
    }
    Ok(checks)
}

fn topk_agrees(space: &EvaluationSpace, agg: &Aggregator<'_>, order: &[usize]) -> Result<Option<Profile>> {
    let xs = space.masks();
    let mut digits = [0usize; 3];
    let mut rows = [0u64; 3];
    loop {
        fill_rows(xs, &digits, &mut rows);
        let p = Profile::from_masks(space.m(), rows.to_vec());
        if agg.apply(&p)? != swm_topk(space, &p, order)? {
            return Ok(Some(p));
        }
        if !next_digits(&mut digits, xs.len()) {
            return Ok(None);
        }
    }
}

pub(super) fn committee() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for name in ["choose4-2", "choose5-2"] {
        let space = builtin_space(name).expect("alias");
        let m = space.m();
        let order: Vec<usize> = (0..m).collect();
        let ties = TieOrder::by_issue_priority(&space, &order)?;
        let uniform = WeightVector::uniform(m);
        let agg = Aggregator::swm(&space, 3, uniform.clone(), ties)?;
        let kind = ManipulationKind::Hamming(uniform);
        let label = format!("{name}, n=3, welfare maximizer with candidate-order ties Hamming-free");
        checks.push(match find_witness(&space, &agg, &kind, SearchOptions::default())? {
            None => Check::new(label, true, "0 witnesses"),
            Some(w) => Check::new(label, false, w.to_string()),
        });
        let label = format!("{name}, n=3, welfare maximizer picks the top columns");
        checks.push(match topk_agrees(&space, &agg, &order)? {
            None => Check::new(label, true, format!("{} profiles agree", space.len().pow(3))),
            Some(p) => Check::new(label, false, format!("differs on {p}")),
        });
    }
    Ok(checks)
}
