use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregate::{Aggregate, IiaStage, IssueRule, NnCorrected};
use crate::builtin::{builtin_space, four_candidate_tie_order, tie_battery, weight_battery, BUILTIN_SPACES};
use crate::error::Result;
use crate::manipulate::ManipulationKind;
use crate::metric::WeightVector;
use crate::search::{fill_rows, next_digits};
use crate::space::{between_mask, mask_to_string, mipe_type_mask, EvaluationSpace, Profile};

use super::Check;

/// Random nearest-neighbour configurations in the sweep.
pub const SWEEP_CONFIGURATIONS: usize = 100_000;

pub const SWEEP_SEED: u64 = 0x1e_77a5;

const KEPT_VIOLATIONS: usize = 5;

/// Hamming witnesses of nearest-neighbour corrections from one source and
/// how their stage outputs `v` (truthful) and `u` (lied) relate.
#[derive(Clone, Debug, Default)]
pub struct GeometryFinding {
    pub source: String,
    pub witnesses: u64,
    /// Witnesses with a feasible point in `[v, u]` (first few kept).
    pub interval_violations: Vec<String>,
    pub interval_violation_count: u64,
    /// Witnesses with equal MIPE types for `v` and `u` (first few kept).
    pub type_violations: Vec<String>,
    pub type_violation_count: u64,
}

impl GeometryFinding {
    fn record(&mut self, space: &EvaluationSpace, rows: &[u64], voter: usize, lie: u64, v: u64, u: u64) {
        self.witnesses += 1;
        let m = space.m();
        let describe = || {
            format!(
                "profile {} voter {} lie {} v {} u {}",
                Profile::from_masks(m, rows.to_vec()),
                voter + 1,
                mask_to_string(lie, m),
                mask_to_string(v, m),
                mask_to_string(u, m)
            )
        };
        if space.masks().iter().any(|&c| between_mask(v, c, u)) {
            self.interval_violation_count += 1;
            if self.interval_violations.len() < KEPT_VIOLATIONS {
                self.interval_violations.push(describe());
            }
        }
        let types_differ = !space.contains_mask(v)
            && !space.contains_mask(u)
            && mipe_type_mask(space, v) != mipe_type_mask(space, u);
        if !types_differ {
            self.type_violation_count += 1;
            if self.type_violations.len() < KEPT_VIOLATIONS {
                self.type_violations.push(describe());
            }
        }
    }
}

/// Scans every voter and lie of one profile, recording Hamming witnesses.
fn scan_profile(
    space: &EvaluationSpace,
    nn: &NnCorrected<'_>,
    kind: &ManipulationKind,
    rows: &mut [u64],
    finding: &mut GeometryFinding,
) {
    let z = nn.aggregate(rows);
    let v = nn.stage_output(rows);
    for i in 0..rows.len() {
        let x = rows[i];
        for &y in space.masks() {
            if y == x {
                continue;
            }
            rows[i] = y;
            let w = nn.aggregate(rows);
            if w != z && kind.holds(x, z, w) {
                let u = nn.stage_output(rows);
                rows[i] = x;
                finding.record(space, rows, i, y, v, u);
                rows[i] = y;
            }
        }
        rows[i] = x;
    }
}

fn four_candidate_exhaustive() -> Result<GeometryFinding> {
    let space = builtin_space("pref4").expect("alias");
    let nn = NnCorrected::new(
        &space,
        IiaStage::majority(3, 6)?,
        WeightVector::uniform(6),
        four_candidate_tie_order(&space)?,
    )?;
    let kind = ManipulationKind::Hamming(WeightVector::uniform(6));
    let mut finding = GeometryFinding {
        source: "pref4, majority, four-candidate ties, every profile".into(),
        ..Default::default()
    };
    let xs = space.masks();
    let mut digits = [0usize; 3];
    let mut rows = [0u64; 3];
    loop {
        fill_rows(xs, &digits, &mut rows);
        scan_profile(&space, &nn, &kind, &mut rows, &mut finding);
        if !next_digits(&mut digits, xs.len()) {
            break;
        }
    }
    Ok(finding)
}

fn random_sweep(configurations: usize, seed: u64) -> Result<GeometryFinding> {
    let spaces: Vec<(EvaluationSpace, bool)> = BUILTIN_SPACES
        .iter()
        .map(|&n| (builtin_space(n).expect("alias"), n == "pref4"))
        .collect();
    let batteries: Vec<_> = spaces
        .iter()
        .map(|(s, is4)| (tie_battery(s, *is4), weight_battery(s.m())))
        .collect();
    let rules = IssueRule::all_monotone(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut finding = GeometryFinding {
        source: format!("random sweep, {configurations} configurations, seed {seed:#x}"),
        ..Default::default()
    };
    for _ in 0..configurations {
        let k = rng.random_range(0..spaces.len());
        let (space, _) = &spaces[k];
        let (ties, weights) = &batteries[k];
        let stage = IiaStage::monotone(
            (0..space.m())
                .map(|_| rules[rng.random_range(0..rules.len())].clone())
                .collect(),
        )?;
        let t = &ties[rng.random_range(0..ties.len())];
        let w = &weights[rng.random_range(0..weights.len())];
        let nn = NnCorrected::new(space, stage, w.clone(), t.order.clone())?;
        let kind = ManipulationKind::Hamming(w.clone());
        let mut rows: Vec<u64> = (0..3).map(|_| space.masks()[rng.random_range(0..space.len())]).collect();
        scan_profile(space, &nn, &kind, &mut rows, &mut finding);
    }
    Ok(finding)
}

/// Hamming witnesses of nearest-neighbour corrections: every witness of
/// majority on `pref4` with the four-candidate tie order, then a seeded
/// random sweep over spaces, stages, tie orders, weights and profiles.
pub fn harvest_nn_witnesses(configurations: usize, seed: u64) -> Result<Vec<GeometryFinding>> {
    Ok(vec![four_candidate_exhaustive()?, random_sweep(configurations, seed)?])
}

fn checks_from(findings: &[GeometryFinding], interval: bool) -> Vec<Check> {
    findings
        .iter()
        .map(|f| {
            let (count, kept, what) = if interval {
                (f.interval_violation_count, &f.interval_violations, "feasible point between stage outputs")
            } else {
                (f.type_violation_count, &f.type_violations, "equal MIPE types")
            };
            let label = format!("{}: no witness with {what}", f.source);
            if count == 0 {
                Check::new(label, f.witnesses > 0, format!("{} witnesses, 0 violations", f.witnesses))
            } else {
                let mut evidence = format!("{} witnesses, {count} violations", f.witnesses);
                for k in kept {
                    evidence.push('\n');
                    evidence.push_str(k);
                }
                Check::new(label, false, evidence)
            }
        })
        .collect()
}

pub(super) fn interval_suite() -> Result<Vec<Check>> {
    Ok(checks_from(&harvest_nn_witnesses(SWEEP_CONFIGURATIONS, SWEEP_SEED)?, true))
}

pub(super) fn mipe_type_suite() -> Result<Vec<Check>> {
    Ok(checks_from(&harvest_nn_witnesses(SWEEP_CONFIGURATIONS, SWEEP_SEED)?, false))
}
