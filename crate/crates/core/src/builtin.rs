//! Named spaces, tie orders and parameter batteries used by the suites.

use crate::aggregate::{IiaStage, IssuePartition, IssueRule};
use crate::error::Result;
use crate::metric::{TieOrder, WeightVector};
use crate::space::{make_space, Evaluation, EvaluationSpace, SpaceSpec};

/// Seed of the shuffled tie order in the tie battery.
pub const SHUFFLE_SEED: u64 = 0x5eed_2012;

/// Names accepted by [`builtin_space`].
pub const BUILTIN_SPACES: [&str; 7] = ["pref3", "pref4", "doctrinal", "classifier4", "cycle6", "choose4-2", "choose5-2"];

/// The small spaces every exhaustive battery runs on.
pub const BATTERY_SPACES: [&str; 5] = ["pref3", "doctrinal", "classifier4", "cycle6", "choose4-2"];

/// Issue order `a≻b, b≻c, c≻a`.
pub const PREF3_ORIENTATION: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Issue order `a≻b, b≻c, c≻a, a≻d, b≻d, c≻d`.
pub const PREF4_ORIENTATION: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)];

pub fn builtin_space(name: &str) -> Option<EvaluationSpace> {
    let spec = match name {
        "pref3" => SpaceSpec::Pref {
            k: 3,
            orientation: Some(PREF3_ORIENTATION.to_vec()),
        },
        "pref4" => SpaceSpec::Pref {
            k: 4,
            orientation: Some(PREF4_ORIENTATION.to_vec()),
        },
        "doctrinal" => SpaceSpec::Doctrinal,
        "classifier4" => SpaceSpec::Explicit {
            m: 4,
            members: (0u64..16)
                .filter(|&x| x != 0b0110 && x != 0b1001)
                .map(|x| Evaluation::new(x, 4).expect("4 issues"))
                .collect(),
        },
        "cycle6" => SpaceSpec::Cycle { vertices: 6 },
        "choose4-2" => SpaceSpec::Choose { m: 4, k: 2 },
        "choose5-2" => SpaceSpec::Choose { m: 5, k: 2 },
        _ => return None,
    };
    Some(make_space(&spec).expect("built-in generators are valid"))
}

fn ev(s: &str) -> Evaluation {
    s.parse().expect("literal evaluation")
}

/// On `pref4`: `a≻b≻d≻c`, then `b≻a≻d≻c`, then `c≻a≻b≻d`, then the rest
/// ascending. Breaks the three-way tie around `111110` toward `a≻b≻d≻c`.
pub fn four_candidate_tie_order(pref4: &EvaluationSpace) -> Result<TieOrder> {
    TieOrder::preferring(pref4, &[ev("110110"), ev("010110"), ev("101111")])
}

/// A labelled tie order.
#[derive(Clone, Debug)]
pub struct NamedTieOrder {
    pub name: String,
    pub order: TieOrder,
}

/// Ascending, descending and seeded-shuffle orders, plus the
/// four-candidate order when `space` is `pref4`.
pub fn tie_battery(space: &EvaluationSpace, is_pref4: bool) -> Vec<NamedTieOrder> {
    let mut out = vec![
        NamedTieOrder {
            name: "ascending".into(),
            order: TieOrder::ascending(space),
        },
        NamedTieOrder {
            name: "descending".into(),
            order: TieOrder::descending(space),
        },
        NamedTieOrder {
            name: format!("shuffled(seed={SHUFFLE_SEED:#x})"),
            order: TieOrder::shuffled(space, SHUFFLE_SEED),
        },
    ];
    if is_pref4 {
        out.push(NamedTieOrder {
            name: "four-candidate".into(),
            order: four_candidate_tie_order(space).expect("pref4 fixture"),
        });
    }
    out
}

/// Uniform, first issue doubled, last issue doubled.
pub fn weight_battery(m: usize) -> Vec<WeightVector> {
    let mut first = vec![1; m];
    first[0] = 2;
    let mut last = vec![1; m];
    last[m - 1] = 2;
    vec![
        WeightVector::uniform(m),
        WeightVector::new(first).expect("positive"),
        WeightVector::new(last).expect("positive"),
    ]
}

/// Partitions of `m` issues among `n` voters: a single block, the
/// almost-dictator, issue `j` to voter `j mod n`, the same reversed, and
/// for `n = 3` the split `{1}, {2}, {3..m}`.
pub fn partition_battery(m: usize, n: usize) -> Vec<(String, IssuePartition)> {
    let mut out = Vec::new();
    let mut push = |name: &str, blocks: Vec<Vec<usize>>| {
        let p = IssuePartition::new(m, &blocks).expect("valid partition");
        if !out.iter().any(|(_, q)| *q == p) {
            out.push((name.to_string(), p));
        }
    };
    push("single block", vec![(0..m).collect()]);
    if m >= 2 && n >= 2 {
        push("almost-dictator", vec![(0..m - 1).collect(), vec![m - 1]]);
    }
    let interleaved: Vec<Vec<usize>> = (0..n).map(|i| (0..m).filter(|j| j % n == i).collect()).collect();
    push("interleaved", interleaved.clone());
    push("interleaved reversed", interleaved.into_iter().rev().collect());
    if n == 3 && m >= 3 {
        push("singletons then rest", vec![vec![0], vec![1], (2..m).collect()]);
    }
    out
}

/// Five fixed monotone stages on `n` voters and `m` issues, for `n ≤ 4`:
/// unanimity, the constant-1 quota, a dictator-like rule, alternating
/// majority and unanimity, and a mixed per-issue cycle through all
/// monotone rules.
pub fn sampled_stages(n: usize, m: usize) -> Result<Vec<(String, IiaStage)>> {
    let all = IssueRule::all_monotone(n)?;
    let dictator = IssueRule::from_fn(n, |c| c >> (n - 1) & 1 != 0)?;
    let maj = IssueRule::quota(n, (n + 2) / 2)?;
    let un = IssueRule::quota(n, n)?;
    Ok(vec![
        ("unanimity".into(), IiaStage::unanimity(n, m)?),
        ("quota 1".into(), IiaStage::quota(n, &vec![1; m])?),
        ("voter-1 rule".into(), IiaStage::monotone(vec![dictator; m])?),
        (
            "majority/unanimity".into(),
            IiaStage::monotone((0..m).map(|j| if j % 2 == 0 { maj.clone() } else { un.clone() }).collect())?,
        ),
        (
            "mixed".into(),
            IiaStage::monotone((0..m).map(|j| all[(7 * j + 3) % all.len()].clone()).collect())?,
        ),
    ])
}
