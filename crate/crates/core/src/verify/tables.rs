use crate::aggregate::{issuewise_majority, stage_apply, swm, Aggregate, Aggregator, IiaStage};
use crate::builtin::{builtin_space, four_candidate_tie_order};
use crate::error::Result;
use crate::manipulate::classify_deviation;
use crate::metric::{weighted_hamming, TieOrder, WeightVector};
use crate::space::{decode_ranking, Evaluation, EvaluationSpace, Profile, Ranking};

use super::Check;

fn flags(x: &str, z: &str, w: &str) -> Result<String> {
    let (x, z, w): (Evaluation, Evaluation, Evaluation) = (x.parse()?, z.parse()?, w.parse()?);
    let f = classify_deviation(&x, &z, &w, &WeightVector::uniform(x.len()))?;
    let mut names = Vec::new();
    if f.partial {
        names.push("partial");
    }
    if f.hamming {
        names.push("hamming");
    }
    if f.full {
        names.push("full");
    }
    Ok(if names.is_empty() { "none".into() } else { names.join("+") })
}

fn ranking(space: &EvaluationSpace, x: &Evaluation) -> String {
    decode_ranking(space, x).map_or_else(|e| e.to_string(), |r| r.to_string())
}

pub(super) fn run() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let pref3 = builtin_space("pref3").expect("alias");
    let doctrinal = builtin_space("doctrinal").expect("alias");
    let pref4 = builtin_space("pref4").expect("alias");

    // Condorcet and doctrinal paradoxes.
    let maj3 = IiaStage::majority(3, 3)?;
    let p = Profile::from_strings(&pref3, &["110", "011", "101"])?;
    let out = stage_apply(&maj3, &p)?;
    checks.push(Check::expect("three-candidate cycle, issue-wise majority", out, "111"));
    checks.push(Check::expect("three-candidate cycle, majority outcome feasible", pref3.is_feasible(&out)?, false));
    let p = Profile::from_strings(&doctrinal, &["010", "100", "111"])?;
    let out = stage_apply(&maj3, &p)?;
    checks.push(Check::expect("doctrinal profile, issue-wise majority", out, "110"));
    checks.push(Check::expect("doctrinal profile, majority outcome feasible", doctrinal.is_feasible(&out)?, false));

    // Plurality scenarios with lexicographically greatest tie-breaking.
    let plurality = Aggregator::plurality(&pref3, 3, TieOrder::descending(&pref3))?;
    let scenarios = [
        ("plurality profile 1", ["110", "011", "101"], "110"),
        ("plurality profile 2", ["110", "101", "101"], "101"),
        ("plurality profile 3", ["101", "011", "010"], "101"),
        ("plurality profile 3, voter 2 lies", ["101", "010", "010"], "010"),
        ("plurality profile 4", ["101", "011", "001"], "101"),
        ("plurality profile 4, voter 2 lies", ["101", "001", "001"], "001"),
    ];
    for (label, rows, expected) in scenarios {
        let out = plurality.apply(&Profile::from_strings(&pref3, &rows)?)?;
        checks.push(Check::expect(label, out, expected));
    }
    checks.push(Check::expect("deviation 110 -> 101 for truth 011", flags("011", "110", "101")?, "partial"));
    checks.push(Check::expect("deviation 101 -> 010 for truth 011", flags("011", "101", "010")?, "partial+hamming"));
    checks.push(Check::expect(
        "deviation 101 -> 001 for truth 011",
        flags("011", "101", "001")?,
        "partial+hamming+full",
    ));

    // Four candidates: truthful profile and the second judge's lie.
    let judges: Vec<Evaluation> = ["a>b>d>c", "b>c>a>d", "d>c>a>b", "b>c>d>a"]
        .iter()
        .map(|r| crate::space::encode_ranking(&pref4, &r.parse::<Ranking>()?))
        .collect::<Result<_>>()?;
    for (label, x, expected) in [
        ("judge 1 a>b>d>c", judges[0], "110110"),
        ("judge 2 b>c>a>d", judges[1], "011111"),
        ("judge 3 d>c>a>b", judges[2], "101000"),
        ("judge 2 lie b>c>d>a", judges[3], "011011"),
    ] {
        checks.push(Check::expect(format!("encoding of {label}"), x, expected));
    }
    let maj6 = IiaStage::majority(3, 6)?;
    let ties = four_candidate_tie_order(&pref4)?;
    let nn = Aggregator::nn_corrected(&pref4, maj6.clone(), WeightVector::uniform(6), ties)?;
    let truthful = Profile::new(&pref4, judges[..3].to_vec())?;
    let lied = truthful.with_row(1, judges[3])?;
    let v = stage_apply(&maj6, &truthful)?;
    let z = nn.apply(&truthful)?;
    let u = stage_apply(&maj6, &lied)?;
    let w = nn.apply(&lied)?;
    checks.push(Check::expect("four candidates, issue-wise majority", v, "111110"));
    checks.push(Check::expect("four candidates, nearest-neighbour outcome", z, "110110"));
    checks.push(Check::expect("four candidates, outcome ranking", ranking(&pref4, &z), "a>b>d>c"));
    checks.push(Check::expect("second judge lies, issue-wise majority", u, "111010"));
    checks.push(Check::expect("second judge lies, nearest-neighbour outcome", w, "011010"));
    checks.push(Check::expect("second judge lies, outcome ranking", ranking(&pref4, &w), "b>d>c>a"));
    let uniform = WeightVector::uniform(6);
    let truth = judges[1];
    checks.push(Check::expect(
        "second judge distance to outcome, truthful then lying",
        format!("{} -> {}", weighted_hamming(&truth, &z, &uniform)?, weighted_hamming(&truth, &w, &uniform)?),
        "3 -> 2",
    ));

    // Welfare maximizer versus its unrestricted issue-wise minimizer.
    let sep = EvaluationSpace::from_strings(&["110000", "001000", "000111"])?;
    let mk = |counts: [usize; 3]| -> Result<Profile> {
        let rows: Vec<&str> = ["110000", "001000", "000111"]
            .iter()
            .zip(counts)
            .flat_map(|(r, c)| std::iter::repeat_n(*r, c))
            .collect();
        Profile::from_strings(&sep, &rows)
    };
    let uniform6 = WeightVector::uniform(6);
    let asc = TieOrder::ascending(&sep);
    for (label, counts, expected) in [("3/2/4", [3, 2, 4], "000111"), ("3/3/3", [3, 3, 3], "001000")] {
        let p = mk(counts)?;
        checks.push(Check::expect(format!("welfare maximizer on {label} profile"), swm(&sep, &uniform6, &asc, &p)?, expected));
        checks.push(Check::expect(
            format!("unrestricted minimizer on {label} profile"),
            issuewise_majority(&p),
            "000000",
        ));
    }
    Ok(checks)
}
