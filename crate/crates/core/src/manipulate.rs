//! Manipulation predicates and exhaustive witness search.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::aggregate::{Aggregate, NnCorrected};
use crate::error::{Error, Result};
use crate::metric::WeightVector;
use crate::search::{check_budget, decode_digits, fill_rows, next_digits, profile_count, DEFAULT_BUDGET};
use crate::space::{full_mask, issue_bit, Evaluation, EvaluationSpace, IssueSet, Profile};

/// How outcome `w` compares with `z` on one issue, from the voter's view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IssueRelation {
    /// `w` agrees with the voter and `z` does not.
    PreferW,
    /// `z` agrees with the voter and `w` does not.
    PreferZ,
    Indifferent,
}

impl IssueRelation {
    pub fn symbol(self) -> char {
        match self {
            IssueRelation::PreferW => '+',
            IssueRelation::PreferZ => '-',
            IssueRelation::Indifferent => '=',
        }
    }
}

fn same_lens(x: &Evaluation, z: &Evaluation, w: &Evaluation) -> Result<()> {
    x.same_len(z)?;
    x.same_len(w)
}

pub fn issue_relation(x: &Evaluation, z: &Evaluation, w: &Evaluation, j: usize) -> Result<IssueRelation> {
    same_lens(x, z, w)?;
    if j >= x.len() {
        return Err(Error::BitsOutOfRange {
            bits: j as u64 + 1,
            len: x.len(),
        });
    }
    Ok(if w.get(j) == z.get(j) {
        IssueRelation::Indifferent
    } else if w.get(j) == x.get(j) {
        IssueRelation::PreferW
    } else {
        IssueRelation::PreferZ
    })
}

/// Per-issue relation string, e.g. `-==+=+`.
pub fn relation_string(x: &Evaluation, z: &Evaluation, w: &Evaluation) -> Result<String> {
    (0..x.len()).map(|j| issue_relation(x, z, w, j).map(IssueRelation::symbol)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeviationFlags {
    pub partial: bool,
    pub full: bool,
    pub hamming: bool,
}

#[inline]
fn gains(x: u64, z: u64, w: u64) -> u64 {
    (w ^ z) & !(w ^ x)
}

#[inline]
fn losses(x: u64, z: u64, w: u64) -> u64 {
    (w ^ z) & !(z ^ x)
}

/// Which kinds of manipulation moving the outcome from `z` to `w` is for a
/// voter whose true opinion is `x`.
pub fn classify_deviation(x: &Evaluation, z: &Evaluation, w: &Evaluation, weights: &WeightVector) -> Result<DeviationFlags> {
    same_lens(x, z, w)?;
    weights.check(x.len())?;
    let (x, z, w) = (x.bits(), z.bits(), w.bits());
    let partial = gains(x, z, w) != 0;
    Ok(DeviationFlags {
        partial,
        full: partial && losses(x, z, w) == 0,
        hamming: weights.distance(x, w) < weights.distance(x, z),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ManipulationKind {
    Partial,
    Full,
    Hamming(WeightVector),
}

impl ManipulationKind {
    #[inline]
    pub(crate) fn holds(&self, x: u64, z: u64, w: u64) -> bool {
        match self {
            ManipulationKind::Partial => gains(x, z, w) != 0,
            ManipulationKind::Full => gains(x, z, w) != 0 && losses(x, z, w) == 0,
            ManipulationKind::Hamming(wv) => {
                if wv.is_uniform() {
                    ((x ^ w).count_ones()) < ((x ^ z).count_ones())
                } else {
                    wv.distance(x, w) < wv.distance(x, z)
                }
            }
        }
    }

    /// Parses `partial`, `full` or `hamming`; Hamming takes `weights`.
    pub fn parse(s: &str, weights: WeightVector) -> Result<Self> {
        match s {
            "partial" => Ok(ManipulationKind::Partial),
            "full" => Ok(ManipulationKind::Full),
            "hamming" => Ok(ManipulationKind::Hamming(weights)),
            _ => Err(Error::InvalidAggregator(format!("unknown manipulation kind `{s}`"))),
        }
    }

    fn weights_for(&self, m: usize) -> WeightVector {
        match self {
            ManipulationKind::Hamming(w) => w.clone(),
            _ => WeightVector::uniform(m),
        }
    }
}

impl fmt::Display for ManipulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManipulationKind::Partial => f.write_str("partial"),
            ManipulationKind::Full => f.write_str("full"),
            ManipulationKind::Hamming(w) if w.is_uniform() => f.write_str("hamming"),
            ManipulationKind::Hamming(w) => write!(f, "hamming ({w})"),
        }
    }
}

/// A voter, a lie, and the two outcomes showing the lie pays off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub profile: Profile,
    pub voter: usize,
    pub lie: Evaluation,
    pub truthful_outcome: Evaluation,
    pub lied_outcome: Evaluation,
    pub kind: ManipulationKind,
}

impl ManipulationWitness {
    pub fn truth(&self) -> Evaluation {
        self.profile.row(self.voter)
    }

    /// The profile with the voter's row replaced by the lie.
    pub fn lied_profile(&self) -> Profile {
        let mut rows = self.profile.masks().to_vec();
        rows[self.voter] = self.lie.bits();
        Profile::from_masks(self.profile.m(), rows)
    }

    pub fn relations(&self) -> String {
        relation_string(&self.truth(), &self.truthful_outcome, &self.lied_outcome).expect("equal widths")
    }

    /// Weighted distances from the truth to the truthful and lied outcomes.
    pub fn distances(&self) -> (u64, u64) {
        let w = self.kind.weights_for(self.profile.m());
        let x = self.truth().bits();
        (
            w.distance(x, self.truthful_outcome.bits()),
            w.distance(x, self.lied_outcome.bits()),
        )
    }

    /// Checks the witness against `agg`: both outcomes recomputed and the
    /// kind's predicate re-evaluated.
    pub fn verify(&self, agg: &dyn Aggregate) -> Result<bool> {
        let z = agg.apply(&self.profile)?;
        let w = agg.apply(&self.lied_profile())?;
        Ok(z == self.truthful_outcome
            && w == self.lied_outcome
            && self.kind.holds(self.truth().bits(), z.bits(), w.bits()))
    }
}

impl fmt::Display for ManipulationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (dz, dw) = self.distances();
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "profile: {}", self.profile)?;
        writeln!(f, "voter: {}", self.voter + 1)?;
        writeln!(f, "truth: {}", self.truth())?;
        writeln!(f, "lie: {}", self.lie)?;
        writeln!(f, "z: {}", self.truthful_outcome)?;
        writeln!(f, "w: {}", self.lied_outcome)?;
        writeln!(f, "relation: {}", self.relations())?;
        writeln!(f, "d(truth, z): {dz}")?;
        write!(f, "d(truth, w): {dw}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum aggregator evaluations.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            parallel: true,
        }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions {
            parallel: false,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Free,
    Manipulable(ManipulationWitness),
}

impl Certificate {
    pub fn is_free(&self) -> bool {
        matches!(self, Certificate::Free)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Free => f.write_str("FREE"),
            Certificate::Manipulable(w) => w.fmt(f),
        }
    }
}

/// Aggregator evaluations needed to scan every (profile, voter, lie).
pub fn search_cost(space: &EvaluationSpace, voters: usize) -> u128 {
    profile_count(space.len(), voters).saturating_mul(1 + (voters * space.len().saturating_sub(1)) as u128)
}

// Below this many profiles the search stays on the calling thread.
const PARALLEL_THRESHOLD: u128 = 4096;

struct Hunt<'a> {
    space: &'a EvaluationSpace,
    agg: &'a dyn Aggregate,
    kind: &'a ManipulationKind,
    n: usize,
}

impl Hunt<'_> {
    /// First (voter, lie, z, w) for the profile in `rows`.
    #[inline]
    fn scan(&self, rows: &mut [u64]) -> Option<(usize, u64, u64, u64)> {
        let z = self.agg.aggregate(rows);
        for i in 0..self.n {
            let x = rows[i];
            for &y in self.space.masks() {
                if y == x {
                    continue;
                }
                rows[i] = y;
                let w = self.agg.aggregate(rows);
                if w != z && self.kind.holds(x, z, w) {
                    rows[i] = x;
                    return Some((i, y, z, w));
                }
            }
            rows[i] = x;
        }
        None
    }

    fn witness(&self, rows: Vec<u64>, (voter, y, z, w): (usize, u64, u64, u64)) -> ManipulationWitness {
        let m = self.space.m();
        ManipulationWitness {
            profile: Profile::from_masks(m, rows),
            voter,
            lie: Evaluation::new(y, m).expect("feasible width"),
            truthful_outcome: Evaluation::new(z, m).expect("feasible width"),
            lied_outcome: Evaluation::new(w, m).expect("feasible width"),
            kind: self.kind.clone(),
        }
    }

    fn sequential(&self, mut visit: impl FnMut(ManipulationWitness) -> bool) {
        let xs = self.space.masks();
        let mut digits = vec![0usize; self.n];
        let mut rows = vec![0u64; self.n];
        loop {
            fill_rows(xs, &digits, &mut rows);
            if let Some(hit) = self.scan(&mut rows) {
                if !visit(self.witness(rows.clone(), hit)) {
                    return;
                }
            }
            if !next_digits(&mut digits, xs.len()) {
                return;
            }
        }
    }

    fn parallel_first(&self, total: u64) -> Option<ManipulationWitness> {
        let xs = self.space.masks();
        (0..total)
            .into_par_iter()
            .map_init(
                || (vec![0usize; self.n], vec![0u64; self.n]),
                |(digits, rows), index| {
                    decode_digits(index, xs.len(), digits);
                    fill_rows(xs, digits, rows);
                    self.scan(rows).map(|hit| (rows.clone(), hit))
                },
            )
            .find_map_first(|found| found)
            .map(|(rows, hit)| self.witness(rows, hit))
    }
}

fn prepare<'a>(
    space: &'a EvaluationSpace,
    agg: &'a dyn Aggregate,
    kind: &'a ManipulationKind,
    budget: u64,
) -> Result<Hunt<'a>> {
    if agg.issues() != space.m() {
        return Err(Error::LengthMismatch {
            expected: space.m(),
            found: agg.issues(),
        });
    }
    if let ManipulationKind::Hamming(w) = kind {
        w.check(space.m())?;
    }
    let n = agg.voters();
    check_budget(search_cost(space, n), budget)?;
    Ok(Hunt { space, agg, kind, n })
}

/// The canonically first manipulation of `kind`: profiles in canonical
/// order, then voters ascending, then lies ascending. `None` means the
/// aggregator is free of such manipulations on this space and voter count.
pub fn find_witness(
    space: &EvaluationSpace,
    agg: &dyn Aggregate,
    kind: &ManipulationKind,
    options: SearchOptions,
) -> Result<Option<ManipulationWitness>> {
    let hunt = prepare(space, agg, kind, options.budget)?;
    let total = profile_count(space.len(), hunt.n);
    if options.parallel && total >= PARALLEL_THRESHOLD {
        return Ok(hunt.parallel_first(total as u64));
    }
    let mut first = None;
    hunt.sequential(|w| {
        first = Some(w);
        false
    });
    Ok(first)
}

pub fn certify(
    space: &EvaluationSpace,
    agg: &dyn Aggregate,
    kind: &ManipulationKind,
    options: SearchOptions,
) -> Result<Certificate> {
    Ok(match find_witness(space, agg, kind, options)? {
        None => Certificate::Free,
        Some(w) => Certificate::Manipulable(w),
    })
}

/// Up to `limit` witnesses, at most one per profile, in canonical order.
pub fn collect_witnesses(
    space: &EvaluationSpace,
    agg: &dyn Aggregate,
    kind: &ManipulationKind,
    limit: usize,
    budget: u64,
) -> Result<Vec<ManipulationWitness>> {
    let hunt = prepare(space, agg, kind, budget)?;
    let mut out = Vec::new();
    if limit > 0 {
        hunt.sequential(|w| {
            out.push(w);
            out.len() < limit
        });
    }
    Ok(out)
}

/// Every successful lie of `kind` in one profile, voters then lies ascending.
pub fn profile_witnesses(agg: &dyn Aggregate, space: &EvaluationSpace, profile: &Profile, kind: &ManipulationKind) -> Result<Vec<ManipulationWitness>> {
    let z = agg.apply(profile)?;
    let mut out = Vec::new();
    for i in 0..profile.n() {
        let x = profile.row(i);
        for y in space.feasible().filter(|&y| y != x) {
            let w = agg.apply(&profile.with_row(i, y)?)?;
            if w != z && kind.holds(x.bits(), z.bits(), w.bits()) {
                out.push(ManipulationWitness {
                    profile: profile.clone(),
                    voter: i,
                    lie: y,
                    truthful_outcome: z,
                    lied_outcome: w,
                    kind: kind.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// The twelve issue sets `A_tk` of a deviation through a nearest-neighbour
/// correction. `t` splits issues by truth `x` against the stage outputs
/// `v = m(x)`, `u = m(y)`: (1) `x = v = u`, (2) `x = v ≠ u`, (3) `x ≠ v = u`.
/// `k` splits by truth against the outcomes `f(x)`, `f(y)`: (1) both agree,
/// (2) only `f(x)` agrees, (3) only `f(y)` agrees, (4) neither.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationPartition {
    sets: [[IssueSet; 4]; 3],
}

impl DeviationPartition {
    /// `A_tk` with `t` in `1..=3` and `k` in `1..=4`.
    pub fn get(&self, t: usize, k: usize) -> IssueSet {
        self.sets[t - 1][k - 1]
    }

    /// `A_t` = union over `k`.
    pub fn part(&self, t: usize) -> IssueSet {
        let s = &self.sets[t - 1];
        let mask = s.iter().fold(0, |acc, a| acc | a.mask());
        IssueSet::from_mask(mask, s[0].ambient())
    }

    pub fn sets(&self) -> impl Iterator<Item = (usize, usize, IssueSet)> + '_ {
        (1..=3).flat_map(move |t| (1..=4).map(move |k| (t, k, self.get(t, k))))
    }
}

impl fmt::Display for DeviationPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.sets().map(|(t, k, a)| format!("A{t}{k} {a}")).collect();
        f.write_str(&lines.join("\n"))
    }
}

/// Splits the issues of `witness` given the stage outputs `v` (truthful)
/// and `u` (lied). Fails when some issue has `x ≠ v ≠ u`, which no
/// monotone IIA stage produces.
pub fn issue_partition(witness: &ManipulationWitness, v: &Evaluation, u: &Evaluation) -> Result<DeviationPartition> {
    let x = witness.truth();
    x.same_len(v)?;
    x.same_len(u)?;
    let m = x.len();
    let (x, v, u) = (x.bits(), v.bits(), u.bits());
    let (fx, fy) = (witness.truthful_outcome.bits(), witness.lied_outcome.bits());
    let full = full_mask(m);
    let parts = [!(x ^ v) & !(v ^ u), !(x ^ v) & (v ^ u), (x ^ v) & !(v ^ u)];
    let covered = parts.iter().fold(0, |acc, p| acc | p) & full;
    if covered != full {
        let j = (0..m).find(|&j| covered & issue_bit(m, j) == 0).expect("uncovered issue");
        return Err(Error::NotNnWitness(format!(
            "issue {} has truth, truthful and lied stage outputs all different in turn",
            j + 1
        )));
    }
    let subs = [!(x ^ fx) & !(x ^ fy), !(x ^ fx) & (x ^ fy), (x ^ fx) & !(x ^ fy), (x ^ fx) & (x ^ fy)];
    let sets = parts.map(|p| subs.map(|s| IssueSet::from_mask(p & s & full, m)));
    Ok(DeviationPartition { sets })
}

/// [`issue_partition`] with the stage outputs recomputed from `nn`.
pub fn nn_issue_partition(nn: &NnCorrected<'_>, witness: &ManipulationWitness) -> Result<DeviationPartition> {
    let (v, u) = nn_stage_outputs(nn, witness)?;
    issue_partition(witness, &v, &u)
}

/// Stage outputs `(m(x), m(y))` of a witness found for `nn`.
pub fn nn_stage_outputs(nn: &NnCorrected<'_>, witness: &ManipulationWitness) -> Result<(Evaluation, Evaluation)> {
    if !witness.verify(nn)? {
        return Err(Error::NotNnWitness(
            "outcomes do not match the nearest-neighbor aggregator".into(),
        ));
    }
    let m = witness.profile.m();
    let v = nn.stage_output(witness.profile.masks());
    let u = nn.stage_output(witness.lied_profile().masks());
    Ok((Evaluation::new(v, m)?, Evaluation::new(u, m)?))
}

impl FromStr for SearchOptions {
    type Err = Error;

    /// A bare budget number.
    fn from_str(s: &str) -> Result<Self> {
        let budget = s
            .trim()
            .replace('_', "")
            .parse::<f64>()
            .ok()
            .filter(|b| b.is_finite() && *b >= 1.0 && *b <= u64::MAX as f64)
            .ok_or_else(|| Error::InvalidAggregator(format!("bad budget `{s}`")))?;
        Ok(SearchOptions {
            budget: budget as u64,
            ..Self::default()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{Aggregator, IiaStage};
    use crate::metric::TieOrder;
    use crate::space::{make_space, SpaceSpec};

    fn e(s: &str) -> Evaluation {
        s.parse().unwrap()
    }

    fn pref3() -> EvaluationSpace {
        make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap()
    }

    fn pref4() -> EvaluationSpace {
        make_space(&SpaceSpec::Pref {
            k: 4,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]),
        })
        .unwrap()
    }

    #[test]
    fn relations() {
        assert_eq!(issue_relation(&e("011"), &e("101"), &e("001"), 0).unwrap(), IssueRelation::PreferW);
        assert_eq!(issue_relation(&e("011"), &e("110"), &e("101"), 1).unwrap(), IssueRelation::PreferZ);
        assert_eq!(issue_relation(&e("011"), &e("110"), &e("101"), 0).unwrap(), IssueRelation::Indifferent);
        assert_eq!(relation_string(&e("011"), &e("110"), &e("101")).unwrap(), "=-+");
    }

    #[test]
    fn plurality_scenarios() {
        let u = WeightVector::uniform(3);
        let f = classify_deviation(&e("011"), &e("110"), &e("101"), &u).unwrap();
        assert_eq!((f.partial, f.hamming, f.full), (true, false, false));
        let f = classify_deviation(&e("011"), &e("101"), &e("010"), &u).unwrap();
        assert_eq!((f.partial, f.hamming, f.full), (true, true, false));
        let f = classify_deviation(&e("011"), &e("101"), &e("001"), &u).unwrap();
        assert_eq!((f.partial, f.hamming, f.full), (true, true, true));
        let f = classify_deviation(&e("011"), &e("101"), &e("101"), &u).unwrap();
        assert_eq!(f, DeviationFlags::default());
    }

    #[test]
    fn dictator_is_free() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let dict = Aggregator::dictator(&d, 3, 0).unwrap();
        for kind in [ManipulationKind::Partial, ManipulationKind::Full, ManipulationKind::Hamming(WeightVector::uniform(3))] {
            assert!(certify(&d, &dict, &kind, SearchOptions::default()).unwrap().is_free());
        }
    }

    #[test]
    fn plurality_witness_is_reproducible() {
        let s = pref3();
        let plu = Aggregator::plurality(&s, 3, TieOrder::descending(&s)).unwrap();
        let kind = ManipulationKind::Partial;
        let a = find_witness(&s, &plu, &kind, SearchOptions::default()).unwrap().unwrap();
        let b = find_witness(&s, &plu, &kind, SearchOptions::sequential()).unwrap().unwrap();
        assert_eq!(a, b);
        assert!(a.verify(&plu).unwrap());
        let all = collect_witnesses(&s, &plu, &kind, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(all[0], a);
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn parallel_matches_sequential_on_large_search() {
        let s = pref4();
        let nn = Aggregator::nn_corrected(&s, IiaStage::majority(3, 6).unwrap(), WeightVector::uniform(6), TieOrder::ascending(&s)).unwrap();
        let kind = ManipulationKind::Hamming(WeightVector::uniform(6));
        let a = find_witness(&s, &nn, &kind, SearchOptions::default()).unwrap();
        let b = find_witness(&s, &nn, &kind, SearchOptions::sequential()).unwrap();
        assert_eq!(a, b);
        assert!(a.is_some());
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let s = pref4();
        let nn = Aggregator::nn_corrected(&s, IiaStage::majority(3, 6).unwrap(), WeightVector::uniform(6), TieOrder::ascending(&s)).unwrap();
        let opts = SearchOptions {
            budget: 1000,
            parallel: false,
        };
        assert!(matches!(
            find_witness(&s, &nn, &ManipulationKind::Full, opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn four_candidate_deviation_partition() {
        let s = pref4();
        let ties = TieOrder::preferring(&s, &[e("110110"), e("010110"), e("101111")]).unwrap();
        let nn = NnCorrected::new(&s, IiaStage::majority(3, 6).unwrap(), WeightVector::uniform(6), ties).unwrap();
        let profile = Profile::from_strings(&s, &["110110", "011111", "101000"]).unwrap();
        let found = profile_witnesses(&nn, &s, &profile, &ManipulationKind::Hamming(WeightVector::uniform(6))).unwrap();
        let w = found.iter().find(|w| w.voter == 1 && w.lie == e("011011")).unwrap();
        assert_eq!(w.distances(), (3, 2));
        let part = nn_issue_partition(&nn, w).unwrap();
        assert_eq!(part.part(2).to_string(), "{4}");
        let union = part.sets().fold(0u64, |acc, (_, _, a)| {
            assert_eq!(acc & a.mask(), 0);
            acc | a.mask()
        });
        assert_eq!(union, full_mask(6));
    }

    #[test]
    fn witness_report_format() {
        let s = pref3();
        let plu = Aggregator::plurality(&s, 3, TieOrder::descending(&s)).unwrap();
        let p = Profile::from_strings(&s, &["110", "011", "101"]).unwrap();
        let ws = profile_witnesses(&plu, &s, &p, &ManipulationKind::Partial).unwrap();
        let w = ws.iter().find(|w| w.voter == 1 && w.lie == e("101")).unwrap();
        assert_eq!(
            w.to_string(),
            "kind: partial\nprofile: 110 011 101\nvoter: 2\ntruth: 011\nlie: 101\nz: 110\nw: 101\nrelation: =-+\nd(truth, z): 2\nd(truth, w): 2"
        );
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("1e6".parse::<SearchOptions>().unwrap().budget, 1_000_000);
        assert_eq!("5_000".parse::<SearchOptions>().unwrap().budget, 5000);
        assert!("0".parse::<SearchOptions>().is_err());
        assert!("many".parse::<SearchOptions>().is_err());
    }
}
