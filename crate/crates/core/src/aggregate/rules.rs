use crate::error::{Error, Result};
use crate::metric::{NearestTable, TieOrder, WeightVector};
use crate::space::{issue_bit, Evaluation, EvaluationSpace, IssueSet, Profile, Provenance};

use super::stage::IiaStage;

/// A map from `n`-voter profiles to evaluations over `m` issues.
///
/// Rows and the result are bit masks (issue 1 most significant). The
/// result is not required to be feasible: raw IIA stages are aggregators
/// into `{0,1}^m`.
pub trait Aggregate: Sync {
    fn issues(&self) -> usize;

    fn voters(&self) -> usize;

    fn aggregate(&self, rows: &[u64]) -> u64;

    fn apply(&self, profile: &Profile) -> Result<Evaluation> {
        if profile.n() != self.voters() {
            return Err(Error::ArityMismatch {
                expected: self.voters(),
                found: profile.n(),
            });
        }
        if profile.m() != self.issues() {
            return Err(Error::LengthMismatch {
                expected: self.issues(),
                found: profile.m(),
            });
        }
        Evaluation::new(self.aggregate(profile.masks()), profile.m())
    }
}

/// Wraps a closure over row masks as an aggregator.
pub struct FnAggregator<F> {
    issues: usize,
    voters: usize,
    f: F,
}

impl<F: Fn(&[u64]) -> u64 + Sync> FnAggregator<F> {
    pub fn new(issues: usize, voters: usize, f: F) -> Self {
        FnAggregator { issues, voters, f }
    }
}

impl<F: Fn(&[u64]) -> u64 + Sync> Aggregate for FnAggregator<F> {
    fn issues(&self) -> usize {
        self.issues
    }

    fn voters(&self) -> usize {
        self.voters
    }

    fn aggregate(&self, rows: &[u64]) -> u64 {
        (self.f)(rows)
    }
}

/// Issue owners of a partition aggregator: `owner[j]` is the voter that
/// issue `j` follows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssuePartition {
    owner: Vec<usize>,
    blocks: usize,
}

impl IssuePartition {
    /// `blocks[i]` lists the (0-based) issues owned by voter `i`; blocks
    /// must be disjoint and cover all `m` issues. Empty blocks are allowed.
    pub fn new(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut owner = vec![usize::MAX; m];
        for (i, block) in blocks.iter().enumerate() {
            for &j in block {
                if j >= m {
                    return Err(Error::InvalidPartition(format!("issue {} exceeds {m}", j + 1)));
                }
                if owner[j] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("issue {} in two blocks", j + 1)));
                }
                owner[j] = i;
            }
        }
        if let Some(j) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!("issue {} not covered", j + 1)));
        }
        Ok(IssuePartition {
            owner,
            blocks: blocks.len(),
        })
    }

    /// `{1..m-1}, {m}`.
    pub fn almost_dictator(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidPartition("almost-dictator needs two issues".into()));
        }
        Self::new(m, &[(0..m - 1).collect(), vec![m - 1]])
    }

    pub fn owner(&self, j: usize) -> usize {
        self.owner[j]
    }

    pub fn issues(&self) -> usize {
        self.owner.len()
    }

    /// Number of blocks (voters beyond this own nothing).
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block(&self, i: usize) -> IssueSet {
        let js: Vec<usize> = (0..self.owner.len()).filter(|&j| self.owner[j] == i).collect();
        IssueSet::from_issues(self.owner.len(), &js).expect("issues in range")
    }
}

#[inline]
fn partition_masks(space: &EvaluationSpace, partition: &IssuePartition, rows: &[u64]) -> u64 {
    let m = space.m();
    let mut prefix = 0u64;
    for j in 0..m {
        let want = rows[partition.owner[j]] >> (m - 1 - j) & 1;
        let cand = (prefix << 1) | want;
        prefix = if space.prefix_feasible(cand, j + 1) {
            cand
        } else {
            debug_assert!(space.prefix_feasible(cand ^ 1, j + 1));
            cand ^ 1
        };
    }
    prefix
}

/// Issues are decided in order `1..m`; each follows its owner unless that
/// makes the prefix infeasible, in which case it takes the other value.
pub fn partition_apply(space: &EvaluationSpace, partition: &IssuePartition, profile: &Profile) -> Result<Evaluation> {
    check_profile(space, profile)?;
    if partition.issues() != space.m() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} issues, space has {}",
            partition.issues(),
            space.m()
        )));
    }
    if partition.blocks() > profile.n() {
        return Err(Error::InvalidPartition(format!(
            "{} blocks for {} voters",
            partition.blocks(),
            profile.n()
        )));
    }
    Ok(space.eval(partition_masks(space, partition, profile.masks())))
}

#[inline]
fn plurality_masks(space: &EvaluationSpace, ties: &TieOrder, rows: &[u64]) -> u64 {
    let mut best = (0usize, u32::MAX);
    let mut best_x = rows[0];
    for (i, &x) in rows.iter().enumerate() {
        if rows[..i].contains(&x) {
            continue;
        }
        let count = rows[i..].iter().filter(|&&y| y == x).count();
        let rank = space.index_of(x).map_or(u32::MAX, |k| ties.rank_of_index(k));
        if count > best.0 || (count == best.0 && rank < best.1) {
            best = (count, rank);
            best_x = x;
        }
    }
    best_x
}

/// The most frequent row; ties go to the best-ranked row under `ties`.
pub fn plurality(space: &EvaluationSpace, profile: &Profile, ties: &TieOrder) -> Result<Evaluation> {
    check_profile(space, profile)?;
    ties.check(space)?;
    Ok(space.eval(plurality_masks(space, ties, profile.masks())))
}

#[inline]
fn swm_masks(space: &EvaluationSpace, weights: &WeightVector, ties: &TieOrder, rows: &[u64]) -> u64 {
    let m = space.m();
    let n = rows.len() as i64;
    // cost(x) = Σ_j ω_j c_j + Σ_{j: x_j = 1} ω_j (n − 2 c_j)
    let mut gain = [0i64; 64];
    for (j, g) in gain.iter_mut().enumerate().take(m) {
        let bit = issue_bit(m, j);
        let c = rows.iter().filter(|&&r| r & bit != 0).count() as i64;
        *g = weights.weight(j) as i64 * (n - 2 * c);
    }
    let mut best = (i64::MAX, u32::MAX);
    let mut best_x = 0;
    for (i, &x) in space.masks().iter().enumerate() {
        let mut cost = 0i64;
        let mut rest = x;
        while rest != 0 {
            let bitpos = rest.trailing_zeros() as usize;
            cost += gain[m - 1 - bitpos];
            rest &= rest - 1;
        }
        let key = (cost, ties.rank_of_index(i));
        if key < best {
            best = key;
            best_x = x;
        }
    }
    best_x
}

/// Hamming social-welfare maximizer: the best-ranked feasible evaluation
/// minimizing the total weighted distance to all rows.
pub fn swm(space: &EvaluationSpace, weights: &WeightVector, ties: &TieOrder, profile: &Profile) -> Result<Evaluation> {
    check_profile(space, profile)?;
    weights.check(space.m())?;
    ties.check(space)?;
    Ok(space.eval(swm_masks(space, weights, ties, profile.masks())))
}

/// On `choose(m, k)` with uniform weights: the `k` issues with the highest
/// column sums, ties going to the earlier issue in `candidate_order`.
pub fn swm_topk(space: &EvaluationSpace, profile: &Profile, candidate_order: &[usize]) -> Result<Evaluation> {
    let k = match space.provenance() {
        Provenance::Choose { k, .. } => *k,
        _ => return Err(Error::WrongSpaceKind { expected: "choose" }),
    };
    check_profile(space, profile)?;
    let m = space.m();
    let mut seen = vec![false; m];
    if candidate_order.len() != m
        || candidate_order.iter().any(|&j| j >= m || std::mem::replace(&mut seen[j], true))
    {
        return Err(Error::InvalidTieOrder(
            "candidate order must be a permutation of the issues".into(),
        ));
    }
    let mut ranked: Vec<(usize, usize)> = candidate_order
        .iter()
        .enumerate()
        .map(|(pos, &j)| (j, pos))
        .collect();
    ranked.sort_by_key(|&(j, pos)| (std::cmp::Reverse(profile.column_sum(j)), pos));
    let bits = ranked[..k].iter().fold(0u64, |acc, &(j, _)| acc | issue_bit(m, j));
    Ok(space.eval(bits))
}

fn check_profile(space: &EvaluationSpace, profile: &Profile) -> Result<()> {
    if profile.m() != space.m() {
        return Err(Error::LengthMismatch {
            expected: space.m(),
            found: profile.m(),
        });
    }
    Ok(())
}

/// A nearest-neighbour correction of a monotone IIA stage: `h ∘ m`.
#[derive(Clone)]
pub struct NnCorrected<'a> {
    stage: IiaStage,
    nearest: NearestTable<'a>,
}

impl<'a> NnCorrected<'a> {
    pub fn new(space: &'a EvaluationSpace, stage: IiaStage, weights: WeightVector, ties: TieOrder) -> Result<Self> {
        if !stage.is_monotone() {
            return Err(Error::InvalidAggregator(
                "nearest-neighbor correction needs a monotone stage".into(),
            ));
        }
        if stage.issues() != space.m() {
            return Err(Error::LengthMismatch {
                expected: space.m(),
                found: stage.issues(),
            });
        }
        Ok(NnCorrected {
            stage,
            nearest: NearestTable::new(space, weights, ties)?,
        })
    }

    pub fn stage(&self) -> &IiaStage {
        &self.stage
    }

    pub fn nearest(&self) -> &NearestTable<'a> {
        &self.nearest
    }

    /// The (possibly infeasible) stage output for `rows`.
    pub fn stage_output(&self, rows: &[u64]) -> u64 {
        self.stage.apply_masks(rows)
    }
}

impl Aggregate for NnCorrected<'_> {
    fn issues(&self) -> usize {
        self.stage.issues()
    }

    fn voters(&self) -> usize {
        self.stage.voters()
    }

    #[inline]
    fn aggregate(&self, rows: &[u64]) -> u64 {
        self.nearest.select_mask(self.stage.apply_masks(rows))
    }
}

/// A concrete aggregator bound to a space and a voter count.
#[derive(Clone)]
pub enum Aggregator<'a> {
    Dictator { voter: usize, issues: usize, voters: usize },
    Stage(IiaStage),
    Plurality { space: &'a EvaluationSpace, ties: TieOrder, voters: usize },
    Partition { space: &'a EvaluationSpace, partition: IssuePartition, voters: usize },
    NnCorrected(NnCorrected<'a>),
    Swm { space: &'a EvaluationSpace, weights: WeightVector, ties: TieOrder, voters: usize },
}

impl<'a> Aggregator<'a> {
    pub fn dictator(space: &EvaluationSpace, voters: usize, voter: usize) -> Result<Self> {
        if voter >= voters {
            return Err(Error::InvalidAggregator(format!(
                "dictator {} outside 1..={voters}",
                voter + 1
            )));
        }
        Ok(Aggregator::Dictator {
            voter,
            issues: space.m(),
            voters,
        })
    }

    pub fn stage(space: &EvaluationSpace, stage: IiaStage) -> Result<Self> {
        stage.check_rows(stage.voters(), space.m())?;
        Ok(Aggregator::Stage(stage))
    }

    pub fn plurality(space: &'a EvaluationSpace, voters: usize, ties: TieOrder) -> Result<Self> {
        ties.check(space)?;
        Ok(Aggregator::Plurality { space, ties, voters })
    }

    pub fn partition(space: &'a EvaluationSpace, voters: usize, partition: IssuePartition) -> Result<Self> {
        if partition.issues() != space.m() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} issues, space has {}",
                partition.issues(),
                space.m()
            )));
        }
        if partition.blocks() > voters {
            return Err(Error::InvalidPartition(format!(
                "{} blocks for {voters} voters",
                partition.blocks()
            )));
        }
        Ok(Aggregator::Partition {
            space,
            partition,
            voters,
        })
    }

    pub fn nn_corrected(space: &'a EvaluationSpace, stage: IiaStage, weights: WeightVector, ties: TieOrder) -> Result<Self> {
        Ok(Aggregator::NnCorrected(NnCorrected::new(space, stage, weights, ties)?))
    }

    pub fn swm(space: &'a EvaluationSpace, voters: usize, weights: WeightVector, ties: TieOrder) -> Result<Self> {
        weights.check(space.m())?;
        ties.check(space)?;
        Ok(Aggregator::Swm {
            space,
            weights,
            ties,
            voters,
        })
    }

    pub fn as_nn_corrected(&self) -> Option<&NnCorrected<'a>> {
        match self {
            Aggregator::NnCorrected(nn) => Some(nn),
            _ => None,
        }
    }
}

impl Aggregate for Aggregator<'_> {
    fn issues(&self) -> usize {
        match self {
            Aggregator::Dictator { issues, .. } => *issues,
            Aggregator::Stage(s) => s.issues(),
            Aggregator::Plurality { space, .. }
            | Aggregator::Partition { space, .. }
            | Aggregator::Swm { space, .. } => space.m(),
            Aggregator::NnCorrected(nn) => nn.issues(),
        }
    }

    fn voters(&self) -> usize {
        match self {
            Aggregator::Dictator { voters, .. }
            | Aggregator::Plurality { voters, .. }
            | Aggregator::Partition { voters, .. }
            | Aggregator::Swm { voters, .. } => *voters,
            Aggregator::Stage(s) => s.voters(),
            Aggregator::NnCorrected(nn) => nn.voters(),
        }
    }

    #[inline]
    fn aggregate(&self, rows: &[u64]) -> u64 {
        match self {
            Aggregator::Dictator { voter, .. } => rows[*voter],
            Aggregator::Stage(s) => s.apply_masks(rows),
            Aggregator::Plurality { space, ties, .. } => plurality_masks(space, ties, rows),
            Aggregator::Partition { space, partition, .. } => partition_masks(space, partition, rows),
            Aggregator::NnCorrected(nn) => nn.aggregate(rows),
            Aggregator::Swm {
                space, weights, ties, ..
            } => swm_masks(space, weights, ties, rows),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, SpaceSpec};

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

    fn run(agg: &dyn Aggregate, space: &EvaluationSpace, rows: &[&str]) -> String {
        agg.apply(&Profile::from_strings(space, rows).unwrap()).unwrap().to_string()
    }

    #[test]
    fn plurality_scenarios() {
        let s = pref3();
        let t = TieOrder::descending(&s);
        let agg = Aggregator::plurality(&s, 3, t).unwrap();
        assert_eq!(run(&agg, &s, &["110", "011", "101"]), "110");
        assert_eq!(run(&agg, &s, &["110", "101", "101"]), "101");
        assert_eq!(run(&agg, &s, &["101", "011", "010"]), "101");
        assert_eq!(run(&agg, &s, &["101", "010", "010"]), "010");
        assert_eq!(run(&agg, &s, &["101", "011", "001"]), "101");
        assert_eq!(run(&agg, &s, &["101", "001", "001"]), "001");
    }

    #[test]
    fn partition_examples() {
        let s = pref3();
        let part = IssuePartition::new(3, &[vec![0, 1], vec![2]]).unwrap();
        let p = Profile::from_strings(&s, &["110", "011"]).unwrap();
        assert_eq!(partition_apply(&s, &part, &p).unwrap().to_string(), "110");
        let p = Profile::from_strings(&s, &["110", "010"]).unwrap();
        assert_eq!(partition_apply(&s, &part, &p).unwrap().to_string(), "110");
        let p = Profile::from_strings(&s, &["100", "011"]).unwrap();
        assert_eq!(partition_apply(&s, &part, &p).unwrap().to_string(), "101");

        // a single block is dictatorship of voter 1
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let whole = IssuePartition::new(3, &[vec![0, 1, 2]]).unwrap();
        for x in d.feasible() {
            for y in d.feasible() {
                let p = Profile::new(&d, vec![x, y]).unwrap();
                assert_eq!(partition_apply(&d, &whole, &p).unwrap(), x);
            }
        }
    }

    #[test]
    fn almost_dictator_first_branch() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let part = IssuePartition::almost_dictator(3).unwrap();
        for x in d.feasible() {
            for y in d.feasible() {
                let p = Profile::new(&d, vec![x, y]).unwrap();
                let mixed = x.with(2, y.get(2));
                let expect = if d.is_feasible(&mixed).unwrap() { mixed } else { x };
                assert_eq!(partition_apply(&d, &part, &p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn partition_validation() {
        assert!(IssuePartition::new(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(IssuePartition::new(3, &[vec![0], vec![2]]).is_err());
        assert!(IssuePartition::new(3, &[vec![0, 3]]).is_err());
        let s = pref3();
        let part = IssuePartition::new(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(Aggregator::partition(&s, 2, part).is_err());
    }

    #[test]
    fn four_candidate_manipulation() {
        let s = pref4();
        let t = TieOrder::ascending(&s);
        let nn = Aggregator::nn_corrected(&s, IiaStage::majority(3, 6).unwrap(), WeightVector::uniform(6), t).unwrap();
        assert_eq!(run(&nn, &s, &["110110", "011111", "101000"]), "110110");
        assert_eq!(run(&nn, &s, &["110110", "011011", "101000"]), "011010");
    }

    #[test]
    fn nn_corrected_is_identity_on_feasible_stage_output() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let un = IiaStage::unanimity(3, 3).unwrap();
        let nn = Aggregator::nn_corrected(&d, un.clone(), WeightVector::uniform(3), TieOrder::descending(&d)).unwrap();
        let st = Aggregator::stage(&d, un).unwrap();
        for a in d.feasible() {
            for b in d.feasible() {
                for c in d.feasible() {
                    let rows = [a.bits(), b.bits(), c.bits()];
                    assert_eq!(nn.aggregate(&rows), st.aggregate(&rows));
                }
            }
        }
    }

    #[test]
    fn nn_corrected_rejects_non_monotone() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let parity = super::super::IssueRule::from_fn(3, |c| c.count_ones() % 2 == 1).unwrap();
        let st = IiaStage::any(vec![parity; 3]).unwrap();
        assert!(Aggregator::nn_corrected(&d, st, WeightVector::uniform(3), TieOrder::ascending(&d)).is_err());
    }

    #[test]
    fn welfare_maximizer_differs_from_unrestricted_minimizer() {
        let s = EvaluationSpace::from_strings(&["110000", "001000", "000111"]).unwrap();
        let u = WeightVector::uniform(6);
        let t = TieOrder::ascending(&s);
        let mk = |a: usize, b: usize, c: usize| {
            let mut rows = vec!["110000"; a];
            rows.extend(vec!["001000"; b]);
            rows.extend(vec!["000111"; c]);
            Profile::from_strings(&s, &rows).unwrap()
        };
        let x = mk(3, 2, 4);
        let y = mk(3, 3, 3);
        assert_eq!(swm(&s, &u, &t, &x).unwrap().to_string(), "000111");
        assert_eq!(swm(&s, &u, &t, &y).unwrap().to_string(), "001000");
        assert_eq!(super::super::issuewise_majority(&x).to_string(), "000000");
        assert_eq!(super::super::issuewise_majority(&y).to_string(), "000000");
    }

    #[test]
    fn swm_unanimous_profile() {
        let s = pref4();
        let t = TieOrder::shuffled(&s, 1);
        let w = WeightVector::new(vec![1, 2, 3, 1, 2, 3]).unwrap();
        for x in s.feasible() {
            let p = Profile::new(&s, vec![x; 3]).unwrap();
            assert_eq!(swm(&s, &w, &t, &p).unwrap(), x);
        }
    }

    #[test]
    fn swm_topk_examples() {
        let s = make_space(&SpaceSpec::Choose { m: 4, k: 2 }).unwrap();
        // column sums (3,1,1,0)
        let p = Profile::from_strings(&s, &["1100", "1010", "1001"]).unwrap();
        assert_eq!(swm_topk(&s, &p, &[0, 1, 2, 3]).unwrap().to_string(), "1100");
        // column sums (2,2,2,0)
        let p = Profile::from_strings(&s, &["1100", "0110", "1010"]).unwrap();
        assert_eq!(swm_topk(&s, &p, &[0, 1, 2, 3]).unwrap().to_string(), "1100");
        assert_eq!(swm_topk(&s, &p, &[2, 1, 0, 3]).unwrap().to_string(), "0110");
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let p = Profile::from_strings(&d, &["000"]).unwrap();
        assert!(matches!(swm_topk(&d, &p, &[0, 1, 2]), Err(Error::WrongSpaceKind { .. })));
    }

    #[test]
    fn swm_topk_agrees_with_swm() {
        let s = make_space(&SpaceSpec::Choose { m: 4, k: 2 }).unwrap();
        let u = WeightVector::uniform(4);
        let t = TieOrder::by_issue_priority(&s, &[0, 1, 2, 3]).unwrap();
        for a in s.feasible() {
            for b in s.feasible() {
                for c in s.feasible() {
                    let p = Profile::new(&s, vec![a, b, c]).unwrap();
                    assert_eq!(swm(&s, &u, &t, &p).unwrap(), swm_topk(&s, &p, &[0, 1, 2, 3]).unwrap());
                }
            }
        }
    }
}
