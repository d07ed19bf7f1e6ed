use std::fmt;

use crate::error::{Error, Result};
use crate::space::{issue_bit, Evaluation, Profile};

/// Largest voter count for truth-table issue rules.
pub const MAX_STAGE_VOTERS: usize = 20;

/// Largest voter count for which [`IssueRule::all_monotone`] can enumerate.
pub const MAX_ENUMERABLE_VOTERS: usize = 4;

/// A boolean function `{0,1}^n → {0,1}` deciding one issue from its column.
///
/// Column values are bit masks with voter 1 in the most significant
/// position, matching the row convention for evaluations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IssueRule {
    voters: usize,
    table: Vec<u64>,
}

impl IssueRule {
    pub fn from_fn(voters: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        if voters == 0 || voters > MAX_STAGE_VOTERS {
            return Err(Error::InvalidRule(format!(
                "voter count {voters} outside 1..={MAX_STAGE_VOTERS}"
            )));
        }
        let size = 1usize << voters;
        let mut table = vec![0u64; size.div_ceil(64)];
        for col in 0..size as u64 {
            if f(col) {
                table[(col >> 6) as usize] |= 1 << (col & 63);
            }
        }
        Ok(IssueRule { voters, table })
    }

    /// `[#ones ≥ threshold]`; threshold `n + 1` is the constant 0 and
    /// threshold 0 the constant 1.
    pub fn quota(voters: usize, threshold: usize) -> Result<Self> {
        if threshold > voters + 1 {
            return Err(Error::InvalidRule(format!(
                "threshold {threshold} outside 0..={}",
                voters + 1
            )));
        }
        Self::from_fn(voters, |col| col.count_ones() as usize >= threshold)
    }

    /// Rule whose truth table for `n ≤ 6` is the low `2^n` bits of `bits`.
    pub fn from_truth_table(voters: usize, bits: u64) -> Result<Self> {
        if voters > 6 {
            return Err(Error::InvalidRule("truth table word holds at most 6 voters".into()));
        }
        Self::from_fn(voters, |col| bits >> col & 1 != 0)
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    #[inline]
    pub fn eval(&self, column: u64) -> bool {
        self.table[(column >> 6) as usize] >> (column & 63) & 1 != 0
    }

    /// Raising any single voter's bit never lowers the output.
    pub fn is_monotone(&self) -> bool {
        let size = 1u64 << self.voters;
        (0..size).all(|col| {
            !self.eval(col)
                || (0..self.voters).all(|i| {
                    let up = col | (1 << i);
                    self.eval(up)
                })
        })
    }

    /// Output depends only on the number of ones in the column.
    pub fn is_symmetric(&self) -> bool {
        let size = 1u64 << self.voters;
        let mut by_count: Vec<Option<bool>> = vec![None; self.voters + 1];
        (0..size).all(|col| {
            let v = self.eval(col);
            let slot = &mut by_count[col.count_ones() as usize];
            *slot.get_or_insert(v) == v
        })
    }

    /// All monotone rules on `n ≤ 4` voters, ordered by truth table.
    /// There are 3, 6, 20 and 168 of them for `n = 1..=4`.
    pub fn all_monotone(voters: usize) -> Result<Vec<IssueRule>> {
        if voters == 0 || voters > MAX_ENUMERABLE_VOTERS {
            return Err(Error::InvalidRule(format!(
                "monotone enumeration supports 1..={MAX_ENUMERABLE_VOTERS} voters"
            )));
        }
        let size = 1u32 << voters;
        let tables = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        let mut out = Vec::new();
        let mut bits = 0u64;
        loop {
            let rule = Self::from_truth_table(voters, bits)?;
            if rule.is_monotone() {
                out.push(rule);
            }
            if bits == tables {
                break;
            }
            bits += 1;
        }
        Ok(out)
    }
}

impl fmt::Debug for IssueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let size = 1u64 << self.voters;
        let s: String = (0..size).map(|c| if self.eval(c) { '1' } else { '0' }).collect();
        write!(f, "IssueRule(n={}, {s})", self.voters)
    }
}

/// An IIA aggregation stage: issue `j` is decided by `rules[j]` applied to
/// column `j` alone. The output need not be feasible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IiaStage {
    voters: usize,
    rules: Vec<IssueRule>,
    monotone: bool,
}

impl IiaStage {
    fn build(rules: Vec<IssueRule>) -> Result<Self> {
        let voters = rules
            .first()
            .ok_or_else(|| Error::InvalidRule("stage needs at least one issue".into()))?
            .voters;
        if rules.len() > 64 {
            return Err(Error::IssueCount(rules.len()));
        }
        if let Some(r) = rules.iter().find(|r| r.voters != voters) {
            return Err(Error::ArityMismatch {
                expected: voters,
                found: r.voters,
            });
        }
        let monotone = rules.iter().all(IssueRule::is_monotone);
        Ok(IiaStage {
            voters,
            rules,
            monotone,
        })
    }

    /// A stage of monotone rules; fails on the first non-monotone issue.
    pub fn monotone(rules: Vec<IssueRule>) -> Result<Self> {
        if let Some(j) = rules.iter().position(|r| !r.is_monotone()) {
            return Err(Error::NotMonotone { issue: j + 1 });
        }
        Self::build(rules)
    }

    /// Any IIA stage, monotone or not.
    pub fn any(rules: Vec<IssueRule>) -> Result<Self> {
        Self::build(rules)
    }

    pub fn quota(voters: usize, thresholds: &[usize]) -> Result<Self> {
        let rules = thresholds
            .iter()
            .map(|&t| IssueRule::quota(voters, t))
            .collect::<Result<_>>()?;
        Self::monotone(rules)
    }

    /// `[#ones ≥ ⌈(n+1)/2⌉]` on every issue.
    pub fn majority(voters: usize, issues: usize) -> Result<Self> {
        Self::quota(voters, &vec![voters / 2 + 1; issues])
    }

    /// Conjunction on every issue.
    pub fn unanimity(voters: usize, issues: usize) -> Result<Self> {
        Self::quota(voters, &vec![voters; issues])
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn issues(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[IssueRule] {
        &self.rules
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Every issue rule is symmetric in the voters.
    pub fn is_anonymous(&self) -> bool {
        self.rules.iter().all(IssueRule::is_symmetric)
    }

    #[inline]
    pub(crate) fn apply_masks(&self, rows: &[u64]) -> u64 {
        let m = self.rules.len();
        let mut out = 0u64;
        for (j, rule) in self.rules.iter().enumerate() {
            let shift = m - 1 - j;
            let col = rows.iter().fold(0u64, |acc, &r| (acc << 1) | (r >> shift & 1));
            out = (out << 1) | rule.eval(col) as u64;
        }
        out
    }

    pub(crate) fn check_rows(&self, n: usize, m: usize) -> Result<()> {
        if n != self.voters {
            return Err(Error::ArityMismatch {
                expected: self.voters,
                found: n,
            });
        }
        if m != self.issues() {
            return Err(Error::LengthMismatch {
                expected: self.issues(),
                found: m,
            });
        }
        Ok(())
    }
}

/// Coordinate `j` of the result is `g_j(column j)`; may be infeasible.
pub fn stage_apply(stage: &IiaStage, profile: &Profile) -> Result<Evaluation> {
    stage.check_rows(profile.n(), profile.m())?;
    Evaluation::new(stage.apply_masks(profile.masks()), profile.m())
}

/// Issue-wise minimizer of total distance over the whole cube: position 1
/// exactly where strictly more than half of the voters hold 1.
pub fn issuewise_majority(profile: &Profile) -> Evaluation {
    let m = profile.m();
    let n = profile.n();
    let bits = (0..m)
        .filter(|&j| 2 * profile.column_sum(j) > n)
        .fold(0u64, |acc, j| acc | issue_bit(m, j));
    Evaluation::new(bits, m).expect("profile width is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, EvaluationSpace, SpaceSpec};

    fn pref3() -> EvaluationSpace {
        make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap()
    }

    #[test]
    fn dedekind_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| IssueRule::all_monotone(n).unwrap().len()).collect();
        assert_eq!(counts, [3, 6, 20, 168]);
        assert!(IssueRule::all_monotone(5).is_err());
    }

    #[test]
    fn majority_thresholds() {
        let s = IiaStage::majority(3, 1).unwrap();
        assert!(s.rules()[0].eval(0b110) && !s.rules()[0].eval(0b100));
        // even n: strict majority
        let s = IiaStage::majority(4, 1).unwrap();
        assert!(!s.rules()[0].eval(0b1100) && s.rules()[0].eval(0b1110));
    }

    #[test]
    fn condorcet_and_doctrinal_paradoxes() {
        let p3 = pref3();
        let maj = IiaStage::majority(3, 3).unwrap();
        let t1 = Profile::from_strings(&p3, &["110", "011", "101"]).unwrap();
        assert_eq!(stage_apply(&maj, &t1).unwrap().to_string(), "111");

        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let t2 = Profile::from_strings(&d, &["010", "100", "111"]).unwrap();
        assert_eq!(stage_apply(&maj, &t2).unwrap().to_string(), "110");
        let un = IiaStage::unanimity(3, 3).unwrap();
        assert_eq!(stage_apply(&un, &t2).unwrap().to_string(), "000");
    }

    #[test]
    fn unanimity_is_consistent_on_doctrinal() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let un = IiaStage::unanimity(3, 3).unwrap();
        for a in d.feasible() {
            for b in d.feasible() {
                for c in d.feasible() {
                    let p = Profile::new(&d, vec![a, b, c]).unwrap();
                    assert!(d.is_feasible(&stage_apply(&un, &p).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn monotone_guard() {
        let parity = IssueRule::from_fn(3, |c| c.count_ones() % 2 == 1).unwrap();
        assert!(!parity.is_monotone());
        assert!(matches!(
            IiaStage::monotone(vec![IssueRule::quota(3, 2).unwrap(), parity.clone()]),
            Err(Error::NotMonotone { issue: 2 })
        ));
        let s = IiaStage::any(vec![parity]).unwrap();
        assert!(!s.is_monotone());
    }

    #[test]
    fn arity_errors() {
        let maj = IiaStage::majority(3, 3).unwrap();
        let p3 = pref3();
        let p = Profile::from_strings(&p3, &["110", "011"]).unwrap();
        assert!(matches!(stage_apply(&maj, &p), Err(Error::ArityMismatch { .. })));
        assert!(IiaStage::any(vec![IssueRule::quota(3, 2).unwrap(), IssueRule::quota(2, 1).unwrap()]).is_err());
        assert!(IssueRule::quota(3, 5).is_err());
    }

    #[test]
    fn symmetry() {
        assert!(IiaStage::majority(3, 3).unwrap().is_anonymous());
        let dict = IssueRule::from_fn(3, |c| c & 0b100 != 0).unwrap();
        assert!(dict.is_monotone() && !dict.is_symmetric());
    }
}
