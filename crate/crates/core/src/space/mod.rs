//! Feasible evaluation spaces `X ⊆ {0,1}^m`, profiles, and the combinatorial
//! geometry over them: projections, minimally infeasible partial evaluations
//! (MIPEs), betweenness and neighbours.
//!
//! Evaluations are bit masks with issue 1 in the most significant position,
//! so ascending mask order is the canonical (lexicographic) enumeration order
//! used throughout the crate.

mod eval;
mod geometry;
mod mipe;
mod pref;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

pub use eval::{Evaluation, IssueSet, PartialEvaluation, MAX_ISSUES};
pub(crate) use eval::{full_mask, issue_bit, mask_to_string};
pub use geometry::{interval, interval_meets, is_between, neighbors};
pub(crate) use geometry::between_mask;
pub use mipe::{enumerate_mipes, mipe_set, mipe_type, Mipe};
pub(crate) use mipe::mipe_type_mask;
pub use pref::{alternative_name, decode_ranking, encode_ranking, Ranking};

use crate::error::{Error, Result};

/// Largest feasible set the explicit representation will hold.
pub const MAX_FEASIBLE: u128 = 1 << 24;

/// Dense membership bitmap is kept for spaces up to this many issues.
const DENSE_LIMIT: usize = 24;

/// How a space was generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    /// Strict total orders over `k` alternatives. Issue `j` is the ordered
    /// pair `orientation[j] = (p, q)`; bit 1 means `p ≻ q`.
    Pref {
        k: usize,
        orientation: Vec<(usize, usize)>,
    },
    /// All evaluations with exactly `k` ones.
    Choose { m: usize, k: usize },
    /// A cycle on `vertices` (even) points embedded in `{0,1}^(vertices/2)`.
    Cycle { vertices: usize },
    /// `{x : x3 = x1 ∧ x2}`.
    Doctrinal,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Explicit => f.write_str("explicit"),
            Provenance::Pref { k, orientation } => {
                write!(f, "pref {k}")?;
                for &(p, q) in orientation {
                    write!(f, " {}{}", alternative_name(p), alternative_name(q))?;
                }
                Ok(())
            }
            Provenance::Choose { m, k } => write!(f, "choose {m} {k}"),
            Provenance::Cycle { vertices } => write!(f, "cycle {vertices}"),
            Provenance::Doctrinal => f.write_str("doctrinal"),
        }
    }
}

/// Generator descriptor accepted by [`make_space`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    Explicit { m: usize, members: Vec<Evaluation> },
    /// `orientation: None` selects the canonical orientation: pairs `(i, j)`,
    /// `i < j`, in lexicographic order.
    Pref {
        k: usize,
        orientation: Option<Vec<(usize, usize)>>,
    },
    Choose { m: usize, k: usize },
    Cycle { vertices: usize },
    Doctrinal,
}

/// A non-empty feasible set over `m` issues.
pub struct EvaluationSpace {
    m: usize,
    feasible: Vec<u64>,
    dense: Option<Vec<u64>>,
    labels: Vec<String>,
    provenance: Provenance,
    mipes: OnceLock<Vec<Mipe>>,
}

impl Clone for EvaluationSpace {
    fn clone(&self) -> Self {
        EvaluationSpace {
            m: self.m,
            feasible: self.feasible.clone(),
            dense: self.dense.clone(),
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
            mipes: OnceLock::new(),
        }
    }
}

impl fmt::Debug for EvaluationSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluationSpace")
            .field("m", &self.m)
            .field("size", &self.feasible.len())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl PartialEq for EvaluationSpace {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.feasible == other.feasible
    }
}

impl EvaluationSpace {
    fn build(
        m: usize,
        mut feasible: Vec<u64>,
        labels: Vec<String>,
        provenance: Provenance,
    ) -> Result<Self> {
        eval::check_len(m)?;
        if feasible.is_empty() {
            return Err(Error::EmptyFeasibleSet);
        }
        if let Some(&bad) = feasible.iter().find(|&&x| x & !full_mask(m) != 0) {
            return Err(Error::BitsOutOfRange { bits: bad, len: m });
        }
        feasible.sort_unstable();
        feasible.dedup();
        let dense = (m <= DENSE_LIMIT).then(|| {
            let mut words = vec![0u64; (1usize << m).div_ceil(64)];
            for &x in &feasible {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
            words
        });
        debug_assert_eq!(labels.len(), m);
        Ok(EvaluationSpace {
            m,
            feasible,
            dense,
            labels,
            provenance,
            mipes: OnceLock::new(),
        })
    }

    /// An explicit space with default labels `1..m`.
    pub fn explicit(m: usize, members: impl IntoIterator<Item = Evaluation>) -> Result<Self> {
        eval::check_len(m)?;
        let mut masks = Vec::new();
        for x in members {
            if x.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    found: x.len(),
                });
            }
            masks.push(x.bits());
        }
        Self::build(m, masks, default_labels(m), Provenance::Explicit)
    }

    /// Parses 0/1 strings; convenience for fixtures.
    pub fn from_strings<S: AsRef<str>>(members: &[S]) -> Result<Self> {
        let parsed: Vec<Evaluation> = members
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<_>>()?;
        let m = parsed.first().ok_or(Error::EmptyFeasibleSet)?.len();
        Self::explicit(m, parsed)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of feasible evaluations `|X|`.
    pub fn len(&self) -> usize {
        self.feasible.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Feasible set as sorted masks.
    pub fn masks(&self) -> &[u64] {
        &self.feasible
    }

    /// Feasible set in canonical order.
    pub fn feasible(&self) -> impl ExactSizeIterator<Item = Evaluation> + '_ {
        self.feasible.iter().map(move |&x| Evaluation::from_mask(x, self.m))
    }

    pub fn get(&self, index: usize) -> Evaluation {
        Evaluation::from_mask(self.feasible[index], self.m)
    }

    #[inline]
    pub(crate) fn contains_mask(&self, x: u64) -> bool {
        match &self.dense {
            Some(words) => words[(x >> 6) as usize] & (1 << (x & 63)) != 0,
            None => self.feasible.binary_search(&x).is_ok(),
        }
    }

    /// Position of `x` in the canonical enumeration of `X`.
    #[inline]
    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.feasible.binary_search(&x).ok()
    }

    pub(crate) fn eval(&self, x: u64) -> Evaluation {
        Evaluation::from_mask(x, self.m)
    }

    pub(crate) fn check(&self, x: &Evaluation) -> Result<()> {
        if x.len() != self.m {
            Err(Error::LengthMismatch {
                expected: self.m,
                found: x.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn is_feasible(&self, x: &Evaluation) -> Result<bool> {
        self.check(x)?;
        Ok(self.contains_mask(x.bits()))
    }

    /// Whether the partial evaluation on issues `1..=len` given by `prefix`
    /// (issue 1 most significant) extends to a feasible evaluation.
    #[inline]
    pub(crate) fn prefix_feasible(&self, prefix: u64, len: usize) -> bool {
        let shift = self.m - len;
        let lo = prefix << shift;
        let i = self.feasible.partition_point(|&x| x < lo);
        i < self.feasible.len() && self.feasible[i] >> shift == prefix
    }

    #[inline]
    pub(crate) fn pattern_feasible(&self, support: u64, bits: u64) -> bool {
        if support == full_mask(self.m) {
            return self.contains_mask(bits);
        }
        self.feasible.iter().any(|&x| x & support == bits)
    }

    /// Whether the K-evaluation lies in the projection of `X` on K.
    pub fn is_partial_feasible(&self, a: &PartialEvaluation) -> Result<bool> {
        if a.ambient() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: a.ambient(),
            });
        }
        Ok(self.pattern_feasible(a.support_mask(), a.bits_mask()))
    }

    /// Restrictions of the feasible evaluations to `support`.
    pub fn project(&self, support: IssueSet) -> Result<BTreeSet<PartialEvaluation>> {
        if support.ambient() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: support.ambient(),
            });
        }
        if support.is_empty() {
            return Err(Error::EmptyIssueSet);
        }
        let k = support.mask();
        Ok(self
            .feasible
            .iter()
            .map(|&x| x & k)
            .sorted_unstable()
            .dedup()
            .map(|bits| PartialEvaluation::from_masks(k, bits, self.m))
            .collect())
    }

    /// The space's MIPEs in canonical order, computed once.
    pub fn mipes(&self) -> &[Mipe] {
        self.mipes.get_or_init(|| enumerate_mipes(self))
    }
}

fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|j| j.to_string()).collect()
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// Builds a space from a generator descriptor.
pub fn make_space(spec: &SpaceSpec) -> Result<EvaluationSpace> {
    match spec {
        SpaceSpec::Explicit { m, members } => {
            if members.is_empty() {
                return Err(Error::EmptyFeasibleSet);
            }
            EvaluationSpace::explicit(*m, members.iter().copied())
        }
        SpaceSpec::Pref { k, orientation } => {
            let orientation = match orientation {
                Some(o) => o.clone(),
                None => pref::canonical_orientation(*k)?,
            };
            pref::pref_space(*k, orientation)
        }
        SpaceSpec::Choose { m, k } => {
            eval::check_len(*m)?;
            if k > m {
                return Err(Error::InvalidGenerator(format!("choose {m} {k}: k exceeds m")));
            }
            let size = binomial(*m, *k);
            if size > MAX_FEASIBLE {
                return Err(Error::SpaceTooLarge(size));
            }
            let members = (0..*m)
                .combinations(*k)
                .map(|c| c.iter().fold(0u64, |acc, &j| acc | issue_bit(*m, j)))
                .collect();
            EvaluationSpace::build(
                *m,
                members,
                default_labels(*m),
                Provenance::Choose { m: *m, k: *k },
            )
        }
        SpaceSpec::Cycle { vertices } => {
            if *vertices < 2 || vertices % 2 != 0 {
                return Err(Error::InvalidGenerator(format!(
                    "cycle length {vertices} must be even and at least 2"
                )));
            }
            let m = vertices / 2;
            eval::check_len(m)?;
            let full = full_mask(m);
            let mut members = Vec::with_capacity(*vertices);
            // 1^i 0^(m-i), i = 0..=m
            for i in 0..=m {
                members.push(full & !full_mask(m - i));
            }
            // 0^(m-i) 1^i, i = 1..m-1
            for i in 1..m {
                members.push(full_mask(i));
            }
            EvaluationSpace::build(
                m,
                members,
                default_labels(m),
                Provenance::Cycle {
                    vertices: *vertices,
                },
            )
        }
        SpaceSpec::Doctrinal => {
            let members = (0u64..8)
                .filter(|x| {
                    let (p, q, r) = (x >> 2 & 1, x >> 1 & 1, x & 1);
                    r == p & q
                })
                .collect();
            EvaluationSpace::build(
                3,
                members,
                vec!["p".into(), "q".into(), "r".into()],
                Provenance::Doctrinal,
            )
        }
    }
}

/// `n` feasible evaluations, one per voter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    rows: Vec<u64>,
}

impl Profile {
    /// Validates that every row is feasible in `space`.
    pub fn new(space: &EvaluationSpace, rows: Vec<Evaluation>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        for x in &rows {
            if !space.is_feasible(x)? {
                return Err(Error::Infeasible(x.to_string()));
            }
        }
        Ok(Profile {
            m: space.m(),
            rows: rows.iter().map(|x| x.bits()).collect(),
        })
    }

    pub fn from_strings<S: AsRef<str>>(space: &EvaluationSpace, rows: &[S]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Evaluation>>>()?;
        Self::new(space, rows)
    }

    pub(crate) fn from_masks(m: usize, rows: Vec<u64>) -> Self {
        Profile { m, rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> Evaluation {
        Evaluation::from_mask(self.rows[i], self.m)
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = Evaluation> + '_ {
        self.rows.iter().map(move |&x| Evaluation::from_mask(x, self.m))
    }

    pub fn masks(&self) -> &[u64] {
        &self.rows
    }

    /// The profile with voter `i`'s row replaced.
    pub fn with_row(&self, i: usize, x: Evaluation) -> Result<Self> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        let mut rows = self.rows.clone();
        rows[i] = x.bits();
        Ok(Profile { m: self.m, rows })
    }

    /// Number of voters holding position 1 on issue `j`.
    pub fn column_sum(&self, j: usize) -> usize {
        let bit = issue_bit(self.m, j);
        self.rows.iter().filter(|&&x| x & bit != 0).count()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(space: &EvaluationSpace) -> Vec<String> {
        space.feasible().map(|x| x.to_string()).collect()
    }

    #[test]
    fn pref3_excludes_the_two_cycles() {
        let s = make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap();
        assert_eq!(strs(&s), ["001", "010", "011", "100", "101", "110"]);
        assert!(!s.is_feasible(&"111".parse().unwrap()).unwrap());
    }

    #[test]
    fn classifier_space() {
        let members: Vec<Evaluation> = (0u64..16)
            .filter(|&x| x != 0b0110 && x != 0b1001)
            .map(|x| Evaluation::new(x, 4).unwrap())
            .collect();
        let s = make_space(&SpaceSpec::Explicit { m: 4, members }).unwrap();
        assert_eq!(s.len(), 14);
        assert!(!s.is_feasible(&"0110".parse().unwrap()).unwrap());
    }

    #[test]
    fn choose_and_cycle_and_doctrinal() {
        let c = make_space(&SpaceSpec::Choose { m: 2, k: 1 }).unwrap();
        assert_eq!(strs(&c), ["01", "10"]);
        let c = make_space(&SpaceSpec::Choose { m: 5, k: 2 }).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.feasible().all(|x| x.ones() == 2));

        let cyc = make_space(&SpaceSpec::Cycle { vertices: 6 }).unwrap();
        assert_eq!(cyc.m(), 3);
        assert_eq!(strs(&cyc), ["000", "001", "011", "100", "110", "111"]);
        let cyc8 = make_space(&SpaceSpec::Cycle { vertices: 8 }).unwrap();
        assert_eq!(cyc8.len(), 8);

        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        assert_eq!(strs(&d), ["000", "010", "100", "111"]);
        assert!(!d.is_feasible(&"110".parse().unwrap()).unwrap());
    }

    #[test]
    fn generator_errors() {
        assert_eq!(
            make_space(&SpaceSpec::Explicit {
                m: 3,
                members: vec![]
            })
            .unwrap_err(),
            Error::EmptyFeasibleSet
        );
        assert!(make_space(&SpaceSpec::Cycle { vertices: 5 }).is_err());
        assert!(make_space(&SpaceSpec::Pref {
            k: 1,
            orientation: None
        })
        .is_err());
        assert!(make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 0), (2, 0)])
        })
        .is_err());
        assert!(make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2)])
        })
        .is_err());
    }

    #[test]
    fn is_feasible_length_mismatch() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        assert!(matches!(
            d.is_feasible(&"10".parse().unwrap()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn projections() {
        let p3 = make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap();
        let k = IssueSet::from_issues(3, &[0, 1]).unwrap();
        assert_eq!(p3.project(k).unwrap().len(), 4);

        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let k3 = IssueSet::from_issues(3, &[2]).unwrap();
        let vals: Vec<Vec<bool>> = d.project(k3).unwrap().iter().map(|a| a.values()).collect();
        assert_eq!(vals, [vec![false], vec![true]]);

        let all = d.project(IssueSet::all(3).unwrap()).unwrap();
        assert_eq!(all.len(), d.len());
        assert!(d.project(IssueSet::from_issues(3, &[]).unwrap()).is_err());
    }

    #[test]
    fn prefix_feasibility() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        assert!(d.prefix_feasible(0b11, 2));
        assert!(d.prefix_feasible(0b111, 3));
        assert!(!d.prefix_feasible(0b110, 3));
        assert!(d.prefix_feasible(0b1, 1));
    }

    #[test]
    fn profile_rejects_infeasible_rows() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        assert!(Profile::from_strings(&d, &["010", "110"]).is_err());
        let p = Profile::from_strings(&d, &["010", "100", "111"]).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.column_sum(0), 2);
        assert_eq!(p.to_string(), "010 100 111");
    }
}
