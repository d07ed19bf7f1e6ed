use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::{issue_bit, EvaluationSpace, Evaluation, Provenance, MAX_FEASIBLE, MAX_ISSUES};
use crate::error::{Error, Result};

/// Letter used for alternative `i` (`a`, `b`, ...).
pub fn alternative_name(i: usize) -> char {
    (b'a' + i as u8) as char
}

fn alternative_index(c: char) -> Option<usize> {
    c.is_ascii_lowercase().then(|| (c as u8 - b'a') as usize)
}

pub(super) fn canonical_orientation(k: usize) -> Result<Vec<(usize, usize)>> {
    if k < 2 {
        return Err(Error::InvalidGenerator(format!("pref needs k >= 2, got {k}")));
    }
    Ok((0..k).tuple_combinations().collect())
}

fn validate_orientation(k: usize, orientation: &[(usize, usize)]) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidGenerator(format!("pref needs k >= 2, got {k}")));
    }
    let m = k * (k - 1) / 2;
    if m > MAX_ISSUES {
        return Err(Error::IssueCount(m));
    }
    if orientation.len() != m {
        return Err(Error::InvalidOrientation(format!(
            "{k} alternatives need {m} pairs, got {}",
            orientation.len()
        )));
    }
    let mut seen = vec![false; k * k];
    for &(p, q) in orientation {
        if p >= k || q >= k || p == q {
            return Err(Error::InvalidOrientation(format!("bad pair ({p},{q})")));
        }
        let key = p.min(q) * k + p.max(q);
        if seen[key] {
            return Err(Error::InvalidOrientation(format!(
                "pair {}{} appears twice",
                alternative_name(p),
                alternative_name(q)
            )));
        }
        seen[key] = true;
    }
    Ok(())
}

pub(super) fn pref_space(k: usize, orientation: Vec<(usize, usize)>) -> Result<EvaluationSpace> {
    validate_orientation(k, &orientation)?;
    let size = (1..=k as u128).product::<u128>();
    if size > MAX_FEASIBLE {
        return Err(Error::SpaceTooLarge(size));
    }
    let m = orientation.len();
    let members = (0..k)
        .permutations(k)
        .map(|order| encode_order(&order, &orientation))
        .collect();
    let labels = orientation
        .iter()
        .map(|&(p, q)| format!("{}>{}", alternative_name(p), alternative_name(q)))
        .collect();
    EvaluationSpace::build(m, members, labels, Provenance::Pref { k, orientation })
}

fn encode_order(order: &[usize], orientation: &[(usize, usize)]) -> u64 {
    let mut pos = vec![0usize; order.len()];
    for (rank, &a) in order.iter().enumerate() {
        pos[a] = rank;
    }
    let m = orientation.len();
    orientation
        .iter()
        .enumerate()
        .filter(|(_, &(p, q))| pos[p] < pos[q])
        .fold(0u64, |acc, (j, _)| acc | issue_bit(m, j))
}

/// A strict total order over alternatives, best first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ranking(pub Vec<usize>);

impl Ranking {
    pub fn is_permutation(&self, k: usize) -> bool {
        self.0.len() == k && self.0.iter().sorted().copied().eq(0..k)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|&a| alternative_name(a).to_string()).collect();
        f.write_str(&s.join(">"))
    }
}

impl FromStr for Ranking {
    type Err = Error;

    /// Parses `a>b>d>c`.
    fn from_str(s: &str) -> Result<Self> {
        s.split('>')
            .map(|t| {
                let t = t.trim();
                let mut cs = t.chars();
                match (cs.next().and_then(alternative_index), cs.next()) {
                    (Some(i), None) => Ok(i),
                    _ => Err(Error::InvalidRanking(format!("bad alternative '{t}'"))),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Ranking)
    }
}

fn pref_parts(space: &EvaluationSpace) -> Result<(usize, &[(usize, usize)])> {
    match space.provenance() {
        Provenance::Pref { k, orientation } => Ok((*k, orientation)),
        _ => Err(Error::WrongSpaceKind {
            expected: "preference",
        }),
    }
}

/// Bit vector of a strict order under the space's orientation.
pub fn encode_ranking(space: &EvaluationSpace, ranking: &Ranking) -> Result<Evaluation> {
    let (k, orientation) = pref_parts(space)?;
    if !ranking.is_permutation(k) {
        return Err(Error::InvalidRanking(format!(
            "{ranking} is not an order of {k} alternatives"
        )));
    }
    Ok(space.eval(encode_order(&ranking.0, orientation)))
}

/// Inverse of [`encode_ranking`]. Infeasible inputs report a 3-cycle.
pub fn decode_ranking(space: &EvaluationSpace, x: &Evaluation) -> Result<Ranking> {
    let (k, orientation) = pref_parts(space)?;
    space.check(x)?;
    let mut beats = vec![false; k * k];
    for (j, &(p, q)) in orientation.iter().enumerate() {
        if x.get(j) {
            beats[p * k + q] = true;
        } else {
            beats[q * k + p] = true;
        }
    }
    let wins: Vec<usize> = (0..k)
        .map(|p| (0..k).filter(|&q| beats[p * k + q]).count())
        .collect();
    if wins.iter().sorted().copied().eq(0..k) {
        let order = (0..k).sorted_by_key(|&p| std::cmp::Reverse(wins[p])).collect();
        return Ok(Ranking(order));
    }
    // A tournament that is not transitive contains a 3-cycle.
    for (p, q, r) in (0..k).tuple_combinations() {
        for (a, b, c) in [(p, q, r), (p, r, q)] {
            if beats[a * k + b] && beats[b * k + c] && beats[c * k + a] {
                let cycle = format!(
                    "{}>{}>{}>{}",
                    alternative_name(a),
                    alternative_name(b),
                    alternative_name(c),
                    alternative_name(a)
                );
                return Err(Error::NoConsistentOrder { cycle });
            }
        }
    }
    unreachable!("non-transitive tournament without a 3-cycle")
}
