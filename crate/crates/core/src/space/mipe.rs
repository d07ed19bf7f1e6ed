use std::collections::HashSet;
use std::fmt;

use super::{full_mask, issue_bit, Evaluation, EvaluationSpace, PartialEvaluation};
use crate::error::{Error, Result};

/// A minimally infeasible partial evaluation: infeasible on its support K,
/// while every restriction to a proper non-empty subset of K is feasible.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mipe(PartialEvaluation);

impl Mipe {
    pub fn partial(&self) -> &PartialEvaluation {
        &self.0
    }

    /// Whether `x` lies in the MIPE-set `T_a`.
    pub fn covers(&self, x: &Evaluation) -> bool {
        self.0.matches(x)
    }

    #[inline]
    pub(crate) fn covers_mask(&self, x: u64) -> bool {
        x & self.0.support_mask() == self.0.bits_mask()
    }
}

impl fmt::Display for Mipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Mipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mipe({})", self.0)
    }
}

/// All MIPEs of `space`, ordered by support size, then support (ascending
/// issue lists compared lexicographically), then positions.
///
/// Feasibility is closed under restriction, so a pattern is a MIPE iff it is
/// infeasible and each restriction dropping a single issue is feasible. The
/// search proceeds level by level over support size, extending only feasible
/// patterns, which keeps the work proportional to the number of feasible
/// partial evaluations rather than `3^m`.
pub fn enumerate_mipes(space: &EvaluationSpace) -> Vec<Mipe> {
    let m = space.m();
    let mut found = Vec::new();

    // Level 1: the empty evaluation is feasible since X is non-empty.
    let mut level: HashSet<(u64, u64)> = HashSet::new();
    for j in 0..m {
        let bit = issue_bit(m, j);
        for bits in [0, bit] {
            if space.pattern_feasible(bit, bits) {
                level.insert((bit, bits));
            } else {
                found.push(Mipe(PartialEvaluation::from_masks(bit, bits, m)));
            }
        }
    }

    for _size in 2..=m {
        let mut next: HashSet<(u64, u64)> = HashSet::new();
        for &(support, bits) in &level {
            // Extend only with issues after the last one in the support, so
            // each candidate is generated once (from its prefix restriction).
            let last = support.trailing_zeros();
            for shift in (0..last).rev() {
                let bit = 1u64 << shift;
                let new_support = support | bit;
                for new_bits in [bits, bits | bit] {
                    let all_restrictions_feasible = (0..m)
                        .map(|i| issue_bit(m, i))
                        .filter(|&b| new_support & b != 0 && b != bit)
                        .all(|b| level.contains(&(new_support & !b, new_bits & !b)));
                    if !all_restrictions_feasible {
                        continue;
                    }
                    if space.pattern_feasible(new_support, new_bits) {
                        next.insert((new_support, new_bits));
                    } else {
                        found.push(Mipe(PartialEvaluation::from_masks(new_support, new_bits, m)));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }

    found.sort_by_key(|a| a.0.canonical_key());
    debug_assert!(found.iter().all(|a| a.0.support_mask() & !full_mask(m) == 0));
    found
}

/// Validates that `a` is a MIPE of `space`.
pub(crate) fn as_mipe(space: &EvaluationSpace, a: &PartialEvaluation) -> Result<Mipe> {
    let candidate = Mipe(*a);
    if a.ambient() == space.m() && space.mipes().contains(&candidate) {
        Ok(candidate)
    } else {
        Err(Error::NotAMipe(a.to_string()))
    }
}

/// `T_a`: every evaluation of `{0,1}^m` that agrees with `a` on its support.
pub fn mipe_set(space: &EvaluationSpace, a: &PartialEvaluation) -> Result<Vec<Evaluation>> {
    let a = as_mipe(space, a)?;
    let m = space.m();
    let free = full_mask(m) & !a.0.support_mask();
    let mut out = Vec::with_capacity(1usize << free.count_ones().min(30));
    let mut sub = 0u64;
    loop {
        out.push(space.eval(a.0.bits_mask() | sub));
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    Ok(out)
}

/// `MT(x)`: the MIPEs whose MIPE-set contains the infeasible point `x`.
pub fn mipe_type(space: &EvaluationSpace, x: &Evaluation) -> Result<Vec<Mipe>> {
    if space.is_feasible(x)? {
        return Err(Error::Feasible(x.to_string()));
    }
    Ok(mipe_type_mask(space, x.bits()))
}

pub(crate) fn mipe_type_mask(space: &EvaluationSpace, x: u64) -> Vec<Mipe> {
    space
        .mipes()
        .iter()
        .filter(|a| a.covers_mask(x))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, IssueSet, SpaceSpec};

    fn pa(m: usize, issues: &[usize], values: &[bool]) -> PartialEvaluation {
        PartialEvaluation::new(IssueSet::from_issues(m, issues).unwrap(), values).unwrap()
    }

    fn pref3() -> EvaluationSpace {
        make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap()
    }

    #[test]
    fn pref3_mipes() {
        let got: Vec<String> = pref3().mipes().iter().map(|a| a.to_string()).collect();
        assert_eq!(got, ["K:{1,2,3} bits:000", "K:{1,2,3} bits:111"]);
    }

    #[test]
    fn doctrinal_mipes() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let got: Vec<String> = d.mipes().iter().map(|a| a.to_string()).collect();
        assert_eq!(
            got,
            ["K:{1,3} bits:01", "K:{2,3} bits:01", "K:{1,2,3} bits:110"]
        );
    }

    #[test]
    fn mipe_sets() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        let a = pa(3, &[0, 2], &[false, true]);
        let t: Vec<String> = mipe_set(&d, &a).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(t, ["001", "011"]);

        let p = pref3();
        let t = mipe_set(&p, &pa(3, &[0, 1, 2], &[true; 3])).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "111");

        assert!(matches!(
            mipe_set(&d, &pa(3, &[0], &[true])),
            Err(Error::NotAMipe(_))
        ));
    }

    #[test]
    fn mipe_type_requires_infeasible() {
        let p = pref3();
        let mt = mipe_type(&p, &"000".parse().unwrap()).unwrap();
        assert_eq!(mt.len(), 1);
        assert!(matches!(
            mipe_type(&p, &"110".parse().unwrap()),
            Err(Error::Feasible(_))
        ));
    }
}
