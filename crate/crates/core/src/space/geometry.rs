use super::{Evaluation, EvaluationSpace};
use crate::error::{Error, Result};

#[inline]
pub(crate) fn between_mask(a: u64, c: u64, b: u64) -> bool {
    (c ^ a) & !(a ^ b) == 0
}

/// `[a, b]`: all vectors that agree with `a` wherever `a` and `b` agree.
pub fn interval(a: &Evaluation, b: &Evaluation) -> Result<Vec<Evaluation>> {
    a.same_len(b)?;
    let diff = a.bits() ^ b.bits();
    let base = a.bits() & !diff;
    let mut out = Vec::with_capacity(1usize << diff.count_ones().min(30));
    let mut sub = 0u64;
    loop {
        out.push(Evaluation::from_mask(base | sub, a.len()));
        if sub == diff {
            break;
        }
        sub = sub.wrapping_sub(diff) & diff;
    }
    Ok(out)
}

/// Whether `c ∈ [a, b]`.
pub fn is_between(a: &Evaluation, c: &Evaluation, b: &Evaluation) -> Result<bool> {
    a.same_len(b)?;
    a.same_len(c)?;
    Ok(between_mask(a.bits(), c.bits(), b.bits()))
}

/// Whether some feasible point lies in `[a, b]`.
pub fn interval_meets(space: &EvaluationSpace, a: &Evaluation, b: &Evaluation) -> Result<bool> {
    space.check(a)?;
    space.check(b)?;
    Ok(space.masks().iter().any(|&c| between_mask(a.bits(), c, b.bits())))
}

/// Feasible points `a` whose open interval `(a, b)` misses `X`.
pub fn neighbors(space: &EvaluationSpace, b: &Evaluation) -> Result<Vec<Evaluation>> {
    if space.is_feasible(b)? {
        return Err(Error::Feasible(b.to_string()));
    }
    let b = b.bits();
    let xs = space.masks();
    Ok(xs
        .iter()
        .filter(|&&a| !xs.iter().any(|&c| c != a && between_mask(a, c, b)))
        .map(|&a| space.eval(a))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, SpaceSpec};

    fn e(s: &str) -> Evaluation {
        s.parse().unwrap()
    }

    fn strs(v: &[Evaluation]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn interval_examples() {
        assert_eq!(
            strs(&interval(&e("101"), &e("110")).unwrap()),
            ["100", "101", "110", "111"]
        );
        assert_eq!(strs(&interval(&e("011"), &e("011")).unwrap()), ["011"]);
        assert!(interval(&e("01"), &e("011")).is_err());
        assert!(is_between(&e("101"), &e("111"), &e("110")).unwrap());
        assert!(!is_between(&e("101"), &e("011"), &e("110")).unwrap());
    }

    #[test]
    fn neighbor_examples() {
        let d = make_space(&SpaceSpec::Doctrinal).unwrap();
        assert_eq!(strs(&neighbors(&d, &e("110")).unwrap()), ["010", "100", "111"]);
        assert!(neighbors(&d, &e("111")).is_err());

        let p = make_space(&SpaceSpec::Pref {
            k: 3,
            orientation: Some(vec![(0, 1), (1, 2), (2, 0)]),
        })
        .unwrap();
        assert_eq!(strs(&neighbors(&p, &e("111")).unwrap()), ["011", "101", "110"]);
    }
}
