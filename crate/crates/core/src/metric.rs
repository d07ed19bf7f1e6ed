//! Weighted Hamming distance, nearest-neighbour sets over a feasible space,
//! tie-broken nearest-neighbour selection, and the non-crossing tie-break
//! property check.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::{full_mask, issue_bit, Evaluation, EvaluationSpace};

const MAX_WEIGHT: u64 = 1 << 32;

/// Positive integer weight per issue. Distances are exact integers, so
/// ties are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<u64>,
    // weights indexed by mask bit position (bit 0 = last issue)
    by_bit: Vec<u64>,
    uniform: bool,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.len() > 64 {
            return Err(Error::IssueCount(weights.len()));
        }
        for (j, &w) in weights.iter().enumerate() {
            if w == 0 || w > MAX_WEIGHT {
                return Err(Error::InvalidWeight {
                    issue: j + 1,
                    weight: w,
                });
            }
        }
        let uniform = weights.iter().all(|&w| w == weights[0]);
        let by_bit = weights.iter().rev().copied().collect();
        Ok(WeightVector {
            weights,
            by_bit,
            uniform,
        })
    }

    pub fn uniform(m: usize) -> Self {
        Self::new(vec![1; m]).expect("m in 1..=64")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn weight(&self, j: usize) -> u64 {
        self.weights[j]
    }

    /// Total weight of the issues set in `mask`.
    #[inline]
    pub fn mask_weight(&self, mask: u64) -> u64 {
        if self.uniform {
            return mask.count_ones() as u64 * self.weights[0];
        }
        let mut rest = mask;
        let mut total = 0;
        while rest != 0 {
            total += self.by_bit[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        total
    }

    #[inline]
    pub(crate) fn distance(&self, a: u64, b: u64) -> u64 {
        self.mask_weight(a ^ b)
    }

    pub(crate) fn check(&self, m: usize) -> Result<()> {
        if self.len() != m {
            Err(Error::LengthMismatch {
                expected: m,
                found: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightVector({self})")
    }
}

/// `d_ω(x, y) = Σ ω_j |x_j − y_j|`.
pub fn weighted_hamming(x: &Evaluation, y: &Evaluation, weights: &WeightVector) -> Result<u64> {
    x.hamming(y)?;
    weights.check(x.len())?;
    Ok(weights.distance(x.bits(), y.bits()))
}

/// A total order over the feasible set of one space; lower rank wins ties.
#[derive(Clone, PartialEq, Eq)]
pub struct TieOrder {
    // rank[i] = rank of the i-th feasible evaluation in canonical order
    rank: Vec<u32>,
    // order[r] = canonical index of the evaluation with rank r
    order: Vec<u32>,
    m: usize,
}

impl TieOrder {
    fn from_order(space: &EvaluationSpace, order: Vec<u32>) -> Self {
        let mut rank = vec![0u32; order.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        TieOrder {
            rank,
            order,
            m: space.m(),
        }
    }

    /// Ascending bit-mask order; this selector is the lexicographic one.
    pub fn ascending(space: &EvaluationSpace) -> Self {
        Self::from_order(space, (0..space.len() as u32).collect())
    }

    pub fn descending(space: &EvaluationSpace) -> Self {
        Self::from_order(space, (0..space.len() as u32).rev().collect())
    }

    /// An explicit ranking, best first; must be a permutation of `X`.
    pub fn from_sequence(space: &EvaluationSpace, seq: &[Evaluation]) -> Result<Self> {
        if seq.len() != space.len() {
            return Err(Error::InvalidTieOrder(format!(
                "expected {} evaluations, got {}",
                space.len(),
                seq.len()
            )));
        }
        let mut seen = vec![false; space.len()];
        let mut order = Vec::with_capacity(seq.len());
        for x in seq {
            space.check(x)?;
            let i = space
                .index_of(x.bits())
                .ok_or_else(|| Error::InvalidTieOrder(format!("{x} is not feasible")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidTieOrder(format!("{x} listed twice")));
            }
            order.push(i as u32);
        }
        Ok(Self::from_order(space, order))
    }

    /// The listed evaluations first (in the given order), then the rest
    /// ascending.
    pub fn preferring(space: &EvaluationSpace, front: &[Evaluation]) -> Result<Self> {
        let mut seq: Vec<Evaluation> = front.to_vec();
        seq.extend(space.feasible().filter(|x| !front.contains(x)));
        Self::from_sequence(space, &seq)
    }

    /// A fixed pseudo-random order; the same seed always gives the same order.
    pub fn shuffled(space: &EvaluationSpace, seed: u64) -> Self {
        let mut order: Vec<u32> = (0..space.len() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_order(space, order)
    }

    /// Orders evaluations by their 0/1 strings read in `priority` issue
    /// order, larger first. With `priority = [0, 1, .., m-1]` this is
    /// [`TieOrder::descending`]: an evaluation holding position 1 on an
    /// earlier priority issue wins.
    pub fn by_issue_priority(space: &EvaluationSpace, priority: &[usize]) -> Result<Self> {
        let m = space.m();
        let mut seen = vec![false; m];
        if priority.len() != m || priority.iter().any(|&j| j >= m || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidTieOrder(
                "issue priority must be a permutation of the issues".into(),
            ));
        }
        let key = |x: u64| {
            priority
                .iter()
                .fold(0u64, |acc, &j| (acc << 1) | (x & issue_bit(m, j) != 0) as u64)
        };
        let mut order: Vec<u32> = (0..space.len() as u32).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(key(space.masks()[i as usize])));
        Ok(Self::from_order(space, order))
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Rank of the feasible evaluation with canonical index `i`.
    #[inline]
    pub fn rank_of_index(&self, i: usize) -> u32 {
        self.rank[i]
    }

    pub fn rank(&self, space: &EvaluationSpace, x: &Evaluation) -> Option<u32> {
        space.index_of(x.bits()).map(|i| self.rank[i])
    }

    /// Evaluations best first.
    pub fn sequence<'s>(&'s self, space: &'s EvaluationSpace) -> impl Iterator<Item = Evaluation> + 's {
        self.order.iter().map(move |&i| space.get(i as usize))
    }

    pub(crate) fn check(&self, space: &EvaluationSpace) -> Result<()> {
        if self.rank.len() != space.len() || self.m != space.m() {
            Err(Error::InvalidTieOrder(format!(
                "order ranks {} evaluations, space has {}",
                self.rank.len(),
                space.len()
            )))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for TieOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TieOrder({:?})", self.order)
    }
}

/// Canonical index of the tie-broken nearest feasible point.
#[inline]
pub(crate) fn nearest_index(space: &EvaluationSpace, p: u64, weights: &WeightVector, ties: &TieOrder) -> usize {
    if let Some(i) = space.index_of(p) {
        return i;
    }
    let mut best = (u64::MAX, u32::MAX);
    let mut best_i = 0;
    for (i, &x) in space.masks().iter().enumerate() {
        let key = (weights.distance(p, x), ties.rank_of_index(i));
        if key < best {
            best = key;
            best_i = i;
        }
    }
    best_i
}

/// All points of `X` at minimum weighted distance from `p`.
pub fn nn_set(space: &EvaluationSpace, p: &Evaluation, weights: &WeightVector) -> Result<Vec<Evaluation>> {
    space.check(p)?;
    weights.check(space.m())?;
    if space.contains_mask(p.bits()) {
        return Ok(vec![*p]);
    }
    let dists: Vec<u64> = space.masks().iter().map(|&x| weights.distance(p.bits(), x)).collect();
    let best = *dists.iter().min().expect("X is non-empty");
    Ok(space
        .feasible()
        .zip(dists)
        .filter(|&(_, d)| d == best)
        .map(|(x, _)| x)
        .collect())
}

/// The best-ranked member of [`nn_set`].
pub fn nn_select(
    space: &EvaluationSpace,
    p: &Evaluation,
    weights: &WeightVector,
    ties: &TieOrder,
) -> Result<Evaluation> {
    space.check(p)?;
    weights.check(space.m())?;
    ties.check(space)?;
    Ok(space.get(nearest_index(space, p.bits(), weights, ties)))
}

/// Largest issue count for which [`NearestTable`] precomputes every point.
const TABLE_LIMIT: usize = 16;

/// `nn_select` for a fixed space, weights and tie order, precomputed over
/// the whole cube when it is small.
#[derive(Clone)]
pub struct NearestTable<'a> {
    space: &'a EvaluationSpace,
    weights: WeightVector,
    ties: TieOrder,
    table: Option<Vec<u64>>,
}

impl<'a> NearestTable<'a> {
    pub fn new(space: &'a EvaluationSpace, weights: WeightVector, ties: TieOrder) -> Result<Self> {
        weights.check(space.m())?;
        ties.check(space)?;
        let table = (space.m() <= TABLE_LIMIT).then(|| {
            (0..=full_mask(space.m()))
                .map(|p| space.masks()[nearest_index(space, p, &weights, &ties)])
                .collect()
        });
        Ok(NearestTable {
            space,
            weights,
            ties,
            table,
        })
    }

    #[inline]
    pub fn select_mask(&self, p: u64) -> u64 {
        match &self.table {
            Some(t) => t[p as usize],
            None => self.space.masks()[nearest_index(self.space, p, &self.weights, &self.ties)],
        }
    }

    pub fn select(&self, p: &Evaluation) -> Result<Evaluation> {
        self.space.check(p)?;
        Ok(self.space.eval(self.select_mask(p.bits())))
    }

    pub fn space(&self) -> &'a EvaluationSpace {
        self.space
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn ties(&self) -> &TieOrder {
        &self.ties
    }
}

/// A pair of infeasible points whose selections cross: both `alpha` and
/// `beta` are nearest to both `a` and `b`, yet `a ↦ alpha` and `b ↦ beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingChoice {
    pub a: Evaluation,
    pub b: Evaluation,
    pub alpha: Evaluation,
    pub beta: Evaluation,
}

/// Largest issue count accepted by [`check_h2`] (the check is quadratic in `2^m`).
pub const H2_CHECK_LIMIT: usize = 14;

/// Checks that a nearest-neighbour selector never makes crossing choices.
/// Returns `Ok(None)` when the property holds.
pub fn check_h2<F>(selector: F, space: &EvaluationSpace, weights: &WeightVector) -> Result<Option<CrossingChoice>>
where
    F: Fn(&Evaluation) -> Evaluation,
{
    let m = space.m();
    weights.check(m)?;
    if m > H2_CHECK_LIMIT {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << (2 * m),
            budget: 1 << (2 * H2_CHECK_LIMIT),
        });
    }
    let mut points = Vec::new();
    for p in (0..=full_mask(m)).filter(|&p| !space.contains_mask(p)) {
        let pe = space.eval(p);
        let nearest = nn_set(space, &pe, weights)?;
        let chosen = selector(&pe);
        if !nearest.contains(&chosen) {
            return Err(Error::NotNearestSelector {
                point: pe.to_string(),
                chosen: chosen.to_string(),
            });
        }
        points.push((pe, chosen, nearest));
    }
    for (i, (a, sa, na)) in points.iter().enumerate() {
        for (b, sb, nb) in &points[i + 1..] {
            if sa != sb && nb.contains(sa) && na.contains(sb) {
                return Ok(Some(CrossingChoice {
                    a: *a,
                    b: *b,
                    alpha: *sa,
                    beta: *sb,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, SpaceSpec};

    fn e(s: &str) -> Evaluation {
        s.parse().unwrap()
    }

    fn pref(k: usize, o: Vec<(usize, usize)>) -> EvaluationSpace {
        make_space(&SpaceSpec::Pref {
            k,
            orientation: Some(o),
        })
        .unwrap()
    }

    fn pref4() -> EvaluationSpace {
        pref(4, vec![(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    }

    #[test]
    fn distances() {
        let u = WeightVector::uniform(6);
        assert_eq!(weighted_hamming(&e("011111"), &e("110110"), &u).unwrap(), 3);
        let w = WeightVector::new(vec![3, 2, 1]).unwrap();
        assert_eq!(weighted_hamming(&e("101"), &e("110"), &w).unwrap(), 3);
        assert_eq!(weighted_hamming(&e("101"), &e("101"), &w).unwrap(), 0);
        assert!(weighted_hamming(&e("10"), &e("110"), &w).is_err());
        assert!(weighted_hamming(&e("10"), &e("11"), &w).is_err());
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(matches!(
            WeightVector::new(vec![1, 0, 2]),
            Err(Error::InvalidWeight { issue: 2, .. })
        ));
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn four_cycle_points_have_a_unique_nearest_neighbour() {
        let s = pref4();
        let u = WeightVector::uniform(6);
        let nn = nn_set(&s, &e("111110"), &u).unwrap();
        assert_eq!(nn, vec![e("110110")]);
        let nn = nn_set(&s, &e("111010"), &u).unwrap();
        assert_eq!(nn, vec![e("011010")]);
        for t in [TieOrder::ascending(&s), TieOrder::descending(&s), TieOrder::shuffled(&s, 7)] {
            assert_eq!(nn_select(&s, &e("111110"), &u, &t).unwrap(), e("110110"));
        }
    }

    #[test]
    fn nn_of_feasible_point_is_itself() {
        let s = pref4();
        let u = WeightVector::uniform(6);
        let t = TieOrder::shuffled(&s, 3);
        for x in s.feasible() {
            assert_eq!(nn_set(&s, &x, &u).unwrap(), vec![x]);
            assert_eq!(nn_select(&s, &x, &u, &t).unwrap(), x);
        }
    }

    #[test]
    fn tie_breaking_follows_the_order() {
        let s = pref(3, vec![(0, 1), (1, 2), (2, 0)]);
        let u = WeightVector::uniform(3);
        assert_eq!(
            nn_set(&s, &e("111"), &u).unwrap(),
            vec![e("011"), e("101"), e("110")]
        );
        assert_eq!(nn_select(&s, &e("111"), &u, &TieOrder::ascending(&s)).unwrap(), e("011"));
        assert_eq!(nn_select(&s, &e("111"), &u, &TieOrder::descending(&s)).unwrap(), e("110"));
        let t = TieOrder::preferring(&s, &[e("101")]).unwrap();
        assert_eq!(nn_select(&s, &e("111"), &u, &t).unwrap(), e("101"));
        // weights break the tie before the order does
        let w = WeightVector::new(vec![1, 2, 3]).unwrap();
        assert_eq!(nn_select(&s, &e("111"), &w, &TieOrder::ascending(&s)).unwrap(), e("011"));
        let w = WeightVector::new(vec![3, 2, 1]).unwrap();
        assert_eq!(nn_select(&s, &e("111"), &w, &TieOrder::ascending(&s)).unwrap(), e("110"));
    }

    #[test]
    fn tie_order_validation() {
        let s = pref(3, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(TieOrder::from_sequence(&s, &[e("110")]).is_err());
        let mut seq: Vec<Evaluation> = s.feasible().collect();
        seq[1] = seq[0];
        assert!(TieOrder::from_sequence(&s, &seq).is_err());
        let mut seq: Vec<Evaluation> = s.feasible().collect();
        seq[0] = e("111");
        assert!(TieOrder::from_sequence(&s, &seq).is_err());
        assert_eq!(TieOrder::shuffled(&s, 11), TieOrder::shuffled(&s, 11));
    }

    #[test]
    fn issue_priority_with_index_order_is_descending() {
        let s = make_space(&SpaceSpec::Choose { m: 5, k: 2 }).unwrap();
        assert_eq!(
            TieOrder::by_issue_priority(&s, &[0, 1, 2, 3, 4]).unwrap(),
            TieOrder::descending(&s)
        );
        assert!(TieOrder::by_issue_priority(&s, &[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn fixed_order_selectors_never_cross() {
        let spaces = [
            pref(3, vec![(0, 1), (1, 2), (2, 0)]),
            pref4(),
            make_space(&SpaceSpec::Doctrinal).unwrap(),
            make_space(&SpaceSpec::Cycle { vertices: 6 }).unwrap(),
            make_space(&SpaceSpec::Choose { m: 4, k: 2 }).unwrap(),
        ];
        for s in &spaces {
            for w in [WeightVector::uniform(s.m()), {
                let mut v = vec![1; s.m()];
                v[0] = 2;
                WeightVector::new(v).unwrap()
            }] {
                for t in [TieOrder::ascending(s), TieOrder::descending(s), TieOrder::shuffled(s, 99)] {
                    let sel = |p: &Evaluation| nn_select(s, p, &w, &t).unwrap();
                    assert_eq!(check_h2(sel, s, &w).unwrap(), None);
                }
            }
        }
    }

    #[test]
    fn h2_disjoint_nearest_sets_pass() {
        let s = pref(3, vec![(0, 1), (1, 2), (2, 0)]);
        let u = WeightVector::uniform(3);
        let sel = |p: &Evaluation| if p.bits() == 0b111 { e("110") } else { e("001") };
        assert_eq!(check_h2(sel, &s, &u).unwrap(), None);
    }

    #[test]
    fn h2_detects_crossing_and_bad_selectors() {
        // 0000 and 1111 are both infeasible and share nearest points 0001, 1000.
        let s = EvaluationSpace::from_strings(&["0001", "1000", "0111", "1110"]).unwrap();
        let u = WeightVector::uniform(4);
        let t = TieOrder::ascending(&s);
        let sel = |p: &Evaluation| {
            let nn = nn_set(&s, p, &u).unwrap();
            if p.bits() == 0b0000 || p.bits() == 0b1111 {
                nn[1]
            } else {
                nn_select(&s, p, &u, &t).unwrap()
            }
        };
        let sel_plain = |p: &Evaluation| nn_select(&s, p, &u, &t).unwrap();
        assert_eq!(check_h2(sel_plain, &s, &u).unwrap(), None);
        // a crossing exists once two points choose differently from a shared tie
        let crossing = |p: &Evaluation| {
            if p.bits() == 0b0000 {
                e("1000")
            } else if p.bits() == 0b1001 {
                e("0001")
            } else {
                sel(p)
            }
        };
        let found = check_h2(crossing, &s, &u).unwrap();
        assert!(found.is_some(), "{found:?}");

        let bad = |_: &Evaluation| e("0111");
        assert!(matches!(check_h2(bad, &s, &u), Err(Error::NotNearestSelector { .. })));
    }

    #[test]
    fn nearest_table_matches_direct_selection() {
        let s = pref4();
        let w = WeightVector::new(vec![2, 1, 1, 1, 1, 3]).unwrap();
        let t = TieOrder::shuffled(&s, 5);
        let table = NearestTable::new(&s, w.clone(), t.clone()).unwrap();
        for p in 0..64u64 {
            let pe = Evaluation::new(p, 6).unwrap();
            assert_eq!(table.select(&pe).unwrap(), nn_select(&s, &pe, &w, &t).unwrap());
        }
    }
}
