use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::search::{check_budget, decode_digits, fill_rows, next_digits, profile_count};
use crate::space::{mask_to_string, Evaluation, EvaluationSpace, Profile};

use super::Aggregate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Iia,
    Monotone,
    Anonymous,
    Dictatorial,
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iia" => Ok(Property::Iia),
            "monotone" => Ok(Property::Monotone),
            "anonymous" => Ok(Property::Anonymous),
            "dictatorial" => Ok(Property::Dictatorial),
            _ => Err(Error::InvalidAggregator(format!("unknown property `{s}`"))),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Iia => "iia",
            Property::Monotone => "monotone",
            Property::Anonymous => "anonymous",
            Property::Dictatorial => "dictatorial",
        })
    }
}

/// A profile together with the aggregator's outcome on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileOutcome {
    pub profile: Profile,
    pub outcome: Evaluation,
}

/// Exhaustive verdict on one structural property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub property: Property,
    pub holds: bool,
    /// For `dictatorial`, the dictator when the property holds.
    pub dictator: Option<usize>,
    /// Canonically first counterexample profiles when the property fails.
    pub witness: Vec<ProfileOutcome>,
    pub detail: String,
}

impl fmt::Display for StructuralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, if self.holds { "holds" } else { "fails" })?;
        if let Some(d) = self.dictator {
            write!(f, " (voter {})", d + 1)?;
        }
        if !self.detail.is_empty() {
            write!(f, "\n{}", self.detail)?;
        }
        for w in &self.witness {
            write!(f, "\n  profile {} -> {}", w.profile, w.outcome)?;
        }
        Ok(())
    }
}

struct Checker<'s, 'f> {
    space: &'s EvaluationSpace,
    agg: &'f dyn Aggregate,
    n: usize,
    m: usize,
}

impl Checker<'_, '_> {
    fn witness(&self, rows: &[u64]) -> ProfileOutcome {
        ProfileOutcome {
            profile: Profile::from_masks(self.m, rows.to_vec()),
            outcome: Evaluation::new(self.agg.aggregate(rows), self.m).expect("valid width"),
        }
    }

    fn report(&self, property: Property, failure: Option<(String, Vec<&[u64]>)>) -> StructuralReport {
        match failure {
            None => StructuralReport {
                property,
                holds: true,
                dictator: None,
                witness: Vec::new(),
                detail: String::new(),
            },
            Some((detail, profiles)) => StructuralReport {
                property,
                holds: false,
                dictator: None,
                witness: profiles.into_iter().map(|r| self.witness(r)).collect(),
                detail,
            },
        }
    }

    fn for_each_profile(&self, mut visit: impl FnMut(u64, &[u64]) -> bool) {
        let xs = self.space.masks();
        let mut digits = vec![0usize; self.n];
        let mut rows = vec![0u64; self.n];
        let mut index = 0u64;
        loop {
            fill_rows(xs, &digits, &mut rows);
            if !visit(index, &rows) || !next_digits(&mut digits, xs.len()) {
                return;
            }
            index += 1;
        }
    }

    fn rows_at(&self, index: u64) -> Vec<u64> {
        let mut digits = vec![0usize; self.n];
        decode_digits(index, self.space.len(), &mut digits);
        let mut rows = vec![0u64; self.n];
        fill_rows(self.space.masks(), &digits, &mut rows);
        rows
    }

    fn iia(&self) -> StructuralReport {
        // first[j][column] = (profile index, social bit)
        let mut first: Vec<Vec<Option<(u64, bool)>>> = vec![vec![None; 1 << self.n]; self.m];
        let mut failure = None;
        self.for_each_profile(|index, rows| {
            let out = self.agg.aggregate(rows);
            for (j, seen) in first.iter_mut().enumerate() {
                let shift = self.m - 1 - j;
                let col = rows.iter().fold(0u64, |acc, &r| (acc << 1) | (r >> shift & 1));
                let bit = out >> shift & 1 != 0;
                match seen[col as usize] {
                    None => seen[col as usize] = Some((index, bit)),
                    Some((earlier, b)) if b != bit => {
                        failure = Some((earlier, rows.to_vec(), j, col));
                        return false;
                    }
                    Some(_) => {}
                }
            }
            true
        });
        let failure = failure.map(|(earlier, rows, j, col)| (self.rows_at(earlier), rows, j, col));
        self.report(
            Property::Iia,
            failure.as_ref().map(|(a, b, j, col)| {
                (
                    format!("issue {} decided differently on column {}", j + 1, mask_to_string(*col, self.n)),
                    vec![a.as_slice(), b.as_slice()],
                )
            }),
        )
    }

    fn monotone(&self) -> StructuralReport {
        let xs = self.space.masks();
        let mut failure = None;
        self.for_each_profile(|_, rows| {
            let fx = self.agg.aggregate(rows);
            let mut alt = rows.to_vec();
            for i in 0..self.n {
                for &y in xs {
                    if y == rows[i] {
                        continue;
                    }
                    alt[i] = y;
                    let fy = self.agg.aggregate(&alt);
                    // issues the voter moved, where society moved away from the new position
                    let bad = (fx ^ fy) & (rows[i] ^ y) & (fy ^ y);
                    if bad != 0 {
                        let j = self.m - 1 - (63 - bad.leading_zeros() as usize);
                        failure = Some((rows.to_vec(), alt.clone(), i, j));
                        return false;
                    }
                }
                alt[i] = rows[i];
            }
            true
        });
        self.report(
            Property::Monotone,
            failure.as_ref().map(|(a, b, i, j)| {
                (
                    format!("voter {} moves issue {}, society moves the other way", i + 1, j + 1),
                    vec![a.as_slice(), b.as_slice()],
                )
            }),
        )
    }

    fn anonymous(&self) -> StructuralReport {
        let mut failure = None;
        self.for_each_profile(|_, rows| {
            let fx = self.agg.aggregate(rows);
            let mut alt = rows.to_vec();
            for i in 0..self.n.saturating_sub(1) {
                if rows[i] == rows[i + 1] {
                    continue;
                }
                alt.swap(i, i + 1);
                if self.agg.aggregate(&alt) != fx {
                    failure = Some((rows.to_vec(), alt, i));
                    return false;
                }
                alt.swap(i, i + 1);
            }
            true
        });
        self.report(
            Property::Anonymous,
            failure.as_ref().map(|(a, b, i)| {
                (
                    format!("swapping voters {} and {} changes the outcome", i + 1, i + 2),
                    vec![a.as_slice(), b.as_slice()],
                )
            }),
        )
    }

    fn dictatorial(&self) -> StructuralReport {
        let mut counter: Vec<Option<Vec<u64>>> = vec![None; self.n];
        self.for_each_profile(|_, rows| {
            let out = self.agg.aggregate(rows);
            for (i, c) in counter.iter_mut().enumerate() {
                if c.is_none() && out != rows[i] {
                    *c = Some(rows.to_vec());
                }
            }
            counter.iter().any(Option::is_none)
        });
        if let Some(d) = counter.iter().position(Option::is_none) {
            return StructuralReport {
                property: Property::Dictatorial,
                holds: true,
                dictator: Some(d),
                witness: Vec::new(),
                detail: String::new(),
            };
        }
        let profiles: Vec<&[u64]> = counter.iter().map(|c| c.as_deref().expect("all set")).collect();
        self.report(
            Property::Dictatorial,
            Some(("each voter is overruled; first profile per voter".into(), profiles)),
        )
    }
}

/// Exhaustively decides `property` for `agg` over all profiles of `space`.
/// `budget` caps the number of aggregator evaluations.
pub fn check_structural(
    space: &EvaluationSpace,
    agg: &dyn Aggregate,
    property: Property,
    budget: u64,
) -> Result<StructuralReport> {
    let n = agg.voters();
    let m = agg.issues();
    if m != space.m() {
        return Err(Error::LengthMismatch {
            expected: space.m(),
            found: m,
        });
    }
    let profiles = profile_count(space.len(), n);
    let needed = match property {
        Property::Monotone => profiles.saturating_mul((n * space.len()) as u128),
        Property::Anonymous => profiles.saturating_mul(n as u128),
        Property::Iia => {
            if n > 20 {
                return Err(Error::ArityMismatch { expected: 20, found: n });
            }
            profiles
        }
        Property::Dictatorial => profiles,
    };
    check_budget(needed, budget)?;
    let checker = Checker { space, agg, n, m };
    Ok(match property {
        Property::Iia => checker.iia(),
        Property::Monotone => checker.monotone(),
        Property::Anonymous => checker.anonymous(),
        Property::Dictatorial => checker.dictatorial(),
    })
}
