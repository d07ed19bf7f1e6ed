use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metric::{TieOrder, WeightVector};
use crate::space::EvaluationSpace;

use super::rules::{Aggregator, IssuePartition};
use super::stage::IiaStage;

/// The IIA stage inside a nearest-neighbour correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageSpec {
    Majority,
    /// Per-issue thresholds in `1..=n+1`.
    Quota(Vec<usize>),
}

impl StageSpec {
    pub fn build(&self, voters: usize, issues: usize) -> Result<IiaStage> {
        match self {
            StageSpec::Majority => IiaStage::majority(voters, issues),
            StageSpec::Quota(ts) => {
                if ts.len() != issues {
                    return Err(Error::InvalidAggregator(format!(
                        "quota lists {} thresholds for {issues} issues",
                        ts.len()
                    )));
                }
                if let Some(&t) = ts.iter().find(|&&t| t == 0 || t > voters + 1) {
                    return Err(Error::InvalidAggregator(format!(
                        "quota threshold {t} outside 1..={}",
                        voters + 1
                    )));
                }
                IiaStage::quota(voters, ts)
            }
        }
    }
}

impl fmt::Display for StageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageSpec::Majority => f.write_str("majority"),
            StageSpec::Quota(ts) => write!(f, "quota:{}", join(ts, ",")),
        }
    }
}

/// Where an aggregator sits among the correction families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// IIA and monotone, possibly inconsistent.
    IiaMonotone,
    /// Nearest-neighbour correction with a fixed tie order; `lexicographic`
    /// when the order is ascending.
    TieBrokenNearest { lexicographic: bool },
    /// Consistent correction of an IIA monotone map that looks at the whole
    /// profile.
    WelfareCorrection,
    Other,
}

/// A textual aggregator description.
///
/// Grammar: `dictator:<i>` | `majority` | `quota:<t1,...,tm>` | `plurality`
/// | `partition:<K1;K2;...>` | `nn(majority)` | `nn(quota:...)` | `swm`.
/// Voters and issues are 1-based in text and 0-based in values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AggregatorSpec {
    Dictator(usize),
    Stage(StageSpec),
    Plurality,
    Partition(Vec<Vec<usize>>),
    Nn(StageSpec),
    Swm,
}

impl AggregatorSpec {
    /// Builds the aggregator for `voters` voters. Missing weights default
    /// to uniform; a missing tie order defaults to descending for plurality
    /// and ascending otherwise.
    pub fn build<'a>(
        &self,
        space: &'a EvaluationSpace,
        voters: usize,
        weights: Option<WeightVector>,
        ties: Option<TieOrder>,
    ) -> Result<Aggregator<'a>> {
        if voters == 0 {
            return Err(Error::InvalidAggregator("at least one voter is required".into()));
        }
        let m = space.m();
        let weights = weights.unwrap_or_else(|| WeightVector::uniform(m));
        match self {
            AggregatorSpec::Dictator(i) => Aggregator::dictator(space, voters, *i),
            AggregatorSpec::Stage(s) => Aggregator::stage(space, s.build(voters, m)?),
            AggregatorSpec::Plurality => {
                let ties = ties.unwrap_or_else(|| TieOrder::descending(space));
                Aggregator::plurality(space, voters, ties)
            }
            AggregatorSpec::Partition(blocks) => Aggregator::partition(space, voters, IssuePartition::new(m, blocks)?),
            AggregatorSpec::Nn(s) => {
                let ties = ties.unwrap_or_else(|| TieOrder::ascending(space));
                Aggregator::nn_corrected(space, s.build(voters, m)?, weights, ties)
            }
            AggregatorSpec::Swm => {
                let ties = ties.unwrap_or_else(|| TieOrder::ascending(space));
                Aggregator::swm(space, voters, weights, ties)
            }
        }
    }

    /// Family membership, given whether the tie order in use is ascending.
    pub fn family(&self, ascending_ties: bool) -> Family {
        match self {
            AggregatorSpec::Dictator(_) | AggregatorSpec::Stage(_) => Family::IiaMonotone,
            AggregatorSpec::Nn(_) => Family::TieBrokenNearest {
                lexicographic: ascending_ties,
            },
            AggregatorSpec::Swm => Family::WelfareCorrection,
            AggregatorSpec::Plurality | AggregatorSpec::Partition(_) => Family::Other,
        }
    }
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_index(s: &str, what: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i - 1),
        _ => Err(Error::InvalidAggregator(format!("bad {what} `{s}`"))),
    }
}

fn parse_stage(s: &str) -> Result<StageSpec> {
    if s == "majority" {
        return Ok(StageSpec::Majority);
    }
    let Some(list) = s.strip_prefix("quota:") else {
        return Err(Error::InvalidAggregator(format!("unknown stage `{s}`")));
    };
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidAggregator(format!("bad quota threshold `{t}`")))
        })
        .collect::<Result<_>>()
        .map(StageSpec::Quota)
}

impl FromStr for AggregatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(i) = s.strip_prefix("dictator:") {
            return Ok(AggregatorSpec::Dictator(parse_index(i, "voter")?));
        }
        if let Some(blocks) = s.strip_prefix("partition:") {
            let blocks = blocks
                .split(';')
                .map(|b| {
                    if b.trim().is_empty() {
                        Ok(Vec::new())
                    } else {
                        b.split(',').map(|j| parse_index(j, "issue")).collect()
                    }
                })
                .collect::<Result<_>>()?;
            return Ok(AggregatorSpec::Partition(blocks));
        }
        if let Some(inner) = s.strip_prefix("nn(").and_then(|r| r.strip_suffix(')')) {
            return Ok(AggregatorSpec::Nn(parse_stage(inner.trim())?));
        }
        match s {
            "plurality" => Ok(AggregatorSpec::Plurality),
            "swm" => Ok(AggregatorSpec::Swm),
            _ => parse_stage(s).map(AggregatorSpec::Stage).map_err(|_| {
                Error::InvalidAggregator(format!("unknown aggregator `{s}`"))
            }),
        }
    }
}

impl fmt::Display for AggregatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregatorSpec::Dictator(i) => write!(f, "dictator:{}", i + 1),
            AggregatorSpec::Stage(s) => s.fmt(f),
            AggregatorSpec::Plurality => f.write_str("plurality"),
            AggregatorSpec::Partition(blocks) => {
                let text: Vec<String> = blocks
                    .iter()
                    .map(|b| join(&b.iter().map(|j| j + 1).collect::<Vec<_>>(), ","))
                    .collect();
                write!(f, "partition:{}", text.join(";"))
            }
            AggregatorSpec::Nn(s) => write!(f, "nn({s})"),
            AggregatorSpec::Swm => f.write_str("swm"),
        }
    }
}
