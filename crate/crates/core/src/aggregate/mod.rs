//! Aggregators: IIA stages, plurality, dictators, partition aggregators,
//! nearest-neighbour corrections and the Hamming welfare maximizer, plus
//! exhaustive structural property checks.

mod rules;
mod spec;
mod stage;
mod structural;

pub use rules::{
    partition_apply, plurality, swm, swm_topk, Aggregate, Aggregator, FnAggregator, IssuePartition, NnCorrected,
};
pub use spec::{AggregatorSpec, Family, StageSpec};
pub use stage::{issuewise_majority, stage_apply, IiaStage, IssueRule, MAX_ENUMERABLE_VOTERS, MAX_STAGE_VOTERS};
pub use structural::{check_structural, ProfileOutcome, Property, StructuralReport};
