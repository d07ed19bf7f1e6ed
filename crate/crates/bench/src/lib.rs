//! Fixtures shared by the benchmarks.

use evalagg::aggregate::IiaStage;
use evalagg::builtin::builtin_space;
use evalagg::manipulate::ManipulationKind;
use evalagg::metric::WeightVector;
use evalagg::space::EvaluationSpace;

pub fn space(name: &str) -> EvaluationSpace {
    builtin_space(name).unwrap_or_else(|| panic!("unknown space {name}"))
}

/// Issue-wise majority over `voters` voters on every issue of `space`.
pub fn majority(space: &EvaluationSpace, voters: usize) -> IiaStage {
    IiaStage::majority(voters, space.m()).expect("valid majority")
}

pub fn hamming(space: &EvaluationSpace) -> ManipulationKind {
    ManipulationKind::Hamming(WeightVector::uniform(space.m()))
}
