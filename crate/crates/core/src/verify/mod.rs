//! Named verification suites: worked examples reproduced exactly and
//! exhaustive checks of the manipulation-freeness results at small scale.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

mod geometry;
mod hamming;
mod structure;
mod tables;

pub use geometry::{harvest_nn_witnesses, GeometryFinding, SWEEP_CONFIGURATIONS, SWEEP_SEED};

/// One verdict with its evidence: a value, a count, or a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub evidence: String,
}

impl Check {
    pub fn new(label: impl Into<String>, passed: bool, evidence: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            passed,
            evidence: evidence.into(),
        }
    }

    /// Passes when `got == expected`.
    pub fn expect(label: impl Into<String>, got: impl fmt::Display, expected: impl fmt::Display) -> Self {
        let (got, expected) = (got.to_string(), expected.to_string());
        let passed = got == expected;
        let evidence = if passed {
            got
        } else {
            format!("got {got}, expected {expected}")
        };
        Check::new(label, passed, evidence)
    }
}

/// Outcome of one suite. `Display` omits the runtime so that reports are
/// byte-identical across runs.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub runtime: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.name)?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let mut lines = c.evidence.lines();
            write!(f, "{mark} {}", c.label)?;
            if let Some(first) = lines.next() {
                write!(f, ": {first}")?;
            }
            writeln!(f)?;
            for line in lines {
                writeln!(f, "    {line}")?;
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

/// Suite names with a one-line description each.
pub const SUITES: [(&str, &str); 10] = [
    ("tables", "worked examples: paradox profiles, plurality scenarios, four-candidate tables, welfare separation"),
    ("partition-fmf", "partition aggregators admit no full manipulation"),
    ("pmf-iia-monotone", "partial-manipulation freeness versus IIA and monotonicity"),
    ("nn-fmf", "nearest-neighbour corrections of monotone stages admit no full manipulation"),
    ("swm-fmf", "the welfare maximizer admits no full manipulation and is anonymous"),
    ("witness-interval", "stage outputs of every Hamming witness span an interval missing the space"),
    ("witness-mipe-type", "stage outputs of every Hamming witness differ in MIPE type"),
    ("three-candidate-hmf", "every nearest-neighbour correction on three candidates is Hamming-free"),
    ("four-candidate-hamming", "majority with nearest-neighbour correction on four candidates is Hamming-manipulable"),
    ("committee-hmf", "the welfare maximizer on k-of-m spaces is Hamming-free and picks the top columns"),
];

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        "tables" => tables::run(),
        "partition-fmf" => structure::partitions(),
        "pmf-iia-monotone" => structure::pmf(),
        "nn-fmf" => structure::nn_full(),
        "swm-fmf" => structure::swm_full(),
        "witness-interval" => geometry::interval_suite(),
        "witness-mipe-type" => geometry::mipe_type_suite(),
        "three-candidate-hmf" => hamming::three_candidates(),
        "four-candidate-hamming" => hamming::four_candidates(),
        "committee-hmf" => hamming::committee(),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }?;
    Ok(SuiteReport {
        name: name.to_string(),
        checks,
        runtime: start.elapsed(),
    })
}
