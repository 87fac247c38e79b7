use alloc::vec::Vec;

use crate::order::ComplexScalar;
use crate::point::Point;

/// Outcome of a sampling-based hypothesis check.
///
/// `premises_met` counts the samples at which the checked implication's
/// premise held; for unconditional clauses it equals `samples_tested`. A
/// passing report with `premises_met == 0` is vacuous.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    pub samples_tested: usize,
    pub premises_met: usize,
    pub witness: Option<Witness>,
}

/// The first counterexample found: sample index, the clause it violates, the
/// input points and the complex values involved in the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub clause: &'static str,
    pub sample_index: usize,
    pub points: Vec<Point>,
    pub values: Vec<ComplexScalar>,
}

impl CheckReport {
    pub(crate) fn pass(samples_tested: usize, premises_met: usize) -> Self {
        CheckReport {
            passed: true,
            samples_tested,
            premises_met,
            witness: None,
        }
    }

    pub(crate) fn fail(samples_tested: usize, premises_met: usize, witness: Witness) -> Self {
        CheckReport {
            passed: false,
            samples_tested,
            premises_met,
            witness: Some(witness),
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.passed && self.premises_met == 0
    }
}
