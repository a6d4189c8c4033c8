//! Bi-zero sets, selection maps and the integer D-set combinatorics behind them.

mod bizero;
mod clique;
mod dset;
mod hadamard;
mod selection;

pub use bizero::{bizero_failures, bizero_verify, canonical_spectrum, maximal_bizero_set, BiZeroSet, Provenance};
pub use clique::{clique_pool, integer_elements, orthogonal_clique_search};
pub use dset::{
    brute_force_maximal_dsets, brute_force_witnessed_dsets, dset_verify, dset_window_maximality,
    window_images, WindowReport,
};
pub use hadamard::{hadamard_check, hadamard_residual};
pub use selection::{admissible_digits, Condition, SelectionMap, ValidationReport, Violation, Word};

use serde::Serialize;

use crate::error::{Error, Result};

/// Result of a budgeted search; `complete` is false when the budget ran out
/// and `value` holds what was found so far.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome<T> {
    pub value: T,
    pub complete: bool,
    pub nodes: u64,
}

impl<T> SearchOutcome<T> {
    pub fn into_result(self, budget: u64) -> Result<T> {
        if self.complete {
            Ok(self.value)
        } else {
            Err(Error::BudgetExceeded { budget })
        }
    }
}
