//! Spectrality classification, the `Q(ξ)` functional and quantitative constants.

mod classify;
mod constants;
mod qfunc;

pub use crate::arith::pure_power_detect;
pub use classify::{classify, CaseTag, SpectralVerdict, Verdict};
pub use constants::{
    alpha_bound, alpha_property_check, bessel_partial_check, contraction_constant, AlphaBound, AlphaReport,
    BesselReport,
};
pub use qfunc::{default_grid, q_deficit_scan, q_function, QEvaluator, QScanResult};
