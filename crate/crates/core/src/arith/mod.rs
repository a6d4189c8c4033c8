//! Exact integer and rational arithmetic: reduced rationals, algebraic values
//! of the contraction ratio, signed-digit expansions and the set `Q`.

mod algebraic;
mod digits;
mod qset;
mod rational;

pub use algebraic::{pure_power_detect, AlgebraicNumber};
pub use digits::{signed_qadic_expand, signed_qadic_expand_i64, SignedDigits};
pub use qset::{q_set_member, valuation, QSet};
pub use rational::{dist_to_int_f64, frac_nearest_f64, Rational};
