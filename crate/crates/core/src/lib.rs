pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod measure;
pub mod spectra;
pub mod diagnostics;
