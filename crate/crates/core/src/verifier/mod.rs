//! Independent checks: certificate validation, a row-echelon oracle and the
//! property suite for the shift-class structure of PG(4, q).
//!
//! Nothing here uses the span or adjacency code of [`crate::geometry`]; the
//! property suite does call into it, since that is what it is testing.

mod arith;
mod cycle;
mod echelon;
mod props;
mod report;

pub use arith::GfQ;
pub use cycle::{verify_certificate, Validity, VerifyReport};
pub use echelon::{EchelonOracle, OracleError};
pub use props::{
    oracle_sweep, run_property_suite, OracleReport, PropertyReport, SuiteMode, DEFAULT_SAMPLE_SEED,
};
pub use report::{CheckResult, Status};
