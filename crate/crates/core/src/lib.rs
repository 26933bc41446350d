//! Numerical checks of Hermite–Hadamard type bounds for strongly
//! φ_h-convex functions.
//!
//! The crate is layered bottom-up: [`funcspace`] holds the function, warp
//! and weight objects, [`quadrature`] integrates them, [`convexity`]
//! certifies the hypotheses by sampling, [`inequalities`] evaluates both
//! sides of every identity and bound, and [`harness`] runs whole suites.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod error;
pub mod funcspace;
pub mod harness;
pub mod inequalities;
pub mod quadrature;

pub use convexity::{certify, max_modulus, ConvexityCertificate};
pub use error::{Error, Result};
pub use funcspace::{
    DifferentiableFunction, FunctionFamily, HFamily, HFunction, Interval, PhiFamily, PhiMap,
    StrongParams,
};
pub use harness::{CaseSpec, Check, Format, Report, RunOptions, Summary};
pub use inequalities::{CorollaryId, Status, Tolerances, VerificationRecord};

/// Version string written into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
