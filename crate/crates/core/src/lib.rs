//! Schrödinger propagator on product cones `C(ρ S^{n-1})` with an
//! inverse-square potential `c/r²`.
//!
//! The kernel is evaluated through its Bessel–Gegenbauer spectral series
//! ([`kernel_series`]). Around it sit the stationary-phase critical sets
//! ([`critical_points`]), the closed-form leading asymptotics and decay
//! envelopes ([`asymptotics`]), and the scan/fit machinery that turns those
//! predictions into pass/fail numbers ([`harness`]).

// Negated float comparisons are used so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod critical_points;
pub mod error;
pub mod harness;
pub mod kernel_series;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use kernel_series::{
    eval_kernel, eval_kernel_detailed, eval_series, eval_series_angles, truncation_index, ComplexValue, KernelPoint,
    PhysicalPoint, SeriesResult,
};
pub use spectrum::ConeParams;
