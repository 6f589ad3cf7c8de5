//! Outage capacity of an N-link, M-antenna MIMO interference channel in
//! which every receiver decodes its own streams with a zero-forcing filter.
//!
//! The crate has four layers:
//!
//! - [`special`]: log-gamma and the Gamma tail the closed forms are built on.
//! - [`analytic`]: closed-form success probabilities for equal and
//!   heterogeneous interferer stream counts, and the single-stream threshold.
//! - [`montecarlo`]: full-channel simulation (complex Gaussian matrices,
//!   zero-forcing projection) plus a direct-distribution sampler.
//! - [`optimizer`]: best response, sum-capacity search and the empirical
//!   link-count threshold.
//!
//! [`oracle`] holds numerical checks (adaptive quadrature, two-sample
//! Kolmogorov–Smirnov) that are deliberately independent of the closed forms.

pub mod analytic;
pub mod error;
pub mod montecarlo;
pub mod optimizer;
pub mod oracle;
pub mod special;
pub mod types;

pub use error::{Error, Result};
pub use types::{Diagnostics, GammaParams, OutageReport, StreamAllocation, SystemConfig};
