//! Virtual-cell ("fog") uplink resource allocation.
//!
//! Base-stations are grouped into virtual cells, each cell allocates channel
//! access and transmit power to its own users while ignoring the rest of the
//! network, and the resulting allocation is scored network-wide with all
//! cross-cell interference included.
//!
//! - [`network`]: instance geometry, free-space channel gains, unit helpers.
//! - [`clustering`]: minimax-linkage agglomerative clustering, exhaustive
//!   partition enumeration and nearest-BS user affiliation.
//! - [`alloc`]: SINR math, the high-SINR bound and the joint
//!   (continuous-relaxation) power solver.
//! - [`alternating`]: the user-centric and BS-centric alternating schemes.
//! - [`evaluation`]: network sum rate, exhaustive clustering search, the
//!   brute-force grid oracle and the Monte Carlo experiment harness.
//! - [`cli`]: config files, CSV/SVG writers and the command implementations.

pub mod alloc;
pub mod alternating;
pub mod cli;
pub mod clustering;
mod error;
pub mod evaluation;
pub mod network;

pub use error::{Error, Result};
