//! Cepstral distances, subspace-angle norms and phase-type tests for SISO
//! linear time-invariant systems.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cluster;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod lti;
pub mod metrics;
pub mod phase;
pub mod spectral;
pub mod subspace;

pub use error::{Error, Result};
