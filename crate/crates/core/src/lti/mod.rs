//! SISO linear time-invariant models.
//!
//! Two representations are kept side by side: [`StateSpaceModel`] for
//! simulation and inversion, and [`ZeroPoleGain`] for the factored transfer
//! function that the cepstral closed forms are written in.

mod example;
mod signal;
mod state_space;
mod zpk;

pub use example::{
    make_example_signals, maximum_phase_reference, minimum_phase_reference, mixed_phase_reference,
    ExampleSignals, DEFAULT_DAMPING, EXAMPLE_LENGTH, EXAMPLE_NOISE_STD, EXAMPLE_STEP,
};
pub use signal::Signal;
pub use state_space::{roots_from_state_space, StateSpaceModel, INVERTIBILITY_TOL};
pub use zpk::{RootPattern, ZeroPoleGain, MULTIPLICITY_TOL, ORIGIN_TOL, UNIT_CIRCLE_TOL};

use alloc::vec::Vec;
use core::f64::consts::PI;

/// The `L`-point uniform grid `ω_m = 2πm/L` on `[0, 2π)`.
pub fn frequency_grid(len: usize) -> Vec<f64> {
    (0..len).map(|m| 2.0 * PI * m as f64 / len as f64).collect()
}
