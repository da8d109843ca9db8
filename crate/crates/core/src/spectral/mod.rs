//! Power spectra and cepstra.
//!
//! Power cepstra are computed from an estimated or exact power spectrum, from
//! pole-zero data or from the trace formula on a state-space model; complex
//! cepstra from a signal's FFT or from pole-zero data.

mod cepstrum;
mod psd;
mod unwrap;

pub use cepstrum::{
    complex_cepstrum, complex_cepstrum_from_response, complex_cepstrum_from_zpk,
    power_cepstrum_from_psd, power_cepstrum_from_state_space, power_cepstrum_from_zpk,
    power_cepstrum_of_signal, transfer_cepstrum_from_io, transfer_complex_cepstrum_from_io,
    CepstrumKind, CepstrumSequence, DEFAULT_ORDER, SPECTRAL_NULL_TOL,
};
pub use psd::{
    estimate_psd, psd_from_response, psd_periodogram, psd_welch, Estimator, PsdMethod,
    SpectrumEstimate, DEFAULT_OVERLAP, MAX_WELCH_WINDOW, MIN_WELCH_LENGTH,
};
pub use unwrap::unwrap_phase;
