use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A uniformly sampled, real-valued, finite sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_period: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_period: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(Error::InvalidArgument("sample period must be positive"));
        }
        Ok(Self {
            samples,
            sample_period,
        })
    }

    /// Unit sample period.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, 1.0)
    }

    /// Unit impulse of length `len`.
    pub fn impulse(len: usize) -> Result<Self> {
        let mut samples = alloc::vec![0.0; len];
        if let Some(first) = samples.first_mut() {
            *first = 1.0;
        }
        Self::from_samples(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample instants `k * sample_period`.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(move |k| k as f64 * self.sample_period)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.samples.iter().map(|v| v * factor).collect(),
            self.sample_period,
        )
    }

    pub(crate) fn same_length(&self, other: &Signal) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}
