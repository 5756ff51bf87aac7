//! Input device descriptions and their information-theoretic capacity.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// One observable state variable of an input device (an axis, a button, a
/// sensor channel) together with how many distinct values it can report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceVariable {
    name: String,
    cardinality: u64,
}

impl DeviceVariable {
    pub fn new(name: impl Into<String>, cardinality: u64) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Validation("empty variable name".into()));
        }
        if cardinality == 0 {
            return Err(Error::Validation(format!(
                "variable {name:?} must have at least one state"
            )));
        }
        Ok(Self { name, cardinality })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    /// Bits contributed by this variable alone: `log2(cardinality)`.
    pub fn bits(&self) -> f64 {
        (self.cardinality as f64).log2()
    }
}

/// An input device: a set of jointly observable variables sampled at a fixed
/// rate.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDeviceSpec {
    name: String,
    variables: Vec<DeviceVariable>,
    sampling_rate_hz: f64,
}

impl InputDeviceSpec {
    pub fn new(
        name: impl Into<String>,
        variables: Vec<DeviceVariable>,
        sampling_rate_hz: f64,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Validation("empty device name".into()));
        }
        if variables.is_empty() {
            return Err(Error::Validation(format!(
                "device {name:?} needs at least one variable"
            )));
        }
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v.name()) {
                return Err(Error::Validation(format!(
                    "device {name:?} declares variable {:?} twice",
                    v.name()
                )));
            }
        }
        if !sampling_rate_hz.is_finite() || sampling_rate_hz <= 0.0 {
            return Err(Error::Validation(format!(
                "device {name:?} needs a positive sampling rate, got {sampling_rate_hz}"
            )));
        }
        Ok(Self {
            name,
            variables,
            sampling_rate_hz,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[DeviceVariable] {
        &self.variables
    }

    pub fn sampling_rate_hz(&self) -> f64 {
        self.sampling_rate_hz
    }

    /// Bits one full sample of the device can carry, assuming the variables
    /// are independent and uniform: the sum of `log2(cardinality)` over all
    /// variables.
    ///
    /// Summing logs (rather than taking the log of the product of
    /// cardinalities) keeps the computation in log space, so devices with
    /// astronomically many joint states do not overflow.
    pub fn instantaneous_capacity(&self) -> f64 {
        self.variables.iter().map(DeviceVariable::bits).sum()
    }

    /// Bits per second the device can emit: sampling rate times
    /// instantaneous capacity.
    pub fn bandwidth(&self) -> f64 {
        self.sampling_rate_hz * self.instantaneous_capacity()
    }
}
