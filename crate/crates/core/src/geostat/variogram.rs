use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariogramKind {
    /// `gamma(h) = sill * (1 - exp(-h / R))`
    Exponential,
    /// `gamma(h) = sill * (1 - exp(-h^2 / R^2))`
    Gaussian,
}

/// An isotropic stationary covariance model.
///
/// The variogram is `gamma(h) = C(0) - C(h)`; the covariance used by the
/// kriging solver is `C(h) = sill * exp(-h / R)` or
/// `sill * exp(-(h / R)^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariogramModel {
    pub kind: VariogramKind,
    pub range: f64,
    #[serde(default = "one")]
    pub sill: f64,
    #[serde(default)]
    pub mean: f64,
}

fn one() -> f64 {
    1.0
}

impl VariogramModel {
    pub fn new(kind: VariogramKind, range: f64, sill: f64, mean: f64) -> Result<Self> {
        let m = VariogramModel {
            kind,
            range,
            sill,
            mean,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn exponential(range: f64) -> Result<Self> {
        Self::new(VariogramKind::Exponential, range, 1.0, 0.0)
    }

    pub fn gaussian(range: f64) -> Result<Self> {
        Self::new(VariogramKind::Gaussian, range, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range.is_finite() && self.range > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "variogram range must be positive, got {}",
                self.range
            )));
        }
        if !(self.sill.is_finite() && self.sill > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "variogram sill must be positive, got {}",
                self.sill
            )));
        }
        if !self.mean.is_finite() {
            return Err(Error::InvalidConfig("mean must be finite".into()));
        }
        Ok(())
    }

    /// `C(h)` for a lag known to be nonnegative.
    #[inline]
    pub(crate) fn cov(&self, h: f64) -> f64 {
        let r = h / self.range;
        match self.kind {
            VariogramKind::Exponential => self.sill * (-r).exp(),
            VariogramKind::Gaussian => self.sill * (-r * r).exp(),
        }
    }

    pub fn covariance(&self, h: f64) -> Result<f64> {
        if !(h >= 0.0) {
            return Err(Error::Domain(format!("lag must be nonnegative, got {h}")));
        }
        Ok(self.cov(h))
    }

    pub fn variogram(&self, h: f64) -> Result<f64> {
        Ok(self.sill - self.covariance(h)?)
    }
}
