//! Thermal bosonic reservoir spectral functions.
//!
//! The downward (emission) and upward (absorption) weights are
//!
//! ```text
//! gamma(w)  = kappa w^p exp(w/theta) / (exp(w/theta) - 1)   (= kappa w^p (nbar + 1))
//! gamma'(w) = kappa w^p / (exp(w/theta) - 1)                (= kappa w^p nbar)
//! ```
//!
//! with `p = 3` by default (photon/phonon mode density times dipole-type
//! coupling). `theta = k T_r / Omega` in drive units. Zero temperature is an
//! exact branch, not a limit of the formula.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::{Error, Result};

/// Reservoir temperature, coupling strength and spectral exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec<R: Real> {
    pub theta: R,
    pub kappa: R,
    /// Exponent of the spectral power law; 3 unless doing sensitivity studies.
    #[serde(default = "default_exponent")]
    pub exponent: u32,
}

fn default_exponent() -> u32 {
    3
}

impl<R: Real> BathSpec<R> {
    pub fn new(theta: R, kappa: R) -> Result<Self> {
        Self::with_exponent(theta, kappa, 3)
    }

    pub fn with_exponent(theta: R, kappa: R, exponent: u32) -> Result<Self> {
        for (name, v) in [("theta", theta), ("kappa", kappa)] {
            if !v.is_finite() || v < R::zero() {
                return Err(Error::InvalidInput(format!(
                    "bath parameter {name} must be finite and non-negative"
                )));
            }
        }
        Ok(Self { theta, kappa, exponent })
    }

    fn power(&self, omega: R) -> R {
        omega.powi(self.exponent as i32)
    }

    fn check_omega(&self, omega: R) -> Result<()> {
        if !(omega > R::zero()) || !omega.is_finite() {
            return Err(Error::Domain(format!(
                "bath spectral functions need omega > 0, got {omega}"
            )));
        }
        Ok(())
    }

    /// Emission weight `gamma(omega)`; reduces to `kappa omega^p` at zero
    /// temperature.
    pub fn gamma(&self, omega: R) -> Result<R> {
        self.check_omega(omega)?;
        if self.theta == R::zero() {
            return Ok(self.kappa * self.power(omega));
        }
        // e^x / (e^x - 1) = 1 / (1 - e^-x), stable for both x >> 1 and x << 1.
        let x = omega / self.theta;
        Ok(self.kappa * self.power(omega) / (-(-x).exp_m1()))
    }

    /// Absorption weight `gamma'(omega)`; vanishes at zero temperature.
    pub fn gamma_prime(&self, omega: R) -> Result<R> {
        self.check_omega(omega)?;
        if self.theta == R::zero() {
            return Ok(R::zero());
        }
        let x = omega / self.theta;
        Ok(self.kappa * self.power(omega) / x.exp_m1())
    }
}
