//! Drive/system parameters and closed-form scalar diagnostics.
//!
//! Everything is dimensionless in units of the drive angular frequency Omega:
//! time is `tau = Omega t` (period exactly 2 pi), energies are divided by
//! Omega, and hbar = 1. Conversions to physical units happen only at CLI
//! boundaries.

use serde::{Deserialize, Serialize};

use crate::pauli::Operator2;
use crate::scalar::Real;
use crate::{Error, Result};

/// Dimensionless parameters of the driven two-level system plus its bath.
///
/// `a` is the drive amplitude (a/Omega in physical terms), `delta` the static
/// gap, `theta = k T_r / Omega` the bath temperature and `kappa` the overall
/// system-bath coupling strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams<R: Real> {
    pub a: R,
    pub delta: R,
    pub theta: R,
    pub kappa: R,
}

impl<R: Real> DriveParams<R> {
    /// Validates non-negativity and that the Hamiltonian is not identically
    /// zero (`a` and `delta` cannot both vanish).
    pub fn new(a: R, delta: R, theta: R, kappa: R) -> Result<Self> {
        for (name, v) in [("a", a), ("delta", delta), ("theta", theta), ("kappa", kappa)] {
            if !v.is_finite() || v < R::zero() {
                return Err(Error::InvalidInput(format!(
                    "parameter {name} must be finite and non-negative"
                )));
            }
        }
        if a == R::zero() && delta == R::zero() {
            return Err(Error::InvalidInput(
                "a and delta cannot both be zero (Hamiltonian vanishes)".into(),
            ));
        }
        Ok(Self { a, delta, theta, kappa })
    }

    /// Closed system parameters only (no bath).
    pub fn closed(a: R, delta: R) -> Result<Self> {
        Self::new(a, delta, R::zero(), R::zero())
    }
}

/// System Hamiltonian `H(tau) = A cos(tau) sigma_z + (Delta/2) sigma_x`.
pub fn hamiltonian<R: Real>(params: &DriveParams<R>, tau: R) -> Operator2<R> {
    let z = params.a * tau.cos();
    Operator2::sigma_z()
        .scaled_re(z)
        .add(&Operator2::sigma_x().scaled_re(params.delta * R::of(0.5)))
}

/// Rotating-wave comparison Hamiltonian
/// `(A/2) cos(tau) sigma_z + (A/2) sin(tau) sigma_y`, i.e. the same drive
/// amplitude applied as a field rotating in the y-z plane.
pub fn hamiltonian_rwa<R: Real>(params: &DriveParams<R>, tau: R) -> Operator2<R> {
    let half_a = params.a * R::of(0.5);
    Operator2::sigma_z()
        .scaled_re(half_a * tau.cos())
        .add(&Operator2::sigma_y().scaled_re(half_a * tau.sin()))
}

/// Landau-Zener-Stueckelberg parameter `1 - exp(-pi Delta^2 / (2 A))`: the
/// transition probability of a linear sweep at the cosine drive's maximal
/// rate. Classifies sudden (small) versus adiabatic (near 1) driving.
pub fn lzs_parameter<R: Real>(params: &DriveParams<R>) -> Result<R> {
    if params.a <= R::zero() {
        return Err(Error::Domain(
            "lzs_parameter requires a > 0 (zero sweep rate)".into(),
        ));
    }
    let exponent = -R::PI() * params.delta * params.delta / (R::of(2.0) * params.a);
    // 1 - exp(x) evaluated stably for small |x|.
    Ok(-exponent.exp_m1())
}

/// Dimensionless Rabi frequency `sqrt(A^2 + (1 - Delta)^2)` of the
/// rotating-wave model; equals the RWA quasi-energy splitting.
pub fn rabi_frequency<R: Real>(params: &DriveParams<R>) -> R {
    let det = R::one() - params.delta;
    (params.a * params.a + det * det).sqrt()
}
