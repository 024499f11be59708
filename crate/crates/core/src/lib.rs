//! Floquet-Markov dynamics of a periodically driven two-level system coupled
//! to a bosonic thermal bath.
//!
//! The system Hamiltonian, in units of the drive frequency (tau = Omega * t,
//! hbar = 1), is
//!
//! ```text
//! H(tau) = A cos(tau) sigma_z + (Delta / 2) sigma_x
//! ```
//!
//! which produces a sequence of avoided level crossings twice per drive
//! period. The crate computes, for this system:
//!
//! * Floquet quasi-energies and periodic modes from the one-period propagator
//!   ([`floquet`]),
//! * Fourier components of a coupling operator in the Floquet basis
//!   ([`floquet::fourier_components`]),
//! * secular Born-Markov dissipation rates, quasistationary populations,
//!   decoherence times and reduced dynamics ([`master`]),
//! * the large-amplitude Airy approximation of the Floquet modes and the
//!   high-temperature rate scaling law ([`airy`]),
//! * magnetization (hysteresis) curves, including an instantaneous-dephasing
//!   ladder regime for molecular-nanomagnet parameters ([`hysteresis`]).
//!
//! All core math is generic over the floating-point scalar through the
//! [`Real`] trait; concrete `f64` aliases are exported at the crate root.

pub mod airy;
pub mod bath;
pub mod drive;
pub mod floquet;
pub mod hysteresis;
pub mod master;
pub mod pauli;
mod scalar;

pub use bath::BathSpec;
pub use drive::DriveParams;
pub use floquet::{Coupling, FloquetSolution, FourierTable, SolveOptions};
pub use master::{RateSet, ReducedState};
pub use pauli::{Basis, DensityMatrix2, Operator2, StateVector2};
pub use scalar::Real;

use num_complex::Complex;

/// Complex scalar over `f64`.
pub type C64 = Complex<f64>;
/// Complex scalar over `f32`.
pub type C32 = Complex<f32>;

/// 2x2 operator over `f64`.
pub type Op2 = Operator2<f64>;
/// Two-component state vector over `f64`.
pub type Ket2 = StateVector2<f64>;
/// 2x2 density matrix over `f64`.
pub type Rho2 = DensityMatrix2<f64>;

/// Errors produced by the numerical pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Quasi-energies too close to each other (or to the zone edge) for the
    /// secular master equation to be meaningful.
    #[error("quasi-energy spectrum degenerate (gap {gap:.3e}); secular rates are not defined")]
    Degenerate { gap: f64 },
    /// A Fourier series did not decay below the truncation tolerance.
    #[error("Fourier truncation error: {0}")]
    Truncation(String),
    /// Non-finite values appeared during a computation.
    #[error("numerical instability: {0}")]
    NonFinite(String),
    /// All transition rates vanish; the reduced dynamics has no unique fixed
    /// point.
    #[error("dynamics decoupled from the bath: no unique quasistationary state")]
    DynamicsDecoupled,
    /// The computed generator would be unphysical (e.g. growing coherences).
    #[error("model consistency error: {0}")]
    ModelConsistency(String),
    /// An input violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
