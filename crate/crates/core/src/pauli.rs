//! 2x2 operator algebra in the sigma_z eigenbasis `{|+>, |->}`.
//!
//! Index 0 is `|+>` (sigma_z eigenvalue +1), index 1 is `|->`. All types are
//! immutable values and freely shareable across threads.

use num_complex::Complex;

use crate::scalar::Real;
use crate::{Error, Result};

/// A 2x2 complex matrix in the sigma_z eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2<R: Real> {
    pub m: [[Complex<R>; 2]; 2],
}

impl<R: Real> Operator2<R> {
    pub fn new(m: [[Complex<R>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::new([[Complex::new(R::zero(), R::zero()); 2]; 2])
    }

    pub fn identity() -> Self {
        let o = Complex::new(R::one(), R::zero());
        let z = Complex::new(R::zero(), R::zero());
        Self::new([[o, z], [z, o]])
    }

    pub fn sigma_x() -> Self {
        let o = Complex::new(R::one(), R::zero());
        let z = Complex::new(R::zero(), R::zero());
        Self::new([[z, o], [o, z]])
    }

    pub fn sigma_y() -> Self {
        let i = Complex::new(R::zero(), R::one());
        let z = Complex::new(R::zero(), R::zero());
        Self::new([[z, -i], [i, z]])
    }

    pub fn sigma_z() -> Self {
        let o = Complex::new(R::one(), R::zero());
        let z = Complex::new(R::zero(), R::zero());
        Self::new([[o, z], [z, -o]])
    }

    pub fn scaled(&self, s: Complex<R>) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[r][c] * s;
            }
        }
        out
    }

    pub fn scaled_re(&self, s: R) -> Self {
        self.scaled(Complex::new(s, R::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[r][c] + other.m[r][c];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[r][c] - other.m[r][c];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<R> {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest entry-wise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> R {
        let mut worst = R::zero();
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    /// `max |M - M^dagger|` over entries.
    pub fn hermiticity_defect(&self) -> R {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M^dagger M - 1|` over entries.
    pub fn unitarity_defect(&self) -> R {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity())
    }

    /// Matrix element `<bra| M |ket>`.
    pub fn mat_elem(&self, bra: &StateVector2<R>, ket: &StateVector2<R>) -> Complex<R> {
        let v = self.apply(ket);
        bra.dot(&v)
    }

    pub fn apply(&self, v: &StateVector2<R>) -> StateVector2<R> {
        StateVector2 {
            a: [
                self.m[0][0] * v.a[0] + self.m[0][1] * v.a[1],
                self.m[1][0] * v.a[0] + self.m[1][1] * v.a[1],
            ],
        }
    }

    /// Coefficients `(c0, cx, cy, cz)` of the Pauli decomposition
    /// `M = c0 1 + cx sigma_x + cy sigma_y + cz sigma_z`, assuming `M` is
    /// Hermitian (anti-Hermitian parts are discarded).
    pub fn pauli_coefficients(&self) -> (R, R, R, R) {
        let half = R::of(0.5);
        let c0 = (self.m[0][0] + self.m[1][1]).re * half;
        let cz = (self.m[0][0] - self.m[1][1]).re * half;
        let cx = (self.m[0][1] + self.m[1][0]).re * half;
        let cy = (self.m[1][0] - self.m[0][1]).im * half;
        (c0, cx, cy, cz)
    }

    /// `exp(-i K)` for Hermitian `K`, via the closed-form SU(2) exponential.
    /// The result is unitary to machine precision.
    pub fn exp_minus_i_hermitian(k: &Self) -> Self {
        let (c0, cx, cy, cz) = k.pauli_coefficients();
        let norm = (cx * cx + cy * cy + cz * cz).sqrt();
        let phase = Complex::from_polar(R::one(), -c0);
        if norm == R::zero() {
            return Self::identity().scaled(phase);
        }
        let (sin, cos) = (norm.sin(), norm.cos());
        let f = sin / norm;
        let i = Complex::new(R::zero(), R::one());
        let cosd = Complex::new(cos, R::zero());
        let mut out = Self::zero();
        // cos 1 - i sin (khat . sigma)
        out.m[0][0] = cosd - i * Complex::new(cz * f, R::zero());
        out.m[1][1] = cosd + i * Complex::new(cz * f, R::zero());
        out.m[0][1] = -i * Complex::new(cx * f, -cy * f);
        out.m[1][0] = -i * Complex::new(cx * f, cy * f);
        out.scaled(phase)
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [R; 2] {
        let half = R::of(0.5);
        let tr = (self.m[0][0] + self.m[1][1]).re;
        let dz = (self.m[0][0] - self.m[1][1]).re * half;
        let off = self.m[0][1].norm_sqr();
        let disc = (dz * dz + off).sqrt();
        [tr * half - disc, tr * half + disc]
    }
}

/// A normalized or raw two-component state in the sigma_z eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector2<R: Real> {
    pub a: [Complex<R>; 2],
}

impl<R: Real> StateVector2<R> {
    pub fn new(up: Complex<R>, down: Complex<R>) -> Self {
        Self { a: [up, down] }
    }

    /// `|+>`, the sigma_z eigenstate with eigenvalue +1.
    pub fn plus() -> Self {
        Self::new(
            Complex::new(R::one(), R::zero()),
            Complex::new(R::zero(), R::zero()),
        )
    }

    /// `|->`, the sigma_z eigenstate with eigenvalue -1.
    pub fn minus() -> Self {
        Self::new(
            Complex::new(R::zero(), R::zero()),
            Complex::new(R::one(), R::zero()),
        )
    }

    /// `<self|other>` (conjugate-linear in `self`).
    pub fn dot(&self, other: &Self) -> Complex<R> {
        self.a[0].conj() * other.a[0] + self.a[1].conj() * other.a[1]
    }

    pub fn norm(&self) -> R {
        self.dot(self).re.sqrt()
    }

    /// Returns the state scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() || n == R::zero() {
            return Err(Error::InvalidInput("cannot normalize a zero state".into()));
        }
        let inv = Complex::new(R::one() / n, R::zero());
        Ok(Self::new(self.a[0] * inv, self.a[1] * inv))
    }

    pub fn scaled(&self, s: Complex<R>) -> Self {
        Self::new(self.a[0] * s, self.a[1] * s)
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &Self) -> Operator2<R> {
        let mut out = Operator2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.a[r] * other.a[c].conj();
            }
        }
        out
    }

    /// The state orthogonal to `self` (for unit `self`), `(-conj(b), conj(a))`.
    pub fn orthogonal_complement(&self) -> Self {
        Self::new(-self.a[1].conj(), self.a[0].conj())
    }

    /// Rotates the global phase so the largest-magnitude component is real
    /// positive; ties break toward the `|+>` component.
    pub fn phase_fixed(&self) -> Self {
        let idx = if self.a[1].norm() > self.a[0].norm() {
            1
        } else {
            0
        };
        let r = self.a[idx].norm();
        if r == R::zero() {
            return *self;
        }
        let phase = self.a[idx].conj() / Complex::new(r, R::zero());
        self.scaled(phase)
    }
}

/// Basis tag of a [`DensityMatrix2`]: the fixed sigma_z eigenbasis or the
/// Floquet mode basis sampled at reference time `tau = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    SigmaZ,
    Floquet,
}

/// A Hermitian, unit-trace, positive-semidefinite 2x2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2<R: Real> {
    matrix: Operator2<R>,
    basis: Basis,
}

impl<R: Real> DensityMatrix2<R> {
    const HERM_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-12;
    const POSITIVITY_TOL: f64 = 1e-10;

    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues >= -1e-10) before accepting the matrix.
    pub fn new(matrix: Operator2<R>, basis: Basis) -> Result<Self> {
        if matrix.hermiticity_defect() > R::of(Self::HERM_TOL) {
            return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
        }
        if (matrix.trace().re - R::one()).abs() > R::of(Self::TRACE_TOL)
            || matrix.trace().im.abs() > R::of(Self::TRACE_TOL)
        {
            return Err(Error::InvalidInput("density matrix trace is not 1".into()));
        }
        let eig = matrix.hermitian_eigenvalues();
        if eig[0] < -R::of(Self::POSITIVITY_TOL) {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {:?}",
                eig[0].to_f64()
            )));
        }
        Ok(Self { matrix, basis })
    }

    pub fn from_pure(state: &StateVector2<R>, basis: Basis) -> Result<Self> {
        let s = state.normalized()?;
        Self::new(s.outer(&s), basis)
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self {
            matrix: Operator2::identity().scaled_re(R::of(0.5)),
            basis,
        }
    }

    pub fn matrix(&self) -> &Operator2<R> {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// `Tr(rho O)`.
    pub fn expect(&self, op: &Operator2<R>) -> Complex<R> {
        self.matrix.matmul(op).trace()
    }

    pub fn eigenvalues(&self) -> [R; 2] {
        self.matrix.hermitian_eigenvalues()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type Op = Operator2<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_squares_are_identity() {
        for s in [Op::sigma_x(), Op::sigma_y(), Op::sigma_z()] {
            assert_eq!(s.matmul(&s), Op::identity());
        }
    }

    #[test]
    fn pauli_commutator() {
        // [sigma_x, sigma_y] = 2i sigma_z, exactly.
        let lhs = Op::sigma_x().commutator(&Op::sigma_y());
        let rhs = Op::sigma_z().scaled(c(0.0, 2.0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponential_is_unitary_and_matches_rotation() {
        // exp(-i (pi/2) sigma_x) = -i sigma_x
        let k = Op::sigma_x().scaled_re(std::f64::consts::FRAC_PI_2);
        let u = Op::exp_minus_i_hermitian(&k);
        let want = Op::sigma_x().scaled(c(0.0, -1.0));
        assert!(u.max_abs_diff(&want) < 1e-15);
        assert!(u.unitarity_defect() < 1e-15);
    }

    #[test]
    fn exponential_with_identity_part() {
        // exp(-i (a 1 + b sigma_z)) is diagonal with phases -(a + b), -(a - b).
        let k = Op::identity()
            .scaled_re(0.7)
            .add(&Op::sigma_z().scaled_re(0.2));
        let u = Op::exp_minus_i_hermitian(&k);
        assert!((u.m[0][0] - Complex::from_polar(1.0, -0.9)).norm() < 1e-15);
        assert!((u.m[1][1] - Complex::from_polar(1.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn complement_is_orthonormal() {
        let v = StateVector2::new(c(0.6, 0.3), c(-0.2, 0.7)).normalized().unwrap();
        let w = v.orthogonal_complement();
        assert!(v.dot(&w).norm() < 1e-15);
        assert!((w.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_fixing_makes_dominant_component_real() {
        let v = StateVector2::new(c(0.1, 0.2), c(-0.5, 0.6)).normalized().unwrap();
        let w = v.phase_fixed();
        assert!(w.a[1].im.abs() < 1e-15);
        assert!(w.a[1].re > 0.0);
        assert!((v.dot(&w).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_matrix_rejects_bad_input() {
        let bad = Op::sigma_x(); // trace 0
        assert!(DensityMatrix2::new(bad, Basis::SigmaZ).is_err());
        let neg = Op::new([[c(1.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.5, 0.0)]]);
        assert!(DensityMatrix2::new(neg, Basis::SigmaZ).is_err());
    }

    #[test]
    fn value_types_are_shareable_across_threads() {
        fn pin<T: Send + Sync + Clone>() {}
        pin::<Operator2<f64>>();
        pin::<StateVector2<f64>>();
        pin::<DensityMatrix2<f64>>();
        pin::<crate::DriveParams<f64>>();
        pin::<crate::BathSpec<f64>>();
        pin::<crate::FloquetSolution<f64>>();
        pin::<crate::FourierTable<f64>>();
        pin::<crate::RateSet<f64>>();
        pin::<crate::ReducedState<f64>>();
    }

    #[test]
    fn pure_state_density_matrix() {
        let rho = DensityMatrix2::from_pure(&StateVector2::<f64>::minus(), Basis::SigmaZ).unwrap();
        assert!((rho.expect(&Op::sigma_z()).re + 1.0).abs() < 1e-15);
        let eig = rho.eigenvalues();
        assert!(eig[0].abs() < 1e-15 && (eig[1] - 1.0).abs() < 1e-15);
    }
}
