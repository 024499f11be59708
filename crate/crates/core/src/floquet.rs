//! Floquet analysis of the driven two-level system: one-period propagator,
//! quasi-energies, periodic modes and Fourier tables of coupling operators.
//!
//! The propagator solves `i dU/dtau = H(tau) U` with a fixed-step
//! fourth-order one-step scheme (two-point Gauss commutator-free Magnus
//! step). Each step is the exact exponential of a Hermitian 2x2 generator,
//! so every partial propagator is unitary to machine precision regardless of
//! step count; the step count only controls phase accuracy.
//!
//! Quasi-energies come from the eigenphases of the monodromy matrix `U(2 pi)`
//! folded into the first Brillouin zone `(-1/2, 1/2]`; the periodic modes are
//! reconstructed as `u_r(tau) = exp(+i eps_r tau) U(tau) phi_r(0)`.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::drive::{hamiltonian, DriveParams};
use crate::pauli::{Operator2, StateVector2};
use crate::scalar::{fold_quasienergy, Real};
use crate::{Error, Result};

/// Tuning knobs for [`floquet_solve`] and [`propagate`].
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<R: Real> {
    /// Number of stored mode samples over one period; a power of two >= 256.
    /// `None` picks a size large enough for the Fourier content (~2A).
    pub n_samples: Option<usize>,
    /// Quasi-energy gap (or distance to the zone edge) below which the
    /// solution is flagged degenerate.
    pub degeneracy_threshold: R,
    /// Integrator steps per period scale as `steps_per_unit * (A + Delta + 1)`
    /// with a floor of `min_steps`.
    pub steps_per_unit: R,
    pub min_steps: usize,
}

impl<R: Real> Default for SolveOptions<R> {
    fn default() -> Self {
        Self {
            n_samples: None,
            degeneracy_threshold: R::of(1e-3),
            // 192 steps per unit of (A + Delta + 1) keeps the quasi-energy
            // self-convergence error below 1e-8 up to A ~ 50.
            steps_per_unit: R::of(192.0),
            min_steps: 4096,
        }
    }
}

impl<R: Real> SolveOptions<R> {
    fn resolved_samples(&self, params: &DriveParams<R>) -> Result<usize> {
        let n = match self.n_samples {
            Some(n) => {
                if n < 256 || !n.is_power_of_two() {
                    return Err(Error::InvalidInput(format!(
                        "n_samples must be a power of two >= 256, got {n}"
                    )));
                }
                n
            }
            None => {
                // Mode matrix elements carry frequencies up to ~2A + Delta;
                // keep a factor-two margin over that band.
                let band = R::of(4.0) * (R::of(2.0) * params.a + params.delta) + R::of(64.0);
                let want = band.to_f64().unwrap_or(256.0).ceil() as usize;
                want.max(256).next_power_of_two()
            }
        };
        Ok(n)
    }

    fn steps_per_period(&self, params: &DriveParams<R>, n_samples: usize) -> usize {
        let scale = self.steps_per_unit * (params.a + params.delta + R::one());
        let base = scale.to_f64().unwrap_or(0.0).ceil() as usize;
        let base = base.max(self.min_steps);
        base.div_ceil(n_samples) * n_samples
    }
}

/// One fourth-order Magnus step `U(tau + h) <- exp(-i K) U(tau)` using the
/// two Gauss-Legendre nodes of the interval.
fn magnus_step<R: Real>(params: &DriveParams<R>, tau: R, h: R) -> Operator2<R> {
    let half = R::of(0.5);
    let c_off = R::of(3.0).sqrt() / R::of(6.0);
    let t1 = tau + (half - c_off) * h;
    let t2 = tau + (half + c_off) * h;
    let h1 = hamiltonian(params, t1);
    let h2 = hamiltonian(params, t2);
    // K = (h/2)(H1 + H2) - i (sqrt(3) h^2 / 12) [H2, H1]  (Hermitian)
    let mean = h1.add(&h2).scaled_re(h * half);
    let comm = h2
        .commutator(&h1)
        .scaled(Complex::new(R::zero(), -R::of(3.0).sqrt() * h * h / R::of(12.0)));
    let k = mean.add(&comm);
    Operator2::exp_minus_i_hermitian(&k)
}

/// Propagates `U` from 0 along `tau_grid`, returning `U(tau_k)` for each grid
/// point. The grid must start at 0 and be strictly increasing.
pub fn propagate<R: Real>(
    params: &DriveParams<R>,
    tau_grid: &[R],
    opts: &SolveOptions<R>,
) -> Result<Vec<Operator2<R>>> {
    if tau_grid.is_empty() || tau_grid[0] != R::zero() {
        return Err(Error::InvalidInput(
            "tau_grid must be non-empty and start at 0".into(),
        ));
    }
    for w in tau_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("tau_grid must be strictly increasing".into()));
        }
    }
    let n_samples = opts.resolved_samples(params)?;
    let steps_per_period = opts.steps_per_period(params, n_samples);
    let two_pi = R::of(2.0) * R::PI();
    let step_density = R::of(steps_per_period as f64) / two_pi;

    let mut out = Vec::with_capacity(tau_grid.len());
    let mut u = Operator2::identity();
    out.push(u);
    for w in tau_grid.windows(2) {
        let span = w[1] - w[0];
        let n = (span * step_density).to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
        let h = span / R::of(n as f64);
        if !h.is_finite() || h == R::zero() {
            return Err(Error::NonFinite("integrator step size underflow".into()));
        }
        for k in 0..n {
            let tau = w[0] + h * R::of(k as f64);
            u = magnus_step(params, tau, h).matmul(&u);
        }
        if !u.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("propagator became non-finite".into()));
        }
        out.push(u);
    }
    out.truncate(tau_grid.len());
    Ok(out)
}

/// Quasi-energies, sampled Floquet modes and the monodromy matrix.
#[derive(Debug, Clone)]
pub struct FloquetSolution<R: Real> {
    /// Quasi-energies in `(-1/2, 1/2]`, `eps[0] <= eps[1]`.
    pub eps: [R; 2],
    /// `modes[r][k] = |u_r(tau_k)>` with `tau_k = 2 pi k / n_samples`.
    pub modes: [Vec<StateVector2<R>>; 2],
    /// One-period propagator `U(2 pi)`.
    pub monodromy: Operator2<R>,
    /// Set when the gap or its distance to the zone edge falls below the
    /// configured threshold; secular rates are unreliable there.
    pub degenerate: bool,
    pub n_samples: usize,
    pub params: DriveParams<R>,
}

impl<R: Real> FloquetSolution<R> {
    /// Folded quasi-energy gap `eps_2 - eps_1`, in `[0, 1)`.
    pub fn gap(&self) -> R {
        self.eps[1] - self.eps[0]
    }

    pub fn tau(&self, k: usize) -> R {
        R::of(2.0) * R::PI() * R::of(k as f64) / R::of(self.n_samples as f64)
    }

    pub fn mode(&self, r: usize, k: usize) -> &StateVector2<R> {
        &self.modes[r][k % self.n_samples]
    }
}

/// Eigenpairs of a 2x2 unitary; `None` discriminant means (near-)degenerate.
fn unitary_eigenvalues<R: Real>(u: &Operator2<R>) -> ([Complex<R>; 2], R) {
    let tr = u.trace();
    let det = u.m[0][0] * u.m[1][1] - u.m[0][1] * u.m[1][0];
    let disc = (tr * tr - det.scale(R::of(4.0))).sqrt();
    let half = R::of(0.5);
    let l1 = (tr + disc).scale(half);
    let l2 = (tr - disc).scale(half);
    ([l1, l2], disc.norm())
}

fn eigenvector_for<R: Real>(u: &Operator2<R>, lambda: Complex<R>) -> StateVector2<R> {
    // Rows of (U - lambda) are orthogonal to the eigenvector; pick the better
    // conditioned of the two standard constructions.
    let v1 = StateVector2::new(u.m[0][1], lambda - u.m[0][0]);
    let v2 = StateVector2::new(lambda - u.m[1][1], u.m[1][0]);
    let pick = if v1.norm() >= v2.norm() { v1 } else { v2 };
    pick.normalized().unwrap_or_else(|_| StateVector2::plus())
}

/// Computes the Floquet solution for one drive period.
pub fn floquet_solve<R: Real>(
    params: &DriveParams<R>,
    opts: &SolveOptions<R>,
) -> Result<FloquetSolution<R>> {
    let n_samples = opts.resolved_samples(params)?;
    let steps = opts.steps_per_period(params, n_samples);
    let stride = steps / n_samples;
    let two_pi = R::of(2.0) * R::PI();
    let h = two_pi / R::of(steps as f64);

    let mut u = Operator2::identity();
    let mut snapshots = Vec::with_capacity(n_samples);
    for k in 0..steps {
        if k % stride == 0 {
            snapshots.push(u);
        }
        let tau = h * R::of(k as f64);
        u = magnus_step(params, tau, h).matmul(&u);
    }
    let monodromy = u;
    if !monodromy
        .m
        .iter()
        .flatten()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        return Err(Error::NonFinite("monodromy is non-finite".into()));
    }

    let ([l1, _l2], disc) = unitary_eigenvalues(&monodromy);
    let mut phi = if disc > R::of(1e-6) {
        [eigenvector_for(&monodromy, l1), {
            // The orthogonal complement spans the other eigenspace of a
            // normal matrix; building it directly keeps the pair exactly
            // orthonormal even when the eigenproblem is ill-conditioned.
            eigenvector_for(&monodromy, l1).orthogonal_complement()
        }]
    } else {
        degenerate_mode_rescue(&monodromy, &snapshots)
    };
    phi[0] = phi[0].phase_fixed();
    phi[1] = phi[1].phase_fixed();

    // Rayleigh quotients give the eigenphase of each chosen vector even when
    // the vectors came from the rescue path.
    let lam = [
        phi[0].dot(&monodromy.apply(&phi[0])),
        phi[1].dot(&monodromy.apply(&phi[1])),
    ];
    let mut eps = [R::zero(); 2];
    for r in 0..2 {
        eps[r] = fold_quasienergy(-lam[r].arg() / two_pi);
    }

    // Label ordering: eps_1 <= eps_2; exact ties order by <sigma_z> descending
    // and then by <sigma_x> ascending (static gap ground state first).
    let tie = (eps[0] - eps[1]).abs() < R::of(1e-12);
    let swap = if tie {
        let sz = Operator2::sigma_z();
        let sx = Operator2::sigma_x();
        let z0 = sz.mat_elem(&phi[0], &phi[0]).re;
        let z1 = sz.mat_elem(&phi[1], &phi[1]).re;
        if (z0 - z1).abs() > R::of(1e-9) {
            z0 < z1
        } else {
            sx.mat_elem(&phi[0], &phi[0]).re > sx.mat_elem(&phi[1], &phi[1]).re
        }
    } else {
        eps[0] > eps[1]
    };
    if swap {
        eps.swap(0, 1);
        phi.swap(0, 1);
    }

    let gap = eps[1] - eps[0];
    let degenerate =
        gap < opts.degeneracy_threshold || (R::one() - gap) < opts.degeneracy_threshold;

    // u_r(tau_k) = exp(+i eps_r tau_k) U(tau_k) phi_r(0)
    let mut modes = [Vec::with_capacity(n_samples), Vec::with_capacity(n_samples)];
    for (k, u_k) in snapshots.iter().enumerate() {
        let tau = two_pi * R::of(k as f64) / R::of(n_samples as f64);
        for r in 0..2 {
            let phase = Complex::from_polar(R::one(), eps[r] * tau);
            modes[r].push(u_k.apply(&phi[r]).scaled(phase));
        }
    }

    Ok(FloquetSolution {
        eps,
        modes,
        monodromy,
        degenerate,
        n_samples,
        params: *params,
    })
}

/// When the monodromy is (nearly) proportional to the identity its
/// eigenvectors are arbitrary. If the partial propagators commute with it
/// (e.g. any static Hamiltonian), the best-separated snapshot disambiguates
/// the mode pair; otherwise fall back to the canonical basis (the solution
/// will carry the degenerate flag either way).
fn degenerate_mode_rescue<R: Real>(
    monodromy: &Operator2<R>,
    snapshots: &[Operator2<R>],
) -> [StateVector2<R>; 2] {
    let mut best: Option<(R, Operator2<R>)> = None;
    for u_k in snapshots.iter().skip(1) {
        let (_, disc) = unitary_eigenvalues(u_k);
        if best.as_ref().map_or(true, |(d, _)| disc > *d) {
            best = Some((disc, *u_k));
        }
    }
    if let Some((disc, u_k)) = best {
        let comm_defect = monodromy.commutator(&u_k).max_abs_diff(&Operator2::zero());
        if disc > R::of(1e-6) && comm_defect < R::of(1e-7) {
            let ([l1, _], _) = unitary_eigenvalues(&u_k);
            let v1 = eigenvector_for(&u_k, l1);
            return [v1, v1.orthogonal_complement()];
        }
    }
    [StateVector2::plus(), StateVector2::minus()]
}

/// Which coupling operator a Fourier table was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    SigmaX,
    SigmaY,
    SigmaZ,
    Custom,
}

impl Coupling {
    pub fn operator<R: Real>(&self) -> Operator2<R> {
        match self {
            Coupling::SigmaX => Operator2::sigma_x(),
            Coupling::SigmaY => Operator2::sigma_y(),
            Coupling::SigmaZ => Operator2::sigma_z(),
            Coupling::Custom => panic!("custom couplings carry their own operator"),
        }
    }
}

/// Options for [`fourier_components`].
#[derive(Debug, Clone, Copy)]
pub struct FourierOptions<R: Real> {
    /// Truncation order; `None` selects the smallest order whose tail power
    /// is below `tail_tolerance` of the total.
    pub n_max: Option<usize>,
    /// Allow building tables from degenerate-flagged solutions.
    pub allow_degenerate: bool,
    pub tail_tolerance: R,
}

impl<R: Real> Default for FourierOptions<R> {
    fn default() -> Self {
        Self {
            n_max: None,
            allow_degenerate: false,
            // Components below the noise floor are zeroed outright, so the
            // auto truncation can demand an exactly vanishing tail; this
            // keeps the downstream rate series convergent even under the
            // omega^3 spectral amplification.
            tail_tolerance: R::zero(),
        }
    }
}

/// Fourier components `<<r'|S|r>>_n` of a coupling operator between Floquet
/// modes, with the `exp(+i n tau)` kernel convention:
///
/// ```text
/// <<r'|S|r>>_n = (1/2 pi) Int_0^{2 pi} exp(i n tau) <u_r'(tau)|S|u_r(tau)> dtau
/// ```
#[derive(Debug, Clone)]
pub struct FourierTable<R: Real> {
    pub n_max: usize,
    pub coupling: Coupling,
    /// Component arrays indexed by pair `(r', r)` in order
    /// `(1,1), (1,2), (2,1), (2,2)`; each holds `2 n_max + 1` values for
    /// `n = -n_max ... +n_max`.
    comp: [Vec<Complex<R>>; 4],
    /// Period average of `|<u_r'|S|u_r>|^2` per pair (Parseval reference).
    mean_sq: [R; 4],
}

impl<R: Real> FourierTable<R> {
    fn pair_index(r_prime: usize, r: usize) -> usize {
        debug_assert!((1..=2).contains(&r_prime) && (1..=2).contains(&r));
        (r_prime - 1) * 2 + (r - 1)
    }

    /// Component `<<r'|S|r>>_n`; zero outside the stored range.
    pub fn get(&self, r_prime: usize, r: usize, n: i64) -> Complex<R> {
        let m = self.n_max as i64;
        if n < -m || n > m {
            return Complex::new(R::zero(), R::zero());
        }
        self.comp[Self::pair_index(r_prime, r)][(n + m) as usize]
    }

    /// Period average of the squared matrix element for pair `(r', r)`.
    pub fn mean_square(&self, r_prime: usize, r: usize) -> R {
        self.mean_sq[Self::pair_index(r_prime, r)]
    }

    /// Sum of `|<<r'|S|r>>_n|^2` over the stored range.
    pub fn power(&self, r_prime: usize, r: usize) -> R {
        self.comp[Self::pair_index(r_prime, r)]
            .iter()
            .fold(R::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Evaluates the matrix element `<u_r'(tau)|S|u_r(tau)>` at arbitrary
    /// `tau` by trigonometric synthesis of the stored components.
    pub fn synthesize(&self, r_prime: usize, r: usize, tau: R) -> Complex<R> {
        let m = self.n_max as i64;
        let mut acc = Complex::new(R::zero(), R::zero());
        for n in -m..=m {
            let phase = Complex::from_polar(R::one(), -R::of(n as f64) * tau);
            acc += self.get(r_prime, r, n) * phase;
        }
        acc
    }
}

/// Builds the [`FourierTable`] of `S` in the basis of `sol` by FFT of the
/// sampled matrix elements.
pub fn fourier_components<R: Real>(
    sol: &FloquetSolution<R>,
    coupling_op: &Operator2<R>,
    coupling: Coupling,
    opts: &FourierOptions<R>,
) -> Result<FourierTable<R>> {
    if sol.degenerate && !opts.allow_degenerate {
        return Err(Error::Degenerate {
            gap: sol.gap().to_f64().unwrap_or(0.0),
        });
    }
    let n = sol.n_samples;
    let mut planner = FftPlanner::<R>::new();
    // The inverse transform computes X_j = sum_k x_k exp(+2 pi i j k / N),
    // matching the exp(+i n tau) kernel; normalize by 1/N afterwards.
    let fft = planner.plan_fft_inverse(n);

    let mut comp: [Vec<Complex<R>>; 4] = Default::default();
    let mut mean_sq = [R::zero(); 4];
    let mut spectra: [Vec<Complex<R>>; 4] = Default::default();
    for r_prime in 1..=2 {
        for r in 1..=2 {
            let idx = FourierTable::<R>::pair_index(r_prime, r);
            let mut buf: Vec<Complex<R>> = (0..n)
                .map(|k| coupling_op.mat_elem(sol.mode(r_prime - 1, k), sol.mode(r - 1, k)))
                .collect();
            mean_sq[idx] =
                buf.iter().fold(R::zero(), |a, z| a + z.norm_sqr()) / R::of(n as f64);
            fft.process(&mut buf);
            let scale = R::one() / R::of(n as f64);
            for z in buf.iter_mut() {
                *z = z.scale(scale);
            }
            spectra[idx] = buf;
        }
    }

    // Zero out coefficients at the FFT noise floor (relative to the largest
    // pair) so empty channels read exactly zero and truncation decisions are
    // not driven by rounding dust.
    let global_amp = spectra
        .iter()
        .map(|s| s.iter().fold(R::zero(), |a, z| a + z.norm_sqr()))
        .fold(R::zero(), R::max)
        .sqrt();
    let floor = R::of(1e-13).max(R::epsilon() * R::of(1e3)) * global_amp;
    for spec in spectra.iter_mut() {
        for z in spec.iter_mut() {
            if z.norm() < floor {
                *z = Complex::new(R::zero(), R::zero());
            }
        }
    }

    let hard_cap = n / 2 - 1;
    let mut n_max = match opts.n_max {
        Some(m) => {
            if m > n / 2 {
                return Err(Error::InvalidInput(format!(
                    "n_max = {m} exceeds n_samples/2 = {}",
                    n / 2
                )));
            }
            m.min(hard_cap)
        }
        None => 8.min(hard_cap),
    };

    // Power outside |n| <= m, summed directly over the excluded bins.
    let tail_power = |m: usize| -> R {
        let mut tail = R::zero();
        for spec in spectra.iter() {
            for nn in (m as i64 + 1)..=(n as i64 - 1 - m as i64) {
                tail += spec[nn.rem_euclid(n as i64) as usize].norm_sqr();
            }
        }
        tail
    };
    let total_power: R = spectra
        .iter()
        .map(|s| s.iter().fold(R::zero(), |a, z| a + z.norm_sqr()))
        .fold(R::zero(), |a, b| a + b);
    let tail_ok = |m: usize| -> bool { tail_power(m) <= opts.tail_tolerance * total_power };
    if opts.n_max.is_none() {
        while n_max < hard_cap && !tail_ok(n_max) {
            n_max = (n_max * 2).min(hard_cap);
        }
    }
    if !tail_ok(n_max) {
        return Err(Error::Truncation(format!(
            "Fourier tail above tolerance at n_max = {n_max}; increase n_samples"
        )));
    }

    for idx in 0..4 {
        let spec = &spectra[idx];
        let m = n_max as i64;
        let mut vals = Vec::with_capacity(2 * n_max + 1);
        for nn in -m..=m {
            let j = nn.rem_euclid(n as i64) as usize;
            vals.push(spec[j]);
        }
        comp[idx] = vals;
    }

    Ok(FourierTable {
        n_max,
        coupling,
        comp,
        mean_sq,
    })
}

/// One entry of a quasi-energy map scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuasiPoint<R: Real> {
    pub a: R,
    pub delta: R,
    /// `|eps_2 - eps_1|` folded into the zone; at the zone edge the
    /// representatives -1/2 and +1/2 are identified, so a gap within the
    /// degeneracy threshold of 1 is reported as its distance to 1.
    pub gap: R,
    pub degenerate: bool,
}

/// Element-wise [`floquet_solve`] over a rectangular `(A, Delta)` grid,
/// row-major with `A` as the outer loop.
pub fn quasienergy_map<R: Real>(
    a_grid: &[R],
    delta_grid: &[R],
    opts: &SolveOptions<R>,
) -> Result<Vec<QuasiPoint<R>>> {
    if a_grid.is_empty() || delta_grid.is_empty() {
        return Err(Error::InvalidInput("quasienergy_map grids must be non-empty".into()));
    }
    for &v in a_grid.iter().chain(delta_grid.iter()) {
        if !v.is_finite() {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
    }
    let mut out = Vec::with_capacity(a_grid.len() * delta_grid.len());
    for &a in a_grid {
        for &delta in delta_grid {
            let params = DriveParams::closed(a, delta)?;
            let sol = floquet_solve(&params, opts)?;
            let raw = sol.gap();
            let gap = if R::one() - raw < opts.degeneracy_threshold {
                R::one() - raw
            } else {
                raw
            };
            out.push(QuasiPoint {
                a,
                delta,
                gap,
                degenerate: sol.degenerate,
            });
        }
    }
    Ok(out)
}
