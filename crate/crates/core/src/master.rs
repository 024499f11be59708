//! Secular Born-Markov rate coefficients in the Floquet basis, the reduced
//! interaction-picture dynamics, quasistationary states and decoherence
//! times.
//!
//! Transition and dephasing channels couple to three ladders of positive bath
//! frequencies built from the folded quasi-energy gap `g = eps_2 - eps_1`:
//!
//! ```text
//! w0_n = n            (n > 0)       dephasing / diagonal channels
//! w+_n = g + n        (n >= 0)      |u_2> -> |u_1> emission ladder
//! w-_n = n - g        (n > 0)       |u_1> -> |u_2> ladder (drive-assisted)
//! ```
//!
//! The coefficient sums pair `gamma(w+_n)` with `|<<2|S|1>>_n|^2` and
//! `gamma(w-_n)` with `|<<1|S|2>>_n|^2`. The population rates they feed are
//!
//! ```text
//! W(2 -> 1) = G12 + G'21,   W(1 -> 2) = G21 + G'12,
//! rho_qs_11 / rho_qs_22 = W(2 -> 1) / W(1 -> 2),
//! ```
//!
//! which reduces to detailed balance in the static limit (only the ground
//! Floquet mode is populated at zero temperature) and to the maximally mixed
//! state at high temperature. Rates returned here carry the bath coupling
//! `kappa` through `gamma`; no additional `kappa` factor is applied by the
//! dynamics.

use num_complex::Complex;

use crate::bath::BathSpec;
use crate::floquet::{fourier_components, floquet_solve, Coupling, FourierOptions, FourierTable, FloquetSolution, SolveOptions};
use crate::pauli::{Basis, DensityMatrix2, Operator2};
use crate::scalar::{fold_quasienergy, Real};
use crate::{Error, Result};

/// The eight secular rate coefficients of the reduced dynamics plus their
/// temperature-induced (primed) counterparts. `g3` couples the two diagonal
/// dephasing channels and may be complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet<R: Real> {
    pub g11: R,
    pub g22: R,
    pub g12: R,
    pub g21: R,
    pub g3: Complex<R>,
    pub gp11: R,
    pub gp22: R,
    pub gp12: R,
    pub gp21: R,
    pub gp3: Complex<R>,
    /// Largest Fourier index that contributed to any of the sums.
    pub n_cutoff: usize,
}

impl<R: Real> RateSet<R> {
    pub fn zero() -> Self {
        let z = Complex::new(R::zero(), R::zero());
        Self {
            g11: R::zero(),
            g22: R::zero(),
            g12: R::zero(),
            g21: R::zero(),
            g3: z,
            gp11: R::zero(),
            gp22: R::zero(),
            gp12: R::zero(),
            gp21: R::zero(),
            gp3: z,
            n_cutoff: 0,
        }
    }

    /// Total `|u_2> -> |u_1>` transition rate.
    pub fn rate_down(&self) -> R {
        self.g12 + self.gp21
    }

    /// Total `|u_1> -> |u_2>` transition rate.
    pub fn rate_up(&self) -> R {
        self.g21 + self.gp12
    }

    /// Population relaxation rate (sum of both directions).
    pub fn population_relax_rate(&self) -> R {
        self.g12 + self.g21 + self.gp12 + self.gp21
    }

    /// Complex decay generator of the off-diagonal element:
    /// `lambda = (1/2)(G11+G22+G12+G21-2 G3 + primed)`.
    pub fn coherence_lambda(&self) -> Complex<R> {
        let real_part = self.g11 + self.g22 + self.g12 + self.g21 + self.gp11
            + self.gp22
            + self.gp12
            + self.gp21;
        let two = R::of(2.0);
        (Complex::new(real_part, R::zero()) - (self.g3 + self.gp3).scale(two))
            .scale(R::of(0.5))
    }
}

/// Assembles the secular rates from a Fourier table and the bath spectral
/// functions. The solution provides the folded gap; if its quasi-energies
/// were regauged by integer multiples of the drive frequency, the Fourier
/// indices are shifted back so the summed series is gauge invariant.
pub fn rate_set<R: Real>(
    table: &FourierTable<R>,
    sol: &FloquetSolution<R>,
    bath: &BathSpec<R>,
) -> Result<RateSet<R>> {
    if sol.degenerate {
        return Err(Error::Degenerate {
            gap: sol.gap().to_f64().unwrap_or(0.0),
        });
    }
    let folded = [fold_quasienergy(sol.eps[0]), fold_quasienergy(sol.eps[1])];
    let shift = [
        (sol.eps[0] - folded[0]).round().to_f64().unwrap_or(0.0) as i64,
        (sol.eps[1] - folded[1]).round().to_f64().unwrap_or(0.0) as i64,
    ];
    let gap = folded[1] - folded[0];
    if gap < R::zero() || gap >= R::one() {
        return Err(Error::InvalidInput(format!(
            "folded quasi-energy gap {gap} outside [0, 1)"
        )));
    }
    // Minimal-gauge coefficient: c_m = table(r', r, m + k_r' - k_r).
    let elem = |r_prime: usize, r: usize, m: i64| -> Complex<R> {
        table.get(r_prime, r, m + shift[r_prime - 1] - shift[r - 1])
    };

    let n_span = table.n_max as i64 + shift[0].abs() + shift[1].abs();
    let conv_tol = R::of(1e-12);
    let mut cutoff = 0usize;

    // Accumulates sum_{n in range} weight(freq(n)) * |coeff(n)|^2 and checks
    // the stated convergence criterion against the running sum.
    let mut converged_sum = |series: &mut dyn Iterator<Item = (i64, R, R)>,
                             label: &str|
     -> Result<R> {
        let mut sum = R::zero();
        let mut last_nonzero: Option<(i64, R)> = None;
        for (n, freq, coeff_sq) in series {
            if coeff_sq == R::zero() {
                continue;
            }
            let term = freq * coeff_sq;
            sum += term;
            last_nonzero = Some((n, term.abs()));
        }
        if let Some((n, term)) = last_nonzero {
            cutoff = cutoff.max(n.unsigned_abs() as usize);
            if sum != R::zero() && term > conv_tol * sum.abs() && (n as usize) >= table.n_max {
                return Err(Error::Truncation(format!(
                    "{label} series not converged at the table's n_max (last term {:?})",
                    term.to_f64()
                )));
            }
        }
        Ok(sum)
    };

    let gamma = |w: R| bath.gamma(w);
    let gamma_p = |w: R| bath.gamma_prime(w);

    // Diagonal channels: n > 0 over w0_n = n.
    let mut diag = |r: usize, primed: bool| -> Result<R> {
        let mut items = Vec::new();
        for n in 1..=n_span {
            let w = R::of(n as f64);
            let weight = if primed { gamma_p(w)? } else { gamma(w)? };
            items.push((n, weight, elem(r, r, n).norm_sqr()));
        }
        converged_sum(&mut items.into_iter(), "diagonal")
    };
    let g11 = diag(1, false)?;
    let g22 = diag(2, false)?;
    let gp11 = diag(1, true)?;
    let gp22 = diag(2, true)?;

    // Downward ladder: n >= 0 over w+_n = gap + n with |<<2|S|1>>_n|^2.
    let mut down = |primed: bool| -> Result<R> {
        let mut items = Vec::new();
        for n in 0..=n_span {
            let w = gap + R::of(n as f64);
            if !(w > R::zero()) {
                continue;
            }
            let weight = if primed { gamma_p(w)? } else { gamma(w)? };
            items.push((n, weight, elem(2, 1, n).norm_sqr()));
        }
        converged_sum(&mut items.into_iter(), "down-ladder")
    };
    let g12 = down(false)?;
    let gp12 = down(true)?;

    // Upward ladder: n > 0 over w-_n = n - gap, kept only while positive.
    let mut up = |primed: bool| -> Result<R> {
        let mut items = Vec::new();
        for n in 1..=n_span {
            let w = R::of(n as f64) - gap;
            if !(w > R::zero()) {
                continue;
            }
            let weight = if primed { gamma_p(w)? } else { gamma(w)? };
            items.push((n, weight, elem(1, 2, n).norm_sqr()));
        }
        converged_sum(&mut items.into_iter(), "up-ladder")
    };
    let g21 = up(false)?;
    let gp21 = up(true)?;

    // Cross-dephasing channel: n > 0 over w0_n with
    // <<2|S|2>>_n <<1|S|1>>_{-n} (complex in general).
    let cross = |primed: bool| -> Result<Complex<R>> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for n in 1..=n_span {
            let prod = elem(2, 2, n) * elem(1, 1, -n);
            if prod.norm_sqr() == R::zero() {
                continue;
            }
            let w = R::of(n as f64);
            let weight = if primed { gamma_p(w)? } else { gamma(w)? };
            acc += prod.scale(weight);
        }
        Ok(acc)
    };
    let g3 = cross(false)?;
    let gp3 = cross(true)?;

    let rates = RateSet {
        g11,
        g22,
        g12,
        g21,
        g3,
        gp11,
        gp22,
        gp12,
        gp21,
        gp3,
        n_cutoff: cutoff,
    };
    if bath.theta == R::zero() {
        debug_assert!(rates.gp11 == R::zero() && rates.gp12 == R::zero());
    }
    Ok(rates)
}

/// Interaction-picture reduced state: Floquet-basis populations and the
/// off-diagonal element `rho_12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState<R: Real> {
    pub p11: R,
    pub p22: R,
    pub c12: Complex<R>,
}

impl<R: Real> ReducedState<R> {
    pub fn new(p11: R, p22: R, c12: Complex<R>) -> Result<Self> {
        if (p11 + p22 - R::one()).abs() > R::of(1e-12) {
            return Err(Error::InvalidInput("populations must sum to 1".into()));
        }
        let lo = -R::of(1e-10);
        let hi = R::one() + R::of(1e-10);
        if p11 < lo || p11 > hi || p22 < lo || p22 > hi {
            return Err(Error::InvalidInput("populations outside [0, 1]".into()));
        }
        if c12.norm_sqr() > p11 * p22 + R::of(1e-9) {
            return Err(Error::InvalidInput(
                "coherence violates |c12|^2 <= p11 p22".into(),
            ));
        }
        Ok(Self { p11, p22, c12 })
    }

    /// Projects a density matrix onto the Floquet basis of `sol` at `tau = 0`.
    pub fn from_density_matrix(rho: &DensityMatrix2<R>, sol: &FloquetSolution<R>) -> Result<Self> {
        let m = rho.matrix();
        match rho.basis() {
            Basis::Floquet => Self::new(m.m[0][0].re, m.m[1][1].re, m.m[0][1]),
            Basis::SigmaZ => {
                let u1 = sol.mode(0, 0);
                let u2 = sol.mode(1, 0);
                let p11 = u1.dot(&m.apply(u1)).re;
                let p22 = u2.dot(&m.apply(u2)).re;
                let c12 = u1.dot(&m.apply(u2));
                Self::new(p11, p22, c12)
            }
        }
    }

    pub fn population_difference(&self) -> R {
        self.p11 - self.p22
    }
}

/// Quasistationary (long-time) state: diagonal in the Floquet basis with
/// populations in the ratio `W(2->1) / W(1->2)`.
pub fn quasistationary<R: Real>(rates: &RateSet<R>) -> Result<ReducedState<R>> {
    let down = rates.rate_down();
    let up = rates.rate_up();
    let total = down + up;
    if total <= R::zero() {
        return Err(Error::DynamicsDecoupled);
    }
    let p11 = down / total;
    ReducedState::new(p11, R::one() - p11, Complex::new(R::zero(), R::zero()))
}

/// Closed-form solution of the reduced dynamics at the requested times:
/// populations relax exponentially toward the quasistationary values while
/// the coherence decays with the complex rate `lambda`.
pub fn evolve_reduced<R: Real>(
    initial: &ReducedState<R>,
    rates: &RateSet<R>,
    tau_grid: &[R],
) -> Result<Vec<ReducedState<R>>> {
    for w in tau_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("tau_grid must be strictly increasing".into()));
        }
    }
    let relax = rates.population_relax_rate();
    let lambda = rates.coherence_lambda();
    if lambda.re < -R::of(1e-12) {
        return Err(Error::ModelConsistency(format!(
            "coherence decay rate is negative ({:?})",
            lambda.re.to_f64()
        )));
    }
    let p_qs = if relax > R::zero() {
        rates.rate_down() / relax
    } else {
        initial.p11
    };
    let mut out = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let p11 = p_qs + (initial.p11 - p_qs) * (-relax * tau).exp();
        let decay = Complex::new(
            (-lambda.re * tau).exp() * (lambda.im * tau).cos(),
            -(-lambda.re * tau).exp() * (lambda.im * tau).sin(),
        );
        let c12 = initial.c12 * decay;
        // Clamp float dust so long-time states stay constructible.
        let p11 = p11.min(R::one()).max(R::zero());
        out.push(ReducedState::new(p11, R::one() - p11, c12)?);
    }
    Ok(out)
}

/// Decoherence rate `1/tau_d = Re(lambda)`.
pub fn decoherence_rate<R: Real>(rates: &RateSet<R>) -> R {
    rates.coherence_lambda().re
}

/// Decoherence time `tau_d`; infinite when the system is decoupled.
pub fn decoherence_time<R: Real>(rates: &RateSet<R>) -> R {
    let rate = decoherence_rate(rates);
    if rate == R::zero() {
        R::infinity()
    } else {
        rate.recip()
    }
}

/// Schroedinger-picture `<sigma_z>(tau)` reconstructed from interaction
/// picture states: populations ride the time-dependent pointer states while
/// the coherence carries the quasi-energy beat phase. Off-grid times use
/// trigonometric synthesis of the mode matrix elements.
pub fn sigma_z_expectation<R: Real>(
    states: &[ReducedState<R>],
    sol: &FloquetSolution<R>,
    tau_grid: &[R],
) -> Result<Vec<R>> {
    if states.len() != tau_grid.len() {
        return Err(Error::InvalidInput(
            "state series and tau_grid must have equal length".into(),
        ));
    }
    let table = fourier_components(
        sol,
        &Operator2::sigma_z(),
        Coupling::SigmaZ,
        &FourierOptions {
            allow_degenerate: true,
            ..Default::default()
        },
    )?;
    let beat = sol.eps[0] - sol.eps[1];
    let out = states
        .iter()
        .zip(tau_grid.iter())
        .map(|(state, &tau)| {
            let m11 = table.synthesize(1, 1, tau).re;
            let m22 = table.synthesize(2, 2, tau).re;
            let t21 = table.synthesize(2, 1, tau);
            let phase = Complex::from_polar(R::one(), -beat * tau);
            let cross = (state.c12 * phase * t21).re * R::of(2.0);
            state.p11 * m11 + state.p22 * m22 + cross
        })
        .collect();
    Ok(out)
}

/// One point of a quasistationary scan; `sigma_z` is absent at
/// degenerate-flagged (or otherwise failed) grid points.
#[derive(Debug, Clone, Copy)]
pub struct ScanPoint<R: Real> {
    pub a: R,
    pub sigma_z: Option<R>,
    pub gap: R,
    pub degenerate: bool,
}

/// Quasistationary `<sigma_z>` versus drive amplitude at fixed gap and bath.
/// Degenerate points are emitted as gaps; the scan continues.
pub fn quasistationary_scan<R: Real>(
    delta: R,
    a_grid: &[R],
    bath: &BathSpec<R>,
    coupling: Coupling,
    tau_eval: R,
    opts: &SolveOptions<R>,
) -> Result<Vec<ScanPoint<R>>> {
    let mut out = Vec::with_capacity(a_grid.len());
    for &a in a_grid {
        let params = crate::DriveParams::new(a, delta, bath.theta, bath.kappa)?;
        let sol = floquet_solve(&params, opts)?;
        if sol.degenerate {
            out.push(ScanPoint {
                a,
                sigma_z: None,
                gap: sol.gap(),
                degenerate: true,
            });
            continue;
        }
        let point = (|| -> Result<R> {
            let table = fourier_components(
                &sol,
                &coupling.operator(),
                coupling,
                &FourierOptions::default(),
            )?;
            let rates = rate_set(&table, &sol, bath)?;
            let qs = quasistationary(&rates)?;
            Ok(sigma_z_expectation(&[qs], &sol, &[tau_eval])?[0])
        })();
        match point {
            Ok(v) => out.push(ScanPoint {
                a,
                sigma_z: Some(v),
                gap: sol.gap(),
                degenerate: false,
            }),
            Err(_) => out.push(ScanPoint {
                a,
                sigma_z: None,
                gap: sol.gap(),
                degenerate: true,
            }),
        }
    }
    Ok(out)
}
