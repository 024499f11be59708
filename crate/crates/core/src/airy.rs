//! Airy function of the first kind and the zero-order large-amplitude
//! approximation of the Floquet mode Fourier components.
//!
//! At drive amplitudes far beyond what exact propagation can resolve, the
//! Fourier-space eigenvalue problem reduces (to zeroth order in `Delta/A`) to
//! Airy equations in the continuous index `n`; the spin-resolved components
//! of the modes are
//!
//! ```text
//! <+|u_1>_n =  N Ai(-(2/A)^(1/3) (n + A))
//! <-|u_1>_n =  N Ai(+(2/A)^(1/3) (n - A))
//! <+|u_2>_n =  <-|u_1>_n,   <-|u_2>_n = -<+|u_1>_n
//! ```
//!
//! with one common normalization constant `N`. The turning points sit at
//! `n = -A` and `n = +A`, where the instantaneous drive field reverses.

use num_complex::Complex;

use crate::bath::BathSpec;
use crate::floquet::{fourier_components, Coupling, FourierOptions, FloquetSolution};
use crate::master::rate_set;
use crate::pauli::StateVector2;
use crate::scalar::Real;
use crate::{DriveParams, Error, Result};

// --- double-double helpers -------------------------------------------------
//
// The Maclaurin series of Ai cancels catastrophically for |x| beyond ~6 in
// plain f64 while the asymptotic expansions only reach ~1e-10 there; a
// compensated accumulation extends the series window to |x| <= 9 where the
// asymptotics are accurate to ~1e-15.

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        let err = a.mul_add(b, -p);
        Self { hi: p, lo: err }
    }

    fn add(self, other: Dd) -> Dd {
        let s = Self::two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        let t = Self::two_sum(s.hi, lo);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = Self::two_prod(self.hi, b);
        let lo = p.lo + self.lo * b;
        let t = Self::two_sum(p.hi, lo);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn mul(self, other: Dd) -> Dd {
        let p = Self::two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        let t = Self::two_sum(p.hi, lo);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::two_prod(q1, -b));
        let q2 = (r.hi + r.lo) / b;
        let t = Self::two_sum(q1, q2);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

// Ai(0) and -Ai'(0) split into double-double limbs.
const C1: Dd = Dd {
    hi: 0.355_028_053_887_817_2,
    lo: 2.052_336_324_362_12e-17,
};
const C2: Dd = Dd {
    hi: 0.258_819_403_792_806_8,
    lo: -2.522_243_111_610_832e-17,
};

const SERIES_LIMIT: f64 = 9.0;
/// Beyond this the scaled result underflows f64; documented hard cutoff.
const UNDERFLOW_LIMIT: f64 = 105.0;

fn airy_ai_series(x: f64) -> f64 {
    // Ai(x) = C1 f(x) - C2 g(x) with
    // f = sum a_k, a_0 = 1,  a_{k+1} = a_k x^3 / ((3k+2)(3k+3))
    // g = sum b_k, b_0 = x,  b_{k+1} = b_k x^3 / ((3k+3)(3k+4))
    let x3 = Dd::two_prod(x, x).mul_f64(x);
    let mut a = Dd::from(1.0);
    let mut b = Dd::from(x);
    let mut f = a;
    let mut g = b;
    for k in 0..200 {
        let kf = k as f64;
        a = a.mul(x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        b = b.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f = f.add(a);
        g = g.add(b);
        if a.hi.abs() < 1e-40 && b.hi.abs() < 1e-40 {
            break;
        }
    }
    f.mul(C1).add(g.mul(C2).mul_f64(-1.0)).value()
}

/// Terms `u_k / zeta^k` of the Airy asymptotic expansions, truncated where
/// the divergent series turns around (optimal truncation). Coefficients via
/// `u_{k+1} = u_k (6k+1)(6k+5) / (72 (k+1))`.
fn asymptotic_terms(zeta: f64) -> Vec<f64> {
    let mut terms = Vec::with_capacity(60);
    let mut u = 1.0_f64;
    let mut scale = 1.0_f64;
    for k in 0..60 {
        let term = u * scale;
        if let Some(&prev) = terms.last() {
            if term.abs() >= prev {
                break;
            }
            if term.abs() < 1e-20 {
                terms.push(term);
                break;
            }
        }
        terms.push(term);
        let kf = k as f64;
        u *= (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0));
        scale /= zeta;
    }
    terms
}

fn airy_ai_f64(x: f64) -> f64 {
    if x.abs() <= SERIES_LIMIT {
        return airy_ai_series(x);
    }
    if x > UNDERFLOW_LIMIT {
        return 0.0;
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    if x > 0.0 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let terms = asymptotic_terms(zeta);
        let mut s = 0.0;
        for (k, t) in terms.iter().enumerate() {
            s += if k % 2 == 0 { *t } else { -*t };
        }
        (-zeta).exp() / (2.0 * sqrt_pi * x.powf(0.25)) * s
    } else {
        let z = -x;
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let terms = asymptotic_terms(zeta);
        let (mut p, mut q) = (0.0, 0.0);
        for (k, t) in terms.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { *t } else { -*t };
            if k % 2 == 0 {
                p += sign;
            } else {
                q += sign;
            }
        }
        let phase = zeta - std::f64::consts::FRAC_PI_4;
        (phase.cos() * p + phase.sin() * q) / (sqrt_pi * z.powf(0.25))
    }
}

/// Airy function of the first kind.
///
/// Maclaurin series (compensated accumulation) for |x| <= 9, asymptotic
/// expansions beyond; relative accuracy ~1e-13 away from the zeros of Ai.
/// Inputs above 105 underflow to exactly 0.
pub fn airy_ai<R: Real>(x: R) -> R {
    let xf = x.to_f64().expect("airy_ai argument must be representable as f64");
    R::of(airy_ai_f64(xf))
}

/// Zero-order (Delta/A = 0) Fourier components of the two Floquet modes at
/// large amplitude, on an explicit grid of `n` values.
#[derive(Debug, Clone)]
pub struct AiryModeTable<R: Real> {
    pub amplitude: R,
    /// Grid of Fourier indices (integers or a finer continuous sampling).
    pub n: Vec<R>,
    /// `<+|u_1>_n` on the grid (real by construction).
    up1: Vec<R>,
    /// `<-|u_1>_n` on the grid.
    um1: Vec<R>,
    /// Common normalization constant `N_+ = N_- = N`.
    pub norm: R,
    pub windowed: bool,
}

/// Spin component selector for [`AiryModeTable::component`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Plus,
    Minus,
}

impl<R: Real> AiryModeTable<R> {
    /// Evaluates the table on an explicit `n` grid. The grid must cover the
    /// support out to several Airy widths past both turning points, otherwise
    /// the normalization is meaningless and an error is returned.
    pub fn on_grid(amplitude: R, n_grid: &[R]) -> Result<Self> {
        if amplitude <= R::zero() {
            return Err(Error::Domain("Airy tables need A > 0".into()));
        }
        if n_grid.len() < 4 {
            return Err(Error::InvalidInput("n grid too small".into()));
        }
        let c = (R::of(2.0) / amplitude).powf(R::of(1.0) / R::of(3.0));
        let reach = R::of(8.0) / c;
        let lo = n_grid[0];
        let hi = n_grid[n_grid.len() - 1];
        if lo > -(amplitude + reach) || hi < amplitude + reach {
            return Err(Error::InvalidInput(format!(
                "n grid [{lo}, {hi}] does not cover the mode support |n| <~ A + few A^(1/3)"
            )));
        }

        let mut up1 = Vec::with_capacity(n_grid.len());
        let mut um1 = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            // Each branch is kept only up to the opposite turning point; the
            // higher-order damping of the interior oscillations makes the
            // components negligible for |n| > A.
            let plus = if n <= amplitude {
                airy_ai(-c * (n + amplitude))
            } else {
                R::zero()
            };
            let minus = if n >= -amplitude {
                airy_ai(c * (n - amplitude))
            } else {
                R::zero()
            };
            up1.push(plus);
            um1.push(minus);
        }

        // The normalization is the Parseval sum over integer Fourier indices;
        // defining it on the integer subsample keeps it independent of any
        // finer grid resolution. The deep oscillatory region is undersampled
        // at unit steps, so a quadrature-based surrogate would drift.
        let mut raw = R::zero();
        let mut integer_points = 0usize;
        for (i, &n) in n_grid.iter().enumerate() {
            if (n - n.round()).abs() < R::of(1e-9) {
                raw += up1[i] * up1[i] + um1[i] * um1[i];
                integer_points += 1;
            }
        }
        if integer_points < 4 || !(raw > R::zero()) {
            return Err(Error::InvalidInput(
                "n grid must contain the integer indices (normalization is a Parseval sum)".into(),
            ));
        }
        let norm = raw.sqrt().recip();

        Ok(Self {
            amplitude,
            n: n_grid.to_vec(),
            up1,
            um1,
            norm,
            windowed: false,
        })
    }

    /// Integer-index table covering the full support with an `x_margin`-wide
    /// Airy tail past each turning point.
    pub fn integer_support(amplitude: R, x_margin: R) -> Result<Self> {
        let c = (R::of(2.0) / amplitude).powf(R::of(1.0) / R::of(3.0));
        let reach = (x_margin / c).ceil();
        let edge = (amplitude + reach)
            .to_f64()
            .ok_or_else(|| Error::NonFinite("grid edge not representable".into()))?;
        if edge > 5e7 {
            return Err(Error::InvalidInput(format!(
                "integer Airy support of +-{edge:.3e} entries is not tabulatable"
            )));
        }
        let edge = edge.ceil() as i64;
        let grid: Vec<R> = (-edge..=edge).map(|n| R::of(n as f64)).collect();
        Self::on_grid(amplitude, &grid)
    }

    /// Emulates the first-iteration damping of the interior oscillations by
    /// zeroing components whose Airy argument is below `-x_cut`.
    pub fn windowed(mut self, x_cut: R) -> Self {
        let c = (R::of(2.0) / self.amplitude).powf(R::of(1.0) / R::of(3.0));
        for (i, &n) in self.n.iter().enumerate() {
            if -c * (n + self.amplitude) < -x_cut {
                self.up1[i] = R::zero();
            }
            if c * (n - self.amplitude) < -x_cut {
                self.um1[i] = R::zero();
            }
        }
        self.windowed = true;
        self
    }

    /// Normalized component `<spin|u_mode>_n` at grid index `i` (`mode` is 1
    /// or 2). The `u_2` values follow from the built-in antisymmetry.
    pub fn component(&self, spin: Spin, mode: usize, i: usize) -> R {
        let v = match (spin, mode) {
            (Spin::Plus, 1) => self.up1[i],
            (Spin::Minus, 1) => self.um1[i],
            (Spin::Plus, 2) => self.um1[i],
            (Spin::Minus, 2) => -self.up1[i],
            _ => panic!("mode index must be 1 or 2"),
        };
        self.norm * v
    }

    /// Parseval sum of squared normalized components over the integer grid
    /// points; equals 1 for either mode by construction.
    pub fn normalization_sum(&self, mode: usize) -> R {
        let mut acc = R::zero();
        for (i, &n) in self.n.iter().enumerate() {
            if (n - n.round()).abs() < R::of(1e-9) {
                let p = self.component(Spin::Plus, mode, i);
                let m = self.component(Spin::Minus, mode, i);
                acc += p * p + m * m;
            }
        }
        acc
    }

    /// Synthesizes the two modes on `n_fft` uniform time samples through an
    /// FFT over the integer-aliased component spectrum. Requires an integer
    /// grid wide enough that the band fits without self-overlap.
    pub fn mode_samples(&self, n_fft: usize) -> Result<[Vec<StateVector2<R>>; 2]> {
        if !n_fft.is_power_of_two() || n_fft < 256 {
            return Err(Error::InvalidInput("n_fft must be a power of two >= 256".into()));
        }
        if self.n.len() > n_fft {
            return Err(Error::InvalidInput(format!(
                "band of {} components does not fit {} samples",
                self.n.len(),
                n_fft
            )));
        }
        let mut planner = rustfft::FftPlanner::<R>::new();
        let fft = planner.plan_fft_forward(n_fft);
        let zero = Complex::new(R::zero(), R::zero());

        let synth = |vals: &dyn Fn(usize) -> R| -> Vec<Complex<R>> {
            let mut buf = vec![zero; n_fft];
            for (i, &n) in self.n.iter().enumerate() {
                let idx = (n.to_f64().unwrap().round() as i64).rem_euclid(n_fft as i64) as usize;
                buf[idx] = buf[idx] + Complex::new(vals(i), R::zero());
            }
            // f(tau_k) = sum_n c_n exp(-i n tau_k) is the forward transform
            // of the index-placed coefficients.
            fft.process(&mut buf);
            buf
        };

        let mut out: [Vec<StateVector2<R>>; 2] = Default::default();
        for mode in 1..=2 {
            let plus = synth(&|i| self.component(Spin::Plus, mode, i));
            let minus = synth(&|i| self.component(Spin::Minus, mode, i));
            out[mode - 1] = plus
                .into_iter()
                .zip(minus)
                .map(|(p, m)| StateVector2::new(p, m))
                .collect();
        }
        Ok(out)
    }

    /// Wraps the synthesized modes into a [`FloquetSolution`] with a pseudo
    /// quasi-energy gap (the high-temperature rates are insensitive to it).
    pub fn as_solution(&self, n_fft: usize, pseudo_gap: R) -> Result<FloquetSolution<R>> {
        let modes = self.mode_samples(n_fft)?;
        let half = pseudo_gap * R::of(0.5);
        Ok(FloquetSolution {
            eps: [-half, half],
            modes,
            monodromy: crate::pauli::Operator2::identity(),
            degenerate: false,
            n_samples: n_fft,
            params: DriveParams::new(self.amplitude, R::zero(), R::zero(), R::zero())
                .unwrap_or(DriveParams {
                    a: self.amplitude,
                    delta: R::zero(),
                    theta: R::zero(),
                    kappa: R::zero(),
                }),
        })
    }
}

/// Zero-order Fourier components of the large-amplitude Floquet modes on an
/// explicit `n` grid (see [`AiryModeTable::on_grid`]).
pub fn airy_fourier_components<R: Real>(amplitude: R, n_grid: &[R]) -> Result<AiryModeTable<R>> {
    AiryModeTable::on_grid(amplitude, n_grid)
}

/// Result of fitting `log G12` against `log A` over an amplitude grid.
#[derive(Debug, Clone)]
pub struct ScalingFit<R: Real> {
    pub exponent: R,
    /// Prefactor `C` of `G12 ~ C A^exponent`.
    pub prefactor: R,
    /// Largest absolute log-space fit residual.
    pub residual: R,
    /// When set, the bath was not deep enough in the high-temperature regime
    /// (or the fit residual is large); the power law is then unreliable.
    pub regime_warning: bool,
    /// The fitted `(A, G12)` points.
    pub points: Vec<(R, R)>,
}

/// High-temperature scaling of the downward rate built from Airy tables:
/// fits `G12(A)` to a power law across `a_grid`.
pub fn rate_scaling_high_t<R: Real>(
    a_grid: &[R],
    bath: &BathSpec<R>,
    coupling: Coupling,
) -> Result<ScalingFit<R>> {
    if a_grid.len() < 2 {
        return Err(Error::InvalidInput("scaling fit needs at least two amplitudes".into()));
    }
    let mut points = Vec::with_capacity(a_grid.len());
    let mut max_band = R::zero();
    for &a in a_grid {
        let g12 = airy_rate_g12(a, bath, coupling)?;
        max_band = max_band.max(R::of(2.0) * a);
        points.push((a, g12));
    }

    // Least squares on ln G = p ln A + ln C.
    let n = R::of(points.len() as f64);
    let (mut sx, mut sy, mut sxx, mut sxy) = (R::zero(), R::zero(), R::zero(), R::zero());
    for &(a, g) in &points {
        if !(g > R::zero()) {
            return Err(Error::NonFinite("non-positive rate in scaling fit".into()));
        }
        let x = a.ln();
        let y = g.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let exponent = (n * sxy - sx * sy) / denom;
    let intercept = (sy - exponent * sx) / n;
    let prefactor = intercept.exp();

    let mut residual = R::zero();
    for &(a, g) in &points {
        let fit = exponent * a.ln() + intercept;
        residual = residual.max((g.ln() - fit).abs());
    }
    let regime_warning = bath.theta < R::of(5.0) * max_band || residual > R::of(0.25);

    Ok(ScalingFit {
        exponent,
        prefactor,
        residual,
        regime_warning,
        points,
    })
}

/// Downward rate `G12` for one amplitude from the zero-order Airy modes.
pub fn airy_rate_g12<R: Real>(a: R, bath: &BathSpec<R>, coupling: Coupling) -> Result<R> {
    let table = AiryModeTable::integer_support(a, R::of(12.0))?;
    // The pairwise matrix elements span twice the mode band; pad well clear
    // of aliasing.
    let band = table.n.len();
    let n_fft = (4 * band).next_power_of_two().max(256);
    let sol = table.as_solution(n_fft, R::of(0.5))?;
    let ftable = fourier_components(
        &sol,
        &coupling.operator(),
        coupling,
        &FourierOptions::default(),
    )?;
    let rates = rate_set(&ftable, &sol, bath)?;
    Ok(rates.g12)
}
