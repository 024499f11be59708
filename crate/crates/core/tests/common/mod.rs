//! Independent numerical oracles shared by the integration suites.
//!
//! Nothing here calls back into the library's computational paths: the Airy
//! oracle integrates the defining ODE / integral representations directly,
//! and the rate-equation oracle is a plain fixed-step RK4 integrator.
#![allow(dead_code)] // each test binary uses a different subset

use num_complex::Complex64 as C64;

/// Kahan-compensated accumulator; plain summation would floor the ODE sweep
/// at ~1e-11 after millions of steps.
struct Comp {
    sum: f64,
    c: f64,
}

impl Comp {
    fn new(v: f64) -> Self {
        Self { sum: v, c: 0.0 }
    }

    fn add(&mut self, v: f64) {
        let t = v - self.c;
        let s = self.sum + t;
        self.c = (s - self.sum) - t;
        self.sum = s;
    }

    fn get(&self) -> f64 {
        self.sum
    }
}

/// Ai on the negative axis by integrating y'' = x y downward from x = 0 with
/// 30-digit initial conditions. Requested points are filled in one sweep;
/// the local Taylor correction uses the ODE for the curvature term.
pub fn airy_oracle_negative(points: &mut [(f64, f64)]) {
    points.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap());
    let mut y = Comp::new(0.355_028_053_887_817_2); // Ai(0)
    let mut dy = Comp::new(-0.258_819_403_792_806_8); // Ai'(0)
    let h = -5e-5_f64;
    let mut step: i64 = 0;
    let f = |x: f64, y: f64, dy: f64| (dy, x * y);
    let mut idx = 0;
    while idx < points.len() {
        loop {
            let x = step as f64 * h;
            if x + 0.5 * h <= points[idx].0 {
                break;
            }
            let (yv, dv) = (y.get(), dy.get());
            let (k1y, k1d) = f(x, yv, dv);
            let (k2y, k2d) = f(x + 0.5 * h, yv + 0.5 * h * k1y, dv + 0.5 * h * k1d);
            let (k3y, k3d) = f(x + 0.5 * h, yv + 0.5 * h * k2y, dv + 0.5 * h * k2d);
            let (k4y, k4d) = f(x + h, yv + h * k3y, dv + h * k3d);
            y.add(h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y));
            dy.add(h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d));
            step += 1;
        }
        let x = step as f64 * h;
        let d = points[idx].0 - x;
        // Quadratic Taylor correction; y'' = x y from the ODE itself.
        points[idx].1 = y.get() + d * dy.get() + 0.5 * d * d * (x * y.get());
        idx += 1;
    }
}

pub fn airy_oracle_at(x: f64) -> f64 {
    if x < 0.0 {
        let mut pts = [(x, 0.0)];
        airy_oracle_negative(&mut pts);
        pts[0].1
    } else {
        airy_oracle_positive(x)
    }
}

fn simpson<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Gamma(5/6), frozen from a 30-digit reference evaluation.
const GAMMA_FIVE_SIXTHS: f64 = 1.128_787_029_908_125_9;

/// Ai on the non-negative axis by numerical quadrature of the integral
/// representation: a rotated-contour form for small x and the exponentially
/// scaled form (with the t = u^6 substitution) beyond, so no cancellation or
/// endpoint singularity limits the accuracy.
pub fn airy_oracle_positive(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 1.0 {
        // Ai(x) = (1/pi) Re[ e^{i pi/6} Int_0^inf exp(-u^3/3 + i x u e^{i pi/6}) du ]
        let rot = C64::from_polar(1.0, std::f64::consts::FRAC_PI_6);
        let integrand = |u: f64| (C64::new(-u * u * u / 3.0, 0.0) + C64::i() * x * u * rot).exp();
        let val = simpson(integrand, 0.0, 9.0, 16384);
        (rot * val).re / std::f64::consts::PI
    } else {
        // Ai(x) = a(s) Int_0^inf (2 + t/s)^{-1/6} t^{-1/6} e^{-t} dt,
        // s = (2/3) x^{3/2); substitute t = u^6 to smooth the endpoint.
        let s = 2.0 / 3.0 * x.powf(1.5);
        let pref = s.powf(-1.0 / 6.0) * (-s).exp()
            / (std::f64::consts::PI.sqrt() * 48f64.powf(1.0 / 6.0) * GAMMA_FIVE_SIXTHS);
        let integrand = |u: f64| {
            let t = u.powi(6);
            C64::new(6.0 * u.powi(4) * (2.0 + t / s).powf(-1.0 / 6.0) * (-t).exp(), 0.0)
        };
        let val = simpson(integrand, 0.0, 2.4, 16384).re;
        pref * val
    }
}

/// Fixed-step RK4 integrator for the reduced dynamics
/// `dp11 = (1 - p11) W_down - p11 W_up`, `dc12 = -lambda c12`.
pub struct RateOde {
    pub w_down: f64,
    pub w_up: f64,
    pub lambda: C64,
}

impl RateOde {
    pub fn integrate(&self, p0: f64, c0: C64, tau_grid: &[f64], h_max: f64) -> Vec<(f64, C64)> {
        let deriv = |p: f64, c: C64| {
            (
                (1.0 - p) * self.w_down - p * self.w_up,
                -(self.lambda * c),
            )
        };
        let mut out = Vec::with_capacity(tau_grid.len());
        let mut p = p0;
        let mut c = c0;
        let mut t = 0.0;
        for &tau in tau_grid {
            // Integer substepping lands exactly on each grid point.
            let span = tau - t;
            let n = (span / h_max).ceil().max(1.0) as usize;
            let h = span / n as f64;
            if span > 0.0 {
                for _ in 0..n {
                    let (k1p, k1c) = deriv(p, c);
                    let (k2p, k2c) = deriv(p + 0.5 * h * k1p, c + k1c * (0.5 * h));
                    let (k3p, k3c) = deriv(p + 0.5 * h * k2p, c + k2c * (0.5 * h));
                    let (k4p, k4c) = deriv(p + h * k3p, c + k3c * h);
                    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
                    c += (k1c + k2c * 2.0 + k3c * 2.0 + k4c) * (h / 6.0);
                }
            }
            t = tau;
            out.push((p, c));
        }
        out
    }
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn log_log_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = ((sy - slope * sx) / n).exp();
    (slope, intercept)
}

/// Distance between two frequencies identified modulo the drive frequency
/// and up to sign (quasi-energy circle metric).
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let mut best = f64::INFINITY;
    for k in -5..=5 {
        best = best
            .min((a - b + k as f64).abs())
            .min((a + b + k as f64).abs());
    }
    best
}
