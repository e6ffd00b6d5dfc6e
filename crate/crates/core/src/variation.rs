//! Second and third variations of the area functional on catenoid extremals.
//!
//! With s = x/C and η(x) = ψ(x/C)·cosh(x/C), the second variation reduces
//! (up to a positive factor) to ∫(ψ′² − 2ψ²/cosh²s) ds over [−τ, τ]. The
//! even solution μ(s) = 1 − s·tanh s of ψ″ + 2ψ/cosh²s = 0 factorizes the
//! form as ∫(ψ′ − (μ′/μ)ψ)² ds while μ has no roots, i.e. for τ ≤ τ*.

use std::f64::consts::PI;

use crate::energetics::area_quadrature;
use crate::error::{Error, Result};
use crate::extremals::{critical_constants, Extremal};
use crate::grid::{simpson, TestFunction, UniformGrid};

/// Samples within this distance of ±τ* evaluate ψ/μ as ψ′/μ′.
const ROOT_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PositiveDefiniteSample,
    ZeroDirection,
    NegativeDirection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationReport {
    /// Reduced second-variation form of ψ = η(Cs)/cosh s.
    pub q_form: f64,
    /// ∫ψ′² ds, the scale against which `q_form` is judged.
    pub q_scale: f64,
    /// dS/dt at t = 0.
    pub raw_d1: f64,
    /// (1/2!)·d²S/dt² at t = 0.
    pub raw_d2: f64,
    /// (1/3!)·d³S/dt³ at t = 0.
    pub raw_d3: f64,
    pub classification: Classification,
    /// (t, S_h[y + tη]) for every requested t.
    pub samples: Vec<(f64, f64)>,
}

pub fn mu(s: f64) -> f64 {
    1.0 - s * s.tanh()
}

pub fn mu_prime(s: f64) -> f64 {
    let ch = s.cosh();
    -s.tanh() - s / (ch * ch)
}

/// The soliton potential 2/cosh²s.
pub fn soliton_potential(s: f64) -> f64 {
    let ch = s.cosh();
    2.0 / (ch * ch)
}

/// |(μ′/μ)′ + (μ′/μ)² + 2/cosh²s| with the outer derivative taken by
/// central differences of the analytic log-derivative.
pub fn riccati_residual(s: f64, fd_step: f64) -> Result<f64> {
    let tau_star = critical_constants().tau_star;
    if !(fd_step > 0.0) {
        return Err(Error::Domain(format!("fd_step must be positive, got {fd_step}")));
    }
    if s.abs() >= tau_star - 10.0 * fd_step {
        return Err(Error::Domain(format!("s = {s} lies within the exclusion band around ±tau*")));
    }
    let w = |s: f64| mu_prime(s) / mu(s);
    let dw = (w(s + fd_step) - w(s - fd_step)) / (2.0 * fd_step);
    Ok((dw + w(s) * w(s) + soliton_potential(s)).abs())
}

/// ∫(ψ′² − 2ψ²/cosh²s) ds by composite Simpson.
pub fn q_form(psi: &TestFunction) -> f64 {
    let dpsi = psi.derivative();
    let integrand: Vec<f64> = psi
        .values
        .iter()
        .zip(&dpsi)
        .enumerate()
        .map(|(i, (&p, &dp))| dp * dp - soliton_potential(psi.grid.x(i)) * p * p)
        .collect();
    simpson(&integrand, psi.grid.step())
}

/// ∫ψ′² ds.
pub fn q_scale(psi: &TestFunction) -> f64 {
    let sq: Vec<f64> = psi.derivative().iter().map(|d| d * d).collect();
    simpson(&sq, psi.grid.step())
}

/// ∫(ψ′ − (μ′/μ)ψ)² ds, defined for τ ≤ τ*.
pub fn factorized_form(psi: &TestFunction) -> Result<f64> {
    let tau_star = critical_constants().tau_star;
    let tau = psi.half_width();
    if tau > tau_star + 1e-12 {
        return Err(Error::Domain(format!("factorized form needs tau <= tau*, got {tau}")));
    }
    let dpsi = psi.derivative();
    let integrand: Vec<f64> = (0..psi.grid.n)
        .map(|i| {
            let s = psi.grid.x(i);
            let ratio = if s.abs() > tau_star - ROOT_GUARD { dpsi[i] / mu_prime(s) } else { psi.values[i] / mu(s) };
            let r = dpsi[i] - mu_prime(s) * ratio;
            r * r
        })
        .collect();
    Ok(simpson(&integrand, psi.grid.step()))
}

/// η(x) = ψ(x/C)·cosh(x/C) on the image grid x = C·s.
pub fn eta_from_psi(psi: &TestFunction, e: &Extremal) -> Result<TestFunction> {
    if (psi.half_width() - e.tau).abs() > 1e-12 {
        return Err(Error::GridMismatch { expected: e.tau, found: psi.half_width() });
    }
    let grid = UniformGrid { half_width: e.h, n: psi.grid.n };
    let mut values: Vec<f64> = (0..psi.grid.n).map(|i| psi.values[i] * psi.grid.x(i).cosh()).collect();
    values[0] = 0.0;
    values[grid.n - 1] = 0.0;
    TestFunction::new(grid, values)
}

/// Inverse of [`eta_from_psi`]: ψ(s) = η(Cs)/cosh s.
pub fn psi_from_eta(eta: &TestFunction, e: &Extremal) -> Result<TestFunction> {
    if (eta.half_width() - e.h).abs() > 1e-12 {
        return Err(Error::GridMismatch { expected: e.h, found: eta.half_width() });
    }
    let grid = UniformGrid { half_width: e.tau, n: eta.grid.n };
    let values: Vec<f64> = (0..grid.n).map(|i| eta.values[i] / grid.x(i).cosh()).collect();
    TestFunction::new(grid, values)
}

/// The degenerate direction at the critical extremal, η*(x) = μ(x/C)·cosh(x/C).
pub fn critical_direction(e: &Extremal, n: usize) -> Result<TestFunction> {
    let psi = TestFunction::sample(e.tau, n, mu)?;
    eta_from_psi(&psi, e)
}

/// Sign of the reduced form. A direction counts as zero when |q| is within
/// 1e−9·∫ψ′² plus ten times the step-halving estimate of its quadrature error.
pub fn classify(psi: &TestFunction) -> (f64, f64, Classification) {
    let q = q_form(psi);
    let scale = q_scale(psi);
    let disc = psi.coarsened().map(|c| (q - q_form(&c)).abs() / 3.0).unwrap_or(0.0);
    let tol = 1e-9 * scale + 10.0 * disc;
    let class = if q.abs() <= tol {
        Classification::ZeroDirection
    } else if q > 0.0 {
        Classification::PositiveDefiniteSample
    } else {
        Classification::NegativeDirection
    };
    (q, scale, class)
}

/// S_h[y + tη] with y sampled from the extremal on η's grid.
pub fn perturbed_area(e: &Extremal, eta: &TestFunction, t: f64) -> Result<f64> {
    let ys: Vec<f64> = (0..eta.grid.n)
        .map(|i| e.profile_unchecked(eta.grid.x(i)) + t * eta.values[i])
        .collect();
    if ys.iter().any(|&y| y <= 0.0) {
        return Err(Error::ProfileNonPositive { t });
    }
    area_quadrature(&eta.grid, &ys)
}

/// Samples S_h[y + tη] and extracts the first three Taylor coefficients by
/// central differences in t with step max|t|/8.
pub fn taylor_probe(e: &Extremal, eta: &TestFunction, t_values: &[f64]) -> Result<VariationReport> {
    let t_max = t_values.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if !(t_max > 0.0) {
        return Err(Error::Domain("t_values must contain a nonzero entry".into()));
    }
    let symmetric = t_values.iter().all(|t| t_values.iter().any(|u| (u + t).abs() <= 1e-15 * t_max));
    if !symmetric {
        return Err(Error::Domain("t_values must be symmetric about 0".into()));
    }

    let dt = t_max / 8.0;
    let s0 = perturbed_area(e, eta, 0.0)?;
    // increments S(k·dt) − S(0): an exactly constant S gives exact zeros
    let s = |k: i32| perturbed_area(e, eta, k as f64 * dt).map(|v| v - s0);
    let (m3, m2, m1, p1, p2, p3) = (s(-3)?, s(-2)?, s(-1)?, s(1)?, s(2)?, s(3)?);

    let raw_d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * dt);
    let d2 = (-p2 + 16.0 * p1 + 16.0 * m1 - m2) / (12.0 * dt * dt);
    let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * dt * dt * dt);

    let samples = t_values
        .iter()
        .map(|&t| perturbed_area(e, eta, t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;

    let psi = psi_from_eta(eta, e)?;
    let (q, scale, classification) = classify(&psi);
    Ok(VariationReport {
        q_form: q,
        q_scale: scale,
        raw_d1,
        raw_d2: d2 / 2.0,
        raw_d3: d3 / 6.0,
        classification,
        samples,
    })
}

/// π∫ η′²/(1+y′²)^{3/2} · [η − y·y′·η′/(1+y′²)] dx with analytic y, y′.
pub fn third_variation(e: &Extremal, eta: &TestFunction) -> f64 {
    let deta = eta.derivative();
    let integrand: Vec<f64> = (0..eta.grid.n)
        .map(|i| {
            let x = eta.grid.x(i);
            let (y, yp) = (e.profile_unchecked(x), e.slope(x));
            let w = 1.0 + yp * yp;
            deta[i] * deta[i] / w.powf(1.5) * (eta.values[i] - y * yp * deta[i] / w)
        })
        .collect();
    PI * simpson(&integrand, eta.grid.step())
}

/// Closed form of the third variation along η* at the critical extremal.
pub fn critical_third_variation() -> f64 {
    let cc = critical_constants();
    2.0 * PI * cc.tau_star.powi(4) / (3.0 * cc.h_star)
}

/// Least-squares slope of ln|ΔS| against ln t.
pub fn power_law_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(t, d)| (t.ln(), d.abs().ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
