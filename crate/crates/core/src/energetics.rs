//! Film area, the Goldschmidt half-distance, and the ring attraction force.

use std::f64::consts::PI;

use crate::config::TWO_PI;
use crate::error::{Error, Result};
use crate::extremals::{critical_constants, lower_branch, CRITICAL_H_TOL};
use crate::grid::{derivative, simpson, UniformGrid};
use crate::rootfind::{find_root_bracketed, Bracket, Tolerances};

/// Force on the rings at one half-distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSample {
    pub h: f64,
    pub force: f64,
    pub dforce_dh: f64,
}

/// 2π∫ y·√(1 + y′²) dx over the grid, with y′ from finite differences.
pub fn area_quadrature(grid: &UniformGrid, y: &[f64]) -> Result<f64> {
    if y.len() != grid.n {
        return Err(Error::Domain(format!("{} samples for a {}-point grid", y.len(), grid.n)));
    }
    if let Some(index) = y.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveProfile { index });
    }
    let dy = derivative(y, grid.step());
    let integrand: Vec<f64> = y.iter().zip(&dy).map(|(&v, &d)| v * (1.0 + d * d).sqrt()).collect();
    Ok(TWO_PI * simpson(&integrand, grid.step()))
}

/// R(τ) = 2/τ + sinh(2τ)/τ², so that S_h[y₁] = πh²·R(τ₁(h)).
pub fn r_of_tau(tau: f64) -> Result<f64> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(Error::Domain(format!("R requires tau > 0, got {tau}")));
    }
    Ok(2.0 / tau + (2.0 * tau).sinh() / (tau * tau))
}

/// Area on the lower branch.
pub fn lower_area(h: f64) -> Result<f64> {
    Ok(lower_branch(h)?.area_closed_form())
}

/// The half-distance h_G at which the stable film has the area 2π of the two
/// ring disks.
pub fn goldschmidt_constant() -> f64 {
    let h_star = critical_constants().h_star;
    let g = |h: f64| lower_area(h).expect("h in (0, h*]") - TWO_PI;
    let bracket = Bracket::new(g, 0.1, h_star).expect("S_h[y1] - 2π changes sign on [0.1, h*]");
    find_root_bracketed(g, bracket, Tolerances::new(1e-15, 1e-11)).expect("h_G root converges")
}

fn force_value(h: f64) -> Result<f64> {
    Ok(-4.0 * PI * h / lower_branch(h)?.tau)
}

/// F(h) = −4πh/τ₁(h) and a central-difference dF/dh whose step shrinks
/// toward h* without crossing it.
pub fn force(h: f64) -> Result<ForceSample> {
    let h_star = critical_constants().h_star;
    if h <= 0.0 || h.is_nan() {
        return Err(Error::Domain(format!("half-distance must be positive, got {h}")));
    }
    if h >= h_star - CRITICAL_H_TOL {
        return Err(Error::NoExtremal { h, h_star });
    }
    let step = 1e-6f64.min((h_star - h) / 10.0).min(h / 10.0);
    let force = force_value(h)?;
    let dforce_dh = (force_value(h + step)? - force_value(h - step)?) / (2.0 * step);
    Ok(ForceSample { h, force, dforce_dh })
}
