//! Direct minimization of the discretized area functional.
//!
//! The profile is piecewise linear on a uniform grid with y(±h) = 1 pinned.
//! Each segment contributes 2π·Δx·m·√(1 + s²) with midpoint radius m and
//! slope s, so the area and its gradient couple neighbours only and the
//! Hessian is tridiagonal.
//!
//! Descent steps are preconditioned by the slope-slope block of that
//! Hessian, Σ 2π·m/(Δx·(1 + s²)^{3/2}) per segment, which is positive
//! definite on the free nodes. Nodes on the positivity floor with an outward
//! gradient are frozen (two-metric projection), and trial points are
//! projected back onto y ≥ ε before the Armijo test.

use crate::config::{Config, TWO_PI};
use crate::error::{Error, Result};
use crate::extremals::{solve_branches, upper_branch, Extremal};
use crate::grid::{interpolate, UniformGrid};
use crate::spectrum::negative_direction;
use crate::variation::eta_from_psi;

/// Amplitude of the unstable-mode kick used by [`InitialProfile::UpperPerturbed`].
pub const UPPER_KICK: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub h: f64,
    pub grid: UniformGrid,
    pub y: Vec<f64>,
}

impl Profile {
    pub fn new(h: f64, y: Vec<f64>) -> Result<Self> {
        let grid = UniformGrid::new(h, y.len())?;
        if y[0] != 1.0 || y[y.len() - 1] != 1.0 {
            return Err(Error::Domain("profile must equal 1 at both rings".into()));
        }
        if let Some(index) = y.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::NonPositiveProfile { index });
        }
        Ok(Profile { h, grid, y })
    }

    pub fn cylinder(h: f64, n: usize) -> Result<Self> {
        Self::new(h, vec![1.0; n])
    }

    /// Samples an extremal on `n` points.
    pub fn from_extremal(e: &Extremal, n: usize) -> Result<Self> {
        let grid = UniformGrid::new(e.h, n)?;
        let mut y: Vec<f64> = grid.points().iter().map(|&x| e.profile_unchecked(x)).collect();
        y[0] = 1.0;
        y[n - 1] = 1.0;
        Self::new(e.h, y)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn min_y(&self) -> f64 {
        self.y.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProfile {
    Cylinder,
    LowerCatenoid,
    UpperCatenoid,
    /// The upper catenoid pushed along its unstable mode (unit sup-norm, amplitude [`UPPER_KICK`]).
    UpperPerturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    Collapsed,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeReport {
    pub outcome: Outcome,
    pub final_area: f64,
    pub iterations: usize,
    pub final_profile: Profile,
    pub min_y: f64,
    /// Max-norm of the projected gradient at the last iterate.
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub floor_eps: f64,
    pub gradient_tol: f64,
    pub max_iter: usize,
    pub shrink: f64,
    pub sufficient_decrease: f64,
}

impl DescentOptions {
    pub fn from_config(cfg: &Config) -> Self {
        DescentOptions {
            floor_eps: cfg.floor_eps,
            gradient_tol: 1e-8 * TWO_PI,
            max_iter: cfg.descent_max_iter,
            shrink: cfg.backtrack_shrink,
            sufficient_decrease: cfg.sufficient_decrease,
        }
    }

    pub fn collapse_threshold(&self) -> f64 {
        10.0 * self.floor_eps
    }
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self::from_config(&Config::default())
    }
}

fn area_of(y: &[f64], dx: f64) -> f64 {
    let sum: f64 = y
        .windows(2)
        .map(|w| {
            let s = (w[1] - w[0]) / dx;
            0.5 * (w[0] + w[1]) * (1.0 + s * s).sqrt()
        })
        .sum();
    TWO_PI * dx * sum
}

fn gradient_of(y: &[f64], dx: f64) -> Vec<f64> {
    let n = y.len();
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        let s = (y[i + 1] - y[i]) / dx;
        let l = (1.0 + s * s).sqrt();
        let m = 0.5 * (y[i] + y[i + 1]);
        let half = 0.5 * dx * l;
        let tilt = m * s / l;
        g[i] += TWO_PI * (half - tilt);
        g[i + 1] += TWO_PI * (half + tilt);
    }
    g[0] = 0.0;
    g[n - 1] = 0.0;
    g
}

/// Discretized 2π∫y√(1+y′²)dx with midpoint radius and per-segment slope.
pub fn discrete_area(p: &Profile) -> f64 {
    area_of(&p.y, p.grid.step())
}

/// Exact gradient of [`discrete_area`] with respect to every node; the two
/// pinned entries are zero.
pub fn discrete_gradient(p: &Profile) -> Vec<f64> {
    gradient_of(&p.y, p.grid.step())
}

/// Solves the preconditioner system on the free nodes; frozen nodes get d = 0.
fn precondition(y: &[f64], dx: f64, g: &[f64], frozen: &[bool]) -> Vec<f64> {
    let n = y.len();
    let weights: Vec<f64> = y
        .windows(2)
        .map(|w| {
            let s = (w[1] - w[0]) / dx;
            let l2 = 1.0 + s * s;
            TWO_PI * 0.5 * (w[0] + w[1]) / (dx * l2 * l2.sqrt())
        })
        .collect();
    // Tridiagonal system over all nodes; fixed rows are identity with zero rhs.
    let mut diag = vec![1.0; n];
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        if frozen[i] {
            continue;
        }
        let (wl, wr) = (weights[i - 1], weights[i]);
        diag[i] = wl + wr + 1e-14 * (wl + wr).max(1.0);
        if !frozen[i - 1] && i > 1 {
            lower[i] = -wl;
        }
        if !frozen[i + 1] && i < n - 2 {
            upper[i] = -wr;
        }
        rhs[i] = -g[i];
    }
    thomas(&lower, &diag, &upper, &rhs)
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn projected_gradient_norm(y: &[f64], g: &[f64], floor: f64) -> f64 {
    y.iter()
        .zip(g)
        .map(|(&v, &gi)| if v <= floor && gi > 0.0 { 0.0 } else { gi.abs() })
        .fold(0.0, f64::max)
}

/// Builds the starting profile for `minimize`.
pub fn initial_profile(h: f64, n: usize, init: InitialProfile) -> Result<Profile> {
    match init {
        InitialProfile::Cylinder => Profile::cylinder(h, n),
        InitialProfile::LowerCatenoid => Profile::from_extremal(&solve_branches(h)?.0, n),
        InitialProfile::UpperCatenoid => Profile::from_extremal(&solve_branches(h)?.1, n),
        InitialProfile::UpperPerturbed => {
            let upper = upper_branch(h)?;
            let psi = negative_direction(upper.tau)?;
            let eta = eta_from_psi(&psi, &upper)?;
            let sup = eta.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let mut p = Profile::from_extremal(&upper, n)?;
            for i in 1..n - 1 {
                let x = p.grid.x(i);
                p.y[i] += UPPER_KICK * interpolate(&eta.grid, &eta.values, x) / sup;
            }
            Ok(p)
        }
    }
}

/// Minimizes the discrete area from a preset initial profile with default options.
pub fn minimize(h: f64, n: usize, init: InitialProfile) -> Result<MinimizeReport> {
    minimize_with(h, n, init, &DescentOptions::default())
}

pub fn minimize_with(h: f64, n: usize, init: InitialProfile, opts: &DescentOptions) -> Result<MinimizeReport> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("half-distance must be positive, got {h}")));
    }
    if n < 64 {
        return Err(Error::Domain(format!("minimization needs at least 64 grid points, got {n}")));
    }
    Ok(descend(initial_profile(h, n, init)?, opts))
}

/// Projected, preconditioned gradient descent with Armijo backtracking.
pub fn descend(mut p: Profile, opts: &DescentOptions) -> MinimizeReport {
    let n = p.n();
    let dx = p.grid.step();
    let floor = opts.floor_eps;
    for v in p.y[1..n - 1].iter_mut() {
        *v = v.max(floor);
    }

    let mut area = area_of(&p.y, dx);
    let mut g = gradient_of(&p.y, dx);
    let mut frozen = vec![false; n];
    let mut trial = p.y.clone();
    let mut iterations = 0;
    let mut stalled = false;

    loop {
        let gnorm = projected_gradient_norm(&p.y, &g, floor);
        if gnorm <= opts.gradient_tol || iterations >= opts.max_iter || stalled {
            let min_y = p.min_y();
            let outcome = if gnorm <= opts.gradient_tol || stalled {
                if min_y <= opts.collapse_threshold() {
                    Outcome::Collapsed
                } else if gnorm <= opts.gradient_tol {
                    Outcome::Converged
                } else {
                    Outcome::IterationLimit
                }
            } else {
                Outcome::IterationLimit
            };
            return MinimizeReport { outcome, final_area: area, iterations, final_profile: p, min_y, gradient_norm: gnorm };
        }

        for i in 1..n - 1 {
            frozen[i] = p.y[i] <= floor && g[i] > 0.0;
        }
        let d = precondition(&p.y, dx, &g, &frozen);

        let mut alpha = 1.0;
        loop {
            for i in 1..n - 1 {
                trial[i] = (p.y[i] + alpha * d[i]).max(floor);
            }
            trial[0] = 1.0;
            trial[n - 1] = 1.0;
            let decrease: f64 = (1..n - 1).map(|i| g[i] * (trial[i] - p.y[i])).sum();
            let trial_area = area_of(&trial, dx);
            if decrease < 0.0 && trial_area <= area + opts.sufficient_decrease * decrease {
                std::mem::swap(&mut p.y, &mut trial);
                area = trial_area;
                g = gradient_of(&p.y, dx);
                break;
            }
            alpha *= opts.shrink;
            if alpha < 1e-20 {
                stalled = true;
                break;
            }
        }
        iterations += 1;
    }
}

/// Bisects on h for the boundary between converging and collapsing
/// cylinder-initialized runs, starting from a converging `lo` and collapsing `hi`.
pub fn transition_bracket(mut lo: f64, mut hi: f64, n: usize, width: f64) -> Result<(f64, f64)> {
    let collapses = |h: f64| -> Result<bool> { Ok(minimize(h, n, InitialProfile::Cylinder)?.outcome == Outcome::Collapsed) };
    if collapses(lo)? || !collapses(hi)? {
        return Err(Error::Domain(format!("[{lo}, {hi}] does not straddle the collapse transition")));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if collapses(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
