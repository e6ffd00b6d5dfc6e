//! Numerical defaults shared by the library and the command-line front end.

/// One block of tunables, echoed into every CLI output record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Sample count for grid-based quadrature of profiles and test functions.
    pub grid_points: usize,
    pub root_tol_x: f64,
    pub root_tol_f: f64,
    pub root_max_iter: usize,
    /// RK4 step count used by the shooting eigen-solver.
    pub shoot_steps: usize,
    /// Positivity floor for the direct minimizer.
    pub floor_eps: f64,
    pub descent_max_iter: usize,
    /// Armijo backtracking shrink factor.
    pub backtrack_shrink: f64,
    /// Armijo sufficient-decrease constant.
    pub sufficient_decrease: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid_points: 2048,
            root_tol_x: 1e-12,
            root_tol_f: 1e-12,
            root_max_iter: 200,
            shoot_steps: 4096,
            floor_eps: 1e-6,
            descent_max_iter: 200_000,
            backtrack_shrink: 0.5,
            sufficient_decrease: 1e-4,
        }
    }
}

impl Config {
    /// (name, value) pairs in a fixed order for serialization.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("grid_points", self.grid_points as f64),
            ("root_tol_x", self.root_tol_x),
            ("root_tol_f", self.root_tol_f),
            ("root_max_iter", self.root_max_iter as f64),
            ("shoot_steps", self.shoot_steps as f64),
            ("floor_eps", self.floor_eps),
            ("descent_max_iter", self.descent_max_iter as f64),
            ("backtrack_shrink", self.backtrack_shrink),
            ("sufficient_decrease", self.sufficient_decrease),
        ]
    }
}

/// 2π, the area of the two unit disks bounded by the rings.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
