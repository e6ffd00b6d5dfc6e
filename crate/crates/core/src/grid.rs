//! Uniform grids, sampled functions and the finite-difference/quadrature
//! kernels shared by the variational and energy computations.

use crate::error::{Error, Result};

/// `n` equally spaced points covering `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub half_width: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Domain(format!("grid half-width must be positive, got {half_width}")));
        }
        if n < 3 {
            return Err(Error::Domain(format!("grid needs at least 3 points, got {n}")));
        }
        Ok(UniformGrid { half_width, n })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    /// Grid abscissa; the last point is pinned to `+half_width` exactly.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.half_width
        } else {
            -self.half_width + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// The same interval, scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> UniformGrid {
        UniformGrid { half_width: self.half_width * factor, n: self.n }
    }
}

/// Grid-sampled function vanishing at both endpoints.
///
/// Plays the role of the variation direction η on `[-h, h]` as well as the
/// reduced direction ψ on `[-τ, τ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
}

pub const MIN_TEST_SAMPLES: usize = 16;

impl TestFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidTestFunction(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n
            )));
        }
        if grid.n < MIN_TEST_SAMPLES {
            return Err(Error::InvalidTestFunction(format!("need at least {MIN_TEST_SAMPLES} samples, got {}", grid.n)));
        }
        if values[0] != 0.0 || values[grid.n - 1] != 0.0 {
            return Err(Error::InvalidTestFunction("endpoint values must be exactly zero".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTestFunction("non-finite sample".into()));
        }
        Ok(TestFunction { grid, values })
    }

    /// Samples `f` on `n` points of `[-a, a]`, forcing the endpoint values to zero.
    pub fn sample<F: Fn(f64) -> f64>(a: f64, n: usize, f: F) -> Result<Self> {
        let grid = UniformGrid::new(a, n)?;
        let mut values: Vec<f64> = (0..n).map(|i| f(grid.x(i))).collect();
        values[0] = 0.0;
        values[n - 1] = 0.0;
        Self::new(grid, values)
    }

    pub fn zero(a: f64, n: usize) -> Result<Self> {
        Self::sample(a, n, |_| 0.0)
    }

    pub fn half_width(&self) -> f64 {
        self.grid.half_width
    }

    pub fn derivative(&self) -> Vec<f64> {
        derivative(&self.values, self.grid.step())
    }

    /// Every other sample, for step-halving error estimates.
    pub fn coarsened(&self) -> Option<TestFunction> {
        if (self.grid.n - 1) % 2 != 0 || (self.grid.n - 1) / 2 + 1 < MIN_TEST_SAMPLES {
            return None;
        }
        let values: Vec<f64> = self.values.iter().step_by(2).copied().collect();
        let grid = UniformGrid { half_width: self.grid.half_width, n: values.len() };
        Some(TestFunction { grid, values })
    }

    /// Linear interpolation at `x` inside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        interpolate(&self.grid, &self.values, x)
    }
}

/// Centered differences in the interior, second-order one-sided at the ends.
pub fn derivative(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dx);
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dx);
    }
    d
}

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals finishes with the 3/8 rule on the last three.
pub fn simpson(values: &[f64], dx: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * dx * (values[0] + values[1]),
        3 => dx / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut acc = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = acc * dx / 3.0;
            if simpson_end != n - 1 {
                let t = &values[simpson_end..];
                total += 3.0 * dx / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

pub fn interpolate(grid: &UniformGrid, values: &[f64], x: f64) -> f64 {
    let dx = grid.step();
    let pos = ((x + grid.half_width) / dx).clamp(0.0, (grid.n - 1) as f64);
    let i = (pos.floor() as usize).min(grid.n - 2);
    let w = pos - i as f64;
    values[i] * (1.0 - w) + values[i + 1] * w
}
