//! The string eigenproblem ψ″ + λ·ρ(s)·ψ = 0 on [−τ, τ], ψ(±τ) = 0, with
//! density ρ(s) = 2/cosh²s.
//!
//! Eigenvalues are located by shooting from s = −τ and counting the sign
//! changes of the shot solution: a shot at λ has exactly as many interior
//! zeros as there are eigenvalues below λ. [`dense_eigenvalues`] solves the
//! three-point finite-difference discretization as an independent check.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::extremals::critical_constants;
use crate::grid::{simpson, TestFunction, UniformGrid};
use crate::rootfind::{bisect_predicate, find_root_bracketed, Bracket, Tolerances};
use crate::variation::{q_form, q_scale, soliton_potential};

pub const MIN_SHOOT_STEPS: usize = 256;
const LAMBDA_CEILING: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    /// ρ(s) = 2/cosh²s.
    Soliton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StringSpectrum {
    pub tau: f64,
    pub lambdas: Vec<f64>,
    /// Unit weighted norm, positive initial slope.
    pub eigenfunctions: Vec<TestFunction>,
    pub density: Density,
}

/// Fixed-step RK4 integrator with the density pre-tabulated at nodes and midpoints.
struct Shooter {
    tau: f64,
    n: usize,
    ds: f64,
    rho_node: Vec<f64>,
    rho_mid: Vec<f64>,
}

impl Shooter {
    fn new(tau: f64, n: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        if n < MIN_SHOOT_STEPS {
            return Err(Error::Domain(format!("shooting needs at least {MIN_SHOOT_STEPS} steps, got {n}")));
        }
        let ds = 2.0 * tau / n as f64;
        let rho_node = (0..=n).map(|i| soliton_potential(-tau + i as f64 * ds)).collect();
        let rho_mid = (0..n).map(|i| soliton_potential(-tau + (i as f64 + 0.5) * ds)).collect();
        Ok(Shooter { tau, n, ds, rho_node, rho_mid })
    }

    /// Visits (ψ, ψ′) at each node from s = −τ with ψ = 0, ψ′ = 1.
    fn run(&self, lambda: f64, mut visit: impl FnMut(usize, f64, f64)) {
        let (mut p, mut q) = (0.0f64, 1.0f64);
        let h = self.ds;
        visit(0, p, q);
        for i in 0..self.n {
            let (r0, rm, r1) = (self.rho_node[i], self.rho_mid[i], self.rho_node[i + 1]);
            let k1p = q;
            let k1q = -lambda * r0 * p;
            let k2p = q + 0.5 * h * k1q;
            let k2q = -lambda * rm * (p + 0.5 * h * k1p);
            let k3p = q + 0.5 * h * k2q;
            let k3q = -lambda * rm * (p + 0.5 * h * k2p);
            let k4p = q + h * k3q;
            let k4q = -lambda * r1 * (p + h * k3p);
            p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            visit(i + 1, p, q);
        }
    }

    fn shoot(&self, lambda: f64) -> (f64, usize) {
        let mut nodes = 0;
        let mut prev_sign = 0.0;
        let mut end = 0.0;
        self.run(lambda, |i, p, _| {
            if i == 0 {
                return;
            }
            let sign = if p > 0.0 {
                1.0
            } else if p < 0.0 {
                -1.0
            } else {
                0.0
            };
            if sign != 0.0 {
                if prev_sign != 0.0 && sign != prev_sign {
                    nodes += 1;
                }
                prev_sign = sign;
            }
            end = p;
        });
        (end, nodes)
    }

    fn trajectory(&self, lambda: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        self.run(lambda, |i, p, _| out[i] = p);
        out
    }

    fn eigenvalue(&self, k: usize, floor: f64) -> Result<f64> {
        let fail = |reason: String| Error::ConvergenceFailure { k, reason };
        let below = |lambda: f64| self.shoot(lambda).1 < k;

        let mut lo = floor;
        let mut hi = (2.0 * floor).max(1.0);
        while below(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > LAMBDA_CEILING {
                return Err(fail(format!("no bracket below lambda = {LAMBDA_CEILING}")));
            }
        }
        // Narrow until the shot at `hi` has exactly k nodes.
        let (mut lo, mut hi) = bisect_predicate(|l| !below(l), lo, hi, 1e-9 * hi, 200);
        if self.shoot(hi).1 != k || self.shoot(lo).1 != k - 1 {
            (lo, hi) = bisect_predicate(|l| !below(l), lo, hi, 1e-13 * hi, 200);
            if self.shoot(hi).1 != k || self.shoot(lo).1 != k - 1 {
                return Err(fail(format!("could not isolate a single mode in [{lo}, {hi}]")));
            }
        }
        let end = |lambda: f64| self.shoot(lambda).0;
        let bracket = Bracket::new(end, lo, hi).map_err(|e| fail(e.to_string()))?;
        let tol = Tolerances { tol_x: 1e-15 * hi, tol_f: 1e-300, max_iter: 400 };
        find_root_bracketed(end, bracket, tol).map_err(|e| fail(e.to_string()))
    }

    fn eigenfunction(&self, lambda: f64) -> Result<TestFunction> {
        let mut values = self.trajectory(lambda);
        values[self.n] = 0.0;
        let weighted: Vec<f64> = values.iter().zip(&self.rho_node).map(|(v, r)| r * v * v).collect();
        let norm = simpson(&weighted, self.ds).sqrt();
        values.iter_mut().for_each(|v| *v /= norm);
        TestFunction::new(UniformGrid { half_width: self.tau, n: self.n + 1 }, values)
    }
}

/// Shoots with ψ(−τ) = 0, ψ′(−τ) = 1 and returns ψ(τ; λ) together with the
/// number of interior sign changes.
pub fn shoot(tau: f64, lambda: f64, n: usize) -> Result<(f64, usize)> {
    Ok(Shooter::new(tau, n)?.shoot(lambda))
}

/// The `k_max` lowest eigenpairs using `n` RK4 steps.
pub fn eigenvalues(tau: f64, k_max: usize, n: usize) -> Result<StringSpectrum> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let shooter = Shooter::new(tau, n)?;
    let mut lambdas = Vec::with_capacity(k_max);
    let mut eigenfunctions = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let floor = lambdas.last().copied().unwrap_or(0.0);
        let lambda = shooter.eigenvalue(k, floor)?;
        eigenfunctions.push(shooter.eigenfunction(lambda)?);
        lambdas.push(lambda);
    }
    Ok(StringSpectrum { tau, lambdas, eigenfunctions, density: Density::Soliton })
}

/// Lowest `k` eigenvalues of A·ψ = λ·B·ψ, where A is the Dirichlet
/// three-point Laplacian on `intervals` cells and B = diag(ρ).
pub fn dense_eigenvalues(tau: f64, k: usize, intervals: usize) -> Result<Vec<f64>> {
    if !(tau > 0.0) || intervals < 4 || k == 0 || k > intervals - 1 {
        return Err(Error::Domain(format!("invalid dense problem: tau = {tau}, k = {k}, intervals = {intervals}")));
    }
    let m = intervals - 1;
    let ds = 2.0 * tau / intervals as f64;
    let inv_sqrt_rho: Vec<f64> = (1..=m).map(|i| soliton_potential(-tau + i as f64 * ds).sqrt().recip()).collect();
    // B^{-1/2} A B^{-1/2} is symmetric with the same spectrum.
    let mut c = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        c[(i, i)] = 2.0 / (ds * ds) * inv_sqrt_rho[i] * inv_sqrt_rho[i];
        if i + 1 < m {
            let off = -1.0 / (ds * ds) * inv_sqrt_rho[i] * inv_sqrt_rho[i + 1];
            c[(i, i + 1)] = off;
            c[(i + 1, i)] = off;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev.truncate(k);
    Ok(ev)
}

/// Dense eigenvalues on `intervals` and `2·intervals` cells, combined by
/// Richardson extrapolation of the O(Δs²) error.
pub fn dense_oracle(tau: f64, k: usize, intervals: usize) -> Result<Vec<f64>> {
    let coarse = dense_eigenvalues(tau, k, intervals)?;
    let fine = dense_eigenvalues(tau, k, 2 * intervals)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// ∫ψ′² ds / ∫ρψ² ds.
pub fn rayleigh_quotient(psi: &TestFunction) -> Result<f64> {
    let weighted: Vec<f64> = (0..psi.grid.n)
        .map(|i| soliton_potential(psi.grid.x(i)) * psi.values[i] * psi.values[i])
        .collect();
    let den = simpson(&weighted, psi.grid.step());
    if den < 1e-14 {
        return Err(Error::ZeroDenominator);
    }
    Ok(q_scale(psi) / den)
}

/// ∫ρ·ψ_j·ψ_k ds.
pub fn weighted_inner(a: &TestFunction, b: &TestFunction) -> f64 {
    let prod: Vec<f64> = (0..a.grid.n)
        .map(|i| soliton_potential(a.grid.x(i)) * a.values[i] * b.values[i])
        .collect();
    simpson(&prod, a.grid.step())
}

/// Number of sign changes in the interior samples.
pub fn sign_changes(psi: &TestFunction) -> usize {
    let interior = &psi.values[1..psi.grid.n - 1];
    let signs: Vec<f64> = interior.iter().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A direction ψ₀ with ∫(ψ₀′² − ρψ₀²) ds < 0: the ground mode of the string,
/// whose eigenvalue drops below 1 once τ > τ*.
pub fn negative_direction(tau: f64) -> Result<TestFunction> {
    let tau_star = critical_constants().tau_star;
    if !(tau > tau_star + 1e-9) {
        return Err(Error::NotSupercritical { tau, tau_star });
    }
    let mut n = 4096;
    loop {
        let psi = eigenvalues(tau, 1, n)?.eigenfunctions.remove(0);
        if q_form(&psi) < 0.0 {
            return Ok(psi);
        }
        n *= 2;
        if n > 1 << 20 {
            return Err(Error::ConvergenceFailure {
                k: 1,
                reason: format!("ground mode at tau = {tau} is not resolvably below lambda = 1"),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variation::mu;

    #[test]
    fn zero_lambda_shot_is_linear() {
        for tau in [0.3, 1.0, 2.5] {
            let (end, nodes) = shoot(tau, 0.0, 256).unwrap();
            assert!((end - 2.0 * tau).abs() < 1e-12);
            assert_eq!(nodes, 0);
        }
        assert!(shoot(1.0, 1.0, 100).is_err());
        assert!(shoot(0.0, 1.0, 300).is_err());
    }

    #[test]
    fn shot_at_tau_star() {
        let ts = critical_constants().tau_star;
        let (end, nodes) = shoot(ts, 1.0, 4096).unwrap();
        assert!(end.abs() < 1e-10, "{end}");
        assert_eq!(nodes, 0);
        let (end, nodes) = shoot(ts, 0.5, 4096).unwrap();
        assert!(end > 0.1);
        assert_eq!(nodes, 0);
    }

    #[test]
    fn ground_state_at_tau_star_is_mu() {
        let ts = critical_constants().tau_star;
        let modes = eigenvalues(ts, 1, 4096).unwrap();
        assert!((modes.lambdas[0] - 1.0).abs() < 1e-4);
        let psi = &modes.eigenfunctions[0];
        let mu_fn = TestFunction::sample(ts, psi.grid.n, mu).unwrap();
        let c = psi.values[psi.grid.n / 2] / mu_fn.values[psi.grid.n / 2];
        let dev = psi.values.iter().zip(&mu_fn.values).map(|(p, m)| (p - c * m).abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-3, "{dev}");
    }

    #[test]
    fn eigenvalue_ranges() {
        assert!(eigenvalues(2.0, 1, 4096).unwrap().lambdas[0] < 1.0);
        assert!(eigenvalues(0.3, 1, 4096).unwrap().lambdas[0] > 10.0);
        assert!(dense_oracle(0.3, 1, 400).unwrap()[0] > 10.0);
    }

    #[test]
    fn spectrum_structure() {
        let modes = eigenvalues(1.5, 5, 4096).unwrap();
        for w in modes.lambdas.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(modes.lambdas[0] > 0.0);
        for (k, f) in modes.eigenfunctions.iter().enumerate() {
            assert_eq!(sign_changes(f), k);
            assert!((weighted_inner(f, f) - 1.0).abs() < 1e-8);
            assert!(f.values[1] > 0.0);
            for g in &modes.eigenfunctions[..k] {
                assert!(weighted_inner(f, g).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn shooting_matches_dense_oracle() {
        let ts = critical_constants().tau_star;
        for tau in [0.5, ts, 2.0] {
            let shot = eigenvalues(tau, 5, 4096).unwrap().lambdas;
            let dense = dense_oracle(tau, 5, 400).unwrap();
            for (s, d) in shot.iter().zip(&dense) {
                assert!(((s - d) / d).abs() < 1e-4, "tau = {tau}: {s} vs {d}");
            }
        }
    }

    #[test]
    fn ground_eigenvalue_decreases_with_tau() {
        let mut prev = f64::INFINITY;
        for i in 0..=13 {
            let tau = 0.4 + 0.2 * i as f64;
            let l = eigenvalues(tau, 1, 1024).unwrap().lambdas[0];
            assert!(l < prev, "tau = {tau}");
            prev = l;
        }
    }

    #[test]
    fn rk4_convergence_order() {
        let l: Vec<f64> = [256usize, 512, 1024].iter().map(|&n| eigenvalues(3.0, 1, n).unwrap().lambdas[0]).collect();
        let ratio = (l[0] - l[1]) / (l[1] - l[2]);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rayleigh_quotient_cases() {
        let ts = critical_constants().tau_star;
        let modes = eigenvalues(2.0, 1, 4096).unwrap();
        let r = rayleigh_quotient(&modes.eigenfunctions[0]).unwrap();
        assert!(((r - modes.lambdas[0]) / modes.lambdas[0]).abs() < 1e-6);
        assert!(r < 1.0);
        let m = TestFunction::sample(ts, 4097, mu).unwrap();
        assert!((rayleigh_quotient(&m).unwrap() - 1.0).abs() < 1e-4);
        let z = TestFunction::zero(1.0, 64).unwrap();
        assert_eq!(rayleigh_quotient(&z), Err(Error::ZeroDenominator));
    }

    #[test]
    fn negative_direction_cases() {
        let psi = negative_direction(2.0).unwrap();
        assert!(q_form(&psi) < 0.0);
        let tau2 = crate::extremals::upper_branch(0.4).unwrap().tau;
        assert!(q_form(&negative_direction(tau2).unwrap()) < 0.0);
        assert!(matches!(negative_direction(0.5), Err(Error::NotSupercritical { .. })));
    }
}
