//! Catenoid extremals y(x) = C·cosh(x/C) spanning two unit rings at x = ±h.
//!
//! Writing τ = h/C, the boundary condition C·cosh(h/C) = 1 becomes
//! φ(τ) = cosh τ / τ = 1/h. φ is convex with a single minimum at τ*, the
//! root of 1 − τ·tanh τ, so there are two roots for h < h* = 1/φ(τ*), one
//! double root at h = h*, and none beyond.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rootfind::{find_root_bracketed, Bracket, Tolerances};

/// |h − h*| below this is treated as the coincident-root case.
pub const CRITICAL_H_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// τ ≤ τ*: the shallow catenoid.
    Lower,
    /// τ ≥ τ*: the deep catenoid.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConstants {
    pub tau_star: f64,
    pub h_star: f64,
}

/// One catenoid solution of the boundary-value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremal {
    pub h: f64,
    pub tau: f64,
    pub c: f64,
    pub branch: Branch,
}

pub fn phi(tau: f64) -> Result<f64> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(Error::Domain(format!("phi requires tau > 0, got {tau}")));
    }
    Ok(tau.cosh() / tau)
}

/// τ* and h*, computed once.
pub fn critical_constants() -> CriticalConstants {
    static CACHE: OnceLock<CriticalConstants> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let f = |t: f64| 1.0 - t * t.tanh();
        let bracket = Bracket::new(f, 1.0, 1.5).expect("1 - t tanh t changes sign on [1, 1.5]");
        let tau_star = find_root_bracketed(f, bracket, Tolerances::new(4e-16, 1e-16))
            .expect("tau* bisection converges");
        CriticalConstants { tau_star, h_star: tau_star / tau_star.cosh() }
    })
}

fn branch_tolerances(hi: f64) -> Tolerances {
    Tolerances { tol_x: 1e-15 * hi.max(1.0), tol_f: 1e-15, max_iter: 400 }
}

impl Extremal {
    fn from_root(h: f64, tau: f64, branch: Branch) -> Self {
        Extremal { h, tau, c: h / tau, branch }
    }

    /// The coincident extremal at h = h*.
    pub fn critical(branch: Branch) -> Self {
        let cc = critical_constants();
        Self::from_root(cc.h_star, cc.tau_star, branch)
    }

    pub fn is_critical(&self) -> bool {
        (self.h - critical_constants().h_star).abs() <= CRITICAL_H_TOL
    }

    /// y(x) = C·cosh(x/C).
    pub fn profile(&self, x: f64) -> Result<f64> {
        if x.abs() > self.h {
            return Err(Error::Domain(format!("|x| = {} exceeds h = {}", x.abs(), self.h)));
        }
        Ok(self.c * (x / self.c).cosh())
    }

    /// y'(x) = sinh(x/C); no range check so it can be used on grid points
    /// that round slightly past ±h.
    pub fn slope(&self, x: f64) -> f64 {
        (x / self.c).sinh()
    }

    pub fn profile_unchecked(&self, x: f64) -> f64 {
        self.c * (x / self.c).cosh()
    }

    /// Closed-form area 2πh²/τ + πh²·sinh(2τ)/τ².
    pub fn area_closed_form(&self) -> f64 {
        let (h, t) = (self.h, self.tau);
        2.0 * PI * h * h / t + PI * h * h * (2.0 * t).sinh() / (t * t)
    }

    /// Residual of the boundary condition C·cosh(h/C) − 1.
    pub fn boundary_residual(&self) -> f64 {
        self.c * (self.h / self.c).cosh() - 1.0
    }
}

/// Both extremals at half-distance `h`, ordered (lower, upper).
pub fn solve_branches(h: f64) -> Result<(Extremal, Extremal)> {
    if h <= 0.0 || h.is_nan() {
        return Err(Error::Domain(format!("half-distance must be positive, got {h}")));
    }
    let cc = critical_constants();
    if (h - cc.h_star).abs() <= CRITICAL_H_TOL {
        return Ok((Extremal::critical(Branch::Lower), Extremal::critical(Branch::Upper)));
    }
    if h > cc.h_star {
        return Err(Error::NoExtremal { h, h_star: cc.h_star });
    }
    // h·cosh τ − τ shares its roots with φ(τ) − 1/h and stays O(1) as h → 0.
    let g = |t: f64| h * t.cosh() - t;

    // τ₁ > h always, and τ₁ ≈ h for small h.
    let lo = h.min(cc.tau_star);
    let lower_bracket = Bracket::new(g, lo, cc.tau_star)?;
    let tau1 = find_root_bracketed(g, lower_bracket, branch_tolerances(cc.tau_star))?;

    let mut top = 2.0 * cc.tau_star;
    while g(top) <= 0.0 {
        top *= 2.0;
        if !top.is_finite() {
            return Err(Error::Domain(format!("upper branch bracket diverged for h = {h}")));
        }
    }
    let upper_bracket = Bracket::new(g, cc.tau_star, top)?;
    let tau2 = find_root_bracketed(g, upper_bracket, branch_tolerances(top))?;

    Ok((Extremal::from_root(h, tau1, Branch::Lower), Extremal::from_root(h, tau2, Branch::Upper)))
}

pub fn lower_branch(h: f64) -> Result<Extremal> {
    solve_branches(h).map(|(lower, _)| lower)
}

pub fn upper_branch(h: f64) -> Result<Extremal> {
    solve_branches(h).map(|(_, upper)| upper)
}

pub fn profile(e: &Extremal, x: f64) -> Result<f64> {
    e.profile(x)
}

pub fn area_closed_form(e: &Extremal) -> f64 {
    e.area_closed_form()
}

/// Small-h diagnostics (τ₁/h, h·e^τ₂/τ₂); both tend to 1 and 2 respectively.
pub fn small_h_asymptotics(h: f64) -> Result<(f64, f64)> {
    let h_star = critical_constants().h_star;
    if !(h > 0.0 && h < h_star / 10.0) {
        return Err(Error::Domain(format!("asymptotics require 0 < h < h*/10, got {h}")));
    }
    let (lower, upper) = solve_branches(h)?;
    Ok((lower.tau / h, h * upper.tau.exp() / upper.tau))
}

/// dτ₁/dh = cosh τ₁ / (1 − τ₁·tanh τ₁); unbounded as h → h*.
pub fn dtau1_dh(h: f64) -> Result<f64> {
    let t = lower_branch(h)?.tau;
    Ok(t.cosh() / (1.0 - t * t.tanh()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: 60 halvings, no acceleration.
    fn bisect60(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn cosh_series(x: f64) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..40 {
            term *= x * x / ((2 * k - 1) as f64 * (2 * k) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn phi_values() {
        let cc = critical_constants();
        assert!((phi(cc.tau_star).unwrap() - 1.0 / cc.h_star).abs() < 1e-14);
        assert!((phi(cc.tau_star).unwrap() - 1.50888).abs() < 1e-5);
        assert!((phi(1.0).unwrap() - cosh_series(1.0)).abs() < 1e-15);
        assert!((phi(1.0).unwrap() - 1.5430806).abs() < 1e-7);
        assert!(phi(1e-3).unwrap() > 100.0);
        assert!(phi(1e3).unwrap() > 100.0);
        assert!(matches!(phi(0.0), Err(Error::Domain(_))));
        assert!(matches!(phi(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn critical_constants_values() {
        let cc = critical_constants();
        assert!((cc.h_star - 0.6627).abs() < 1e-4);
        assert!((1.0 - cc.tau_star * cc.tau_star.tanh()).abs() <= 1e-12);
        let oracle = bisect60(|t| 1.0 - t * t.tanh(), 1.0, 1.5);
        assert!((cc.tau_star - oracle).abs() < 1e-12);
        assert!((cc.tau_star - 1.19968).abs() < 1e-5);
        assert!((cc.h_star - cc.tau_star / cc.tau_star.cosh()).abs() <= 1e-12);
    }

    #[test]
    fn branches_at_h_0_4_match_oracle() {
        let (l, u) = solve_branches(0.4).unwrap();
        let f = |t: f64| phi(t).unwrap() - 2.5;
        let cc = critical_constants();
        let t1 = bisect60(f, 1e-9, cc.tau_star);
        let t2 = bisect60(f, cc.tau_star, 20.0);
        assert!((l.tau - t1).abs() < 1e-12 && (u.tau - t2).abs() < 1e-12);
        assert!((l.tau - 0.43920).abs() < 1e-5);
        assert!((u.tau - 2.53).abs() < 5e-3);
        assert!(l.tau < cc.tau_star && cc.tau_star < u.tau);
        assert_eq!((l.branch, u.branch), (Branch::Lower, Branch::Upper));
        for e in [l, u] {
            assert!((phi(e.tau).unwrap() - 2.5).abs() < 1e-10);
            assert!(e.boundary_residual().abs() < 1e-10);
        }
    }

    #[test]
    fn critical_and_supercritical_cases() {
        let cc = critical_constants();
        let (l, u) = solve_branches(cc.h_star).unwrap();
        assert_eq!(l.tau, cc.tau_star);
        assert_eq!(u.tau, cc.tau_star);
        assert!(l.is_critical());
        assert!((l.area_closed_form() - u.area_closed_form()).abs() < 1e-14);
        assert!(matches!(solve_branches(0.7), Err(Error::NoExtremal { .. })));
        assert!(matches!(solve_branches(0.0), Err(Error::Domain(_))));
        assert!(matches!(solve_branches(-0.3), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_values() {
        let (l, _) = solve_branches(0.4).unwrap();
        assert!((l.profile(0.4).unwrap() - 1.0).abs() < 1e-12);
        assert!((l.profile(-0.4).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(l.profile(0.0).unwrap(), l.c);
        let c = 0.4 / 0.439_204_252_501_791_6;
        assert!((l.profile(0.2).unwrap() - c * cosh_series(0.2 / c)).abs() < 1e-12);
        assert!(matches!(l.profile(0.41), Err(Error::Domain(_))));
    }

    #[test]
    fn areas_limits_at_tiny_h() {
        // S_h[y1] ≈ 4πh for small h
        let (l, u) = solve_branches(1e-3).unwrap();
        assert!(l.area_closed_form() < 0.013);
        assert!(((l.area_closed_form() - 4.0 * PI * 1e-3) / (4.0 * PI * 1e-3)).abs() < 1e-5);
        assert!((u.area_closed_form() - 2.0 * PI).abs() < 0.1);
        let (l5, u5) = solve_branches(1e-5).unwrap();
        assert!(l5.area_closed_form() < 1e-3);
        assert!((u5.area_closed_form() - 2.0 * PI).abs() < (u.area_closed_form() - 2.0 * PI).abs());
    }

    #[test]
    fn asymptotic_ratios() {
        let (r1, r2) = small_h_asymptotics(1e-3).unwrap();
        assert!((r1 - 1.0).abs() < 1e-3);
        assert!((r2 - 2.0).abs() < 0.05);
        let (s1, s2) = small_h_asymptotics(1e-5).unwrap();
        assert!((s1 - 1.0).abs() < (r1 - 1.0).abs());
        assert!((s2 - 2.0).abs() < (r2 - 2.0).abs());
        assert!(small_h_asymptotics(0.2).is_err());
    }

    #[test]
    fn dtau1_dh_matches_finite_differences_and_blows_up() {
        let h_star = critical_constants().h_star;
        for i in 1..=9 {
            let h = 0.1 * i as f64 * h_star;
            let d = 1e-6;
            let fd = (lower_branch(h + d).unwrap().tau - lower_branch(h - d).unwrap().tau) / (2.0 * d);
            let exact = dtau1_dh(h).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-4, "h = {h}: {fd} vs {exact}");
        }
        assert!(dtau1_dh(h_star - 1e-6).unwrap() > 1e2);
    }

    #[test]
    fn sweep_properties() {
        let h_star = critical_constants().h_star;
        let mut prev: Option<(Extremal, Extremal)> = None;
        for i in 1..200 {
            let h = h_star * i as f64 / 200.0;
            let (l, u) = solve_branches(h).unwrap();
            assert!((phi(l.tau).unwrap() - 1.0 / h).abs() < 1e-10 * (1.0 / h).max(1.0));
            assert!((phi(u.tau).unwrap() - 1.0 / h).abs() < 1e-10 * (1.0 / h).max(1.0));
            assert!(l.area_closed_form() < u.area_closed_form());
            if let Some((pl, pu)) = prev {
                assert!(l.tau > pl.tau);
                assert!(u.tau < pu.tau);
            }
            prev = Some((l, u));
        }
    }

    #[test]
    fn profile_is_even_and_bounded_below_by_c() {
        let (l, u) = solve_branches(0.5).unwrap();
        for e in [l, u] {
            for k in 1..50 {
                let x = 0.5 * k as f64 / 50.0;
                let (a, b) = (e.profile(x).unwrap(), e.profile(-x).unwrap());
                assert!((a - b).abs() < 1e-15);
                assert!(a > e.c);
            }
            assert_eq!(e.profile(0.0).unwrap(), e.c);
        }
    }
}
