//! Bracketed scalar root finding.
//!
//! A secant step is tried first on every iteration; it is rejected in
//! favour of bisection whenever it leaves the current bracket or the
//! previous secant step failed to halve the bracket. The bracket therefore
//! shrinks at least geometrically and the iteration always terminates.

use crate::error::{Error, Result};

/// Interval known to contain a root of some function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and checks the sign-change invariant.
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        let b = Bracket { lo, hi, f_lo: f(lo), f_hi: f(hi) };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let ordered = self.lo < self.hi;
        let finite = self.f_lo.is_finite() && self.f_hi.is_finite();
        let exact = self.f_lo == 0.0 || self.f_hi == 0.0;
        if ordered && finite && (exact || self.f_lo.signum() != self.f_hi.signum()) {
            Ok(())
        } else {
            Err(Error::NoSignChange {
                lo: self.lo,
                hi: self.hi,
                f_lo: self.f_lo,
                f_hi: self.f_hi,
            })
        }
    }
}

/// Stopping rule for [`find_root_bracketed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tol_x: f64,
    pub tol_f: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_x: 1e-12, tol_f: 1e-12, max_iter: 200 }
    }
}

impl Tolerances {
    pub fn new(tol_x: f64, tol_f: f64) -> Self {
        Tolerances { tol_x, tol_f, ..Default::default() }
    }
}

/// Returns `x` in `[bracket.lo, bracket.hi]` with `|f(x)| <= tol_f`, or the
/// better endpoint of a sub-bracket no wider than `tol_x`.
pub fn find_root_bracketed<F>(f: F, bracket: Bracket, tol: Tolerances) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    bracket.validate()?;
    if !(tol.tol_x > 0.0 && tol.tol_f > 0.0) {
        return Err(Error::Domain(format!(
            "tolerances must be positive (tol_x = {}, tol_f = {})",
            tol.tol_x, tol.tol_f
        )));
    }
    let Bracket { lo: mut a, hi: mut b, f_lo: mut fa, f_hi: mut fb } = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.abs() <= tol.tol_f {
        return Ok(a);
    }
    if fb.abs() <= tol.tol_f {
        return Ok(b);
    }

    let (mut x_prev, mut f_prev, mut x_cur, mut f_cur) = (a, fa, b, fb);
    let mut force_bisect = false;

    for _ in 0..tol.max_iter {
        let width = b - a;
        if width <= tol.tol_x {
            return Ok(if fa.abs() <= fb.abs() { a } else { b });
        }

        let mid = a + 0.5 * width;
        let secant = if f_cur != f_prev {
            x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        } else {
            f64::NAN
        };
        let used_secant = !force_bisect && secant > a && secant < b;
        let x = if used_secant { secant } else { mid };

        let fx = f(x);
        if fx.abs() <= tol.tol_f {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = x;
        f_cur = fx;
        force_bisect = used_secant && (b - a) > 0.5 * width;
    }
    Err(Error::MaxIterations(tol.max_iter))
}

/// Plain bisection helper for monotone predicates: returns the boundary
/// between `pred == false` (at `lo`) and `pred == true` (at `hi`) to within `tol`.
pub fn bisect_predicate<P>(pred: P, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    P: Fn(f64) -> bool,
{
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}
