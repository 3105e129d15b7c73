use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Below this denominator modulus the removable-singularity limit is used.
const SINGULAR_EPS: f64 = 1e-12;

/// `(e^{2πix} - 1) / (e^{2πix/d} - 1)` at real `x`.
pub fn transcendental_value(x: f64, d: u32) -> Complex64 {
    let df = f64::from(d);
    let num = Complex64::from_polar(1.0, 2.0 * PI * x) - 1.0;
    let den = Complex64::from_polar(1.0, 2.0 * PI * x / df) - 1.0;
    if den.norm() < SINGULAR_EPS {
        // L'Hôpital: d * e^{2πix(1 - 1/d)}.
        Complex64::from_polar(df, 2.0 * PI * x * (1.0 - 1.0 / df))
    } else {
        num / den
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootsReport {
    pub d: u32,
    pub tol: f64,
    /// `(k, |f(k)|)` for `k = 1..d-1`.
    pub at_roots: Vec<(u32, f64)>,
    pub at_zero: f64,
    pub at_d: f64,
    /// Smallest `|f|` over grid points at least 0.25 from every integer.
    pub min_off_integer: f64,
    pub grid_points: usize,
    /// Integers in `[-d, 2d]` outside `1..d-1` where `f` also vanishes.
    pub extra_integer_roots: Vec<i64>,
    pub failures: Vec<String>,
}

impl RootsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "tol": self.tol,
            "at_roots": self.at_roots.iter().map(|(k, v)| json!({ "k": k, "abs": v })).collect::<Vec<_>>(),
            "at_zero": self.at_zero,
            "at_d": self.at_d,
            "min_off_integer": self.min_off_integer,
            "grid_points": self.grid_points,
            "extra_integer_roots": self.extra_integer_roots,
            "failures": self.failures,
            "passed": self.passed(),
        })
    }
}

/// Checks that `f` vanishes at `1..d-1`, equals `d` in modulus at `0` and `d`,
/// and stays away from zero on a grid over `[-d, 2d]` avoiding integers.
pub fn integer_roots_check(d: u32, tol: f64, grid_step: f64) -> Result<RootsReport> {
    if d < 2 {
        return Err(Error::Precondition("d must be at least 2".into()));
    }
    // Written negated so NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(grid_step > 0.0) || !(tol > 0.0) {
        return Err(Error::Precondition("tol and grid step must be positive".into()));
    }
    let df = f64::from(d);
    let mut failures = Vec::new();

    let at_roots: Vec<(u32, f64)> = (1..d).map(|k| (k, transcendental_value(f64::from(k), d).norm())).collect();
    for &(k, v) in &at_roots {
        if v > tol {
            failures.push(format!("|f({k})| = {v:e} exceeds {tol:e}"));
        }
    }
    let at_zero = transcendental_value(0.0, d).norm();
    let at_d = transcendental_value(df, d).norm();
    for (x, v) in [(0.0, at_zero), (df, at_d)] {
        if (v - df).abs() > tol {
            failures.push(format!("|f({x})| = {v} differs from {d}"));
        }
    }

    let mut min_off_integer = f64::INFINITY;
    let mut grid_points = 0;
    let steps = (3.0 * df / grid_step).floor() as usize;
    for s in 0..=steps {
        let x = -df + s as f64 * grid_step;
        if (x - x.round()).abs() < 0.25 {
            continue;
        }
        grid_points += 1;
        let v = transcendental_value(x, d).norm();
        min_off_integer = min_off_integer.min(v);
        if v <= 1e3 * tol {
            failures.push(format!("|f({x})| = {v:e} is near zero off the integers"));
        }
    }

    let extra_integer_roots = (-(d as i64)..=2 * d as i64)
        .filter(|&k| !(1..d as i64).contains(&k))
        .filter(|&k| transcendental_value(k as f64, d).norm() <= tol)
        .collect();

    Ok(RootsReport { d, tol, at_roots, at_zero, at_d, min_off_integer, grid_points, extra_integer_roots, failures })
}
