//! Archimedean escape rate (Green's function) of z^d + c and canonical local
//! heights at the archimedean place.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynpoly::FamilyDegree;

/// Tail terms below this size end the series.
const TAIL_CUTOFF: f64 = 1e-15;

/// Escape rate of one orbit, in natural-log units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    pub escaped: bool,
    /// Iterations applied before the orbit left the escape disk (or the
    /// budget, if it never did).
    pub iterations: usize,
    pub error_bound: f64,
}

impl GreenValue {
    fn bounded(iterations: usize) -> Self {
        GreenValue {
            value: 0.0,
            escaped: false,
            iterations,
            error_bound: 0.0,
        }
    }
}

/// Outcome of the multibrot membership test. Boundedness for a finite
/// budget is evidence, not proof, so there is no "interior" verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MembershipVerdict {
    Exterior(GreenValue),
    BoundedAtBudget { iterations: usize },
}

impl MembershipVerdict {
    pub fn is_exterior(&self) -> bool {
        matches!(self, MembershipVerdict::Exterior(_))
    }
}

/// max(2^{1/(d-1)}, |c|) + 1: once an orbit leaves this disk it escapes
/// monotonically.
pub fn default_escape_radius(d: FamilyDegree, c: Complex64) -> f64 {
    d.critical_radius().max(c.norm()) + 1.0
}

/// ln|1 + u|, accurate for small |u|.
fn ln_abs_one_plus(u: Complex64) -> f64 {
    // |1+u|^2 = 1 + 2 Re u + |u|^2
    0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p()
}

/// Canonical local height of `x` under z^d + c at the archimedean place,
/// lim d^{-n} ln max(1, |f^n(x)|).
///
/// After the orbit leaves the escape disk at step n the limit is completed
/// with the series Σ_{k>=n} d^{-(k+1)} ln|1 + c / z_k^d|, summed until a term
/// drops below 1e-15; `error_bound` is twice the first omitted term.
pub fn local_height_arch(
    d: FamilyDegree,
    c: Complex64,
    x: Complex64,
    max_iter: usize,
    escape_radius: f64,
) -> GreenValue {
    let deg = d.get();
    let mut z = x;
    let mut n = 0;
    loop {
        if z.norm() > escape_radius {
            break;
        }
        if n == max_iter {
            return GreenValue::bounded(n);
        }
        z = z.powu(deg) + c;
        n += 1;
    }

    let df = deg as f64;
    let mut weight = df.powi(-(n as i32));
    let mut ln_z = z.norm().ln();
    let mut value = weight * ln_z;
    let ln_c = c.norm().ln();
    let error_bound;
    loop {
        weight /= df;
        // u = c / z^d; computed in logs once z^d would overflow
        let ln_u = ln_c - df * ln_z;
        let term_bound = 2.0 * weight * ln_u.exp();
        if ln_u < -700.0 || term_bound < TAIL_CUTOFF * 1e-3 {
            error_bound = term_bound;
            break;
        }
        let u = c / z.powu(deg);
        let term = weight * ln_abs_one_plus(u);
        value += term;
        z = z.powu(deg) + c;
        ln_z = z.norm().ln();
        if term.abs() < TAIL_CUTOFF {
            let next_u = (ln_c - df * ln_z).exp();
            error_bound = 2.0 * (weight / df) * 2.0 * next_u;
            break;
        }
    }
    GreenValue {
        value,
        escaped: true,
        iterations: n,
        error_bound,
    }
}

/// G_d(c): the local height of the critical value c itself.
pub fn green_arch(d: FamilyDegree, c: Complex64, max_iter: usize, escape_radius: f64) -> GreenValue {
    local_height_arch(d, c, c, max_iter, escape_radius)
}

/// Escape test of the critical orbit within `budget` iterations.
pub fn membership(d: FamilyDegree, c: Complex64, budget: usize) -> MembershipVerdict {
    let g = green_arch(d, c, budget, default_escape_radius(d, c));
    if g.escaped {
        MembershipVerdict::Exterior(g)
    } else {
        MembershipVerdict::BoundedAtBudget {
            iterations: g.iterations,
        }
    }
}
