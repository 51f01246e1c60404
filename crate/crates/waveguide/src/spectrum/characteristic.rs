//! Characteristic function of the transverse operator.
//!
//! A number `mu = lambda^2` (with `Re lambda >= 0`, `lambda != 0`) is an
//! eigenvalue of the transverse operator exactly when
//!
//! ```text
//! (lambda - a_l)(lambda - a_0) e^{2 i lambda l} = (lambda + a_l)(lambda + a_0)
//! ```
//!
//! Root finding works on the quotient form
//! `g = (lambda - a_l)(lambda - a_0) / ((lambda + a_l)(lambda + a_0)) * e^{2 i lambda l} - 1`,
//! which stays O(1) along the eigenvalue bands; near the poles `-a_l`,
//! `-a_0` the raw polynomial form is used instead and flagged.

use num_complex::Complex64;

use crate::geometry::{Geometry, RobinPair};

/// Which branch of the characteristic evaluation was returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharScale {
    /// Quotient form; the default away from the poles.
    Scaled,
    /// Raw polynomial form, returned inside the pole guard.
    RawNearPole,
}

/// Characteristic value, matching derivative and a scale-independent
/// residual magnitude usable across both branches.
#[derive(Debug, Clone, Copy)]
pub struct CharEval {
    pub value: Complex64,
    pub derivative: Complex64,
    pub scale: CharScale,
    /// `|F| / max(|q|, r_l r_0)` where `F` is the raw form and `q` the pole
    /// polynomial: continuous across the branch switch and equal to
    /// `|value|` on the scaled branch.
    pub residual: f64,
}

/// Radius of the guard disc kept around a pole at `-a`.
pub fn pole_guard_radius(a: f64) -> f64 {
    1e-6 * a.abs().max(1.0)
}

/// Evaluate the characteristic function and its derivative at `lambda`.
pub fn characteristic(lambda: Complex64, robin: RobinPair, geom: Geometry) -> CharEval {
    let a_l = robin.a_l;
    let a_0 = robin.a_0;
    let sum = Complex64::new(robin.sum(), 0.0);
    let two_il = Complex64::new(0.0, 2.0 * geom.width());
    let e = (two_il * lambda).exp();

    let p = (lambda - a_l) * (lambda - a_0);
    let q = (lambda + a_l) * (lambda + a_0);
    let dp = 2.0 * lambda - sum;
    let dq = 2.0 * lambda + sum;

    let r_l = pole_guard_radius(a_l);
    let r_0 = pole_guard_radius(a_0);
    let near_pole = (lambda + a_l).norm() < r_l || (lambda + a_0).norm() < r_0;
    let f = p * e - q;
    if !near_pole {
        let g = (p / q) * e - Complex64::new(1.0, 0.0);
        // g' = e (p' q - p q' + 2 i l p q) / q^2
        let dg = e * (dp * q - p * dq + two_il * p * q) / (q * q);
        CharEval {
            value: g,
            derivative: dg,
            scale: CharScale::Scaled,
            residual: g.norm(),
        }
    } else {
        let df = (dp + two_il * p) * e - dq;
        // Denominator floored at the guard-radius product so the residual
        // agrees with |g| at the zone boundary and stays finite inside it.
        CharEval {
            value: f,
            derivative: df,
            scale: CharScale::RawNearPole,
            residual: f.norm() / q.norm().max(r_l * r_0),
        }
    }
}

/// Derivative of the active characteristic branch at `lambda`.
pub fn characteristic_derivative(
    lambda: Complex64,
    robin: RobinPair,
    geom: Geometry,
) -> Complex64 {
    characteristic(lambda, robin, geom).derivative
}

/// Large-index seed `n nu - i (a_l + a_0) / (n pi)` for branch `n >= 1`.
///
/// The error of this seed is `O(n^-2)`, so Newton converges from it without
/// continuation once `n` is moderately large.
pub fn asymptotic_seed(n: usize, robin: RobinPair, geom: Geometry) -> Complex64 {
    assert!(n >= 1, "asymptotic seed is defined for branch n >= 1");
    let nf = n as f64;
    Complex64::new(
        nf * geom.nu(),
        -robin.sum() / (nf * std::f64::consts::PI),
    )
}
