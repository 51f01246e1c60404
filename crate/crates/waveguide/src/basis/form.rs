use num_complex::Complex64;

use crate::basis::integrals::exp_pair_integral;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::spectrum::pole_guard_radius;

/// Closed two-exponential form of a transverse eigenfunction,
/// `phi(y) = norm_coeff (e^{i lambda y} + coeff_ratio e^{-i lambda y})`.
///
/// The ratio comes from the `y = 0` boundary condition; the `y = l`
/// condition is then implied by the characteristic equation and is only
/// ever used as a residual check.
#[derive(Debug, Clone, Copy)]
pub struct EigenfunctionForm {
    pub lambda: Complex64,
    /// `(lambda + a_0) / (lambda - a_0)`; equal to 1 on the constant branch.
    pub coeff_ratio: Complex64,
    /// Positive constant giving unit L2 norm on `(0, l)`.
    pub norm_coeff: f64,
}

impl EigenfunctionForm {
    pub fn eval(&self, y: f64) -> Complex64 {
        let e_plus = (Complex64::i() * self.lambda * y).exp();
        let e_minus = (-Complex64::i() * self.lambda * y).exp();
        self.norm_coeff * (e_plus + self.coeff_ratio * e_minus)
    }

    pub fn eval_deriv(&self, y: f64) -> Complex64 {
        let e_plus = (Complex64::i() * self.lambda * y).exp();
        let e_minus = (-Complex64::i() * self.lambda * y).exp();
        self.norm_coeff * Complex64::i() * self.lambda * (e_plus - self.coeff_ratio * e_minus)
    }

    /// Absolute residuals of the two boundary conditions,
    /// `(|u'(0) + i a_0 u(0)|, |u'(l) - i a_l u(l)|)`.
    pub fn boundary_residuals(&self, robin: RobinPair, geom: Geometry) -> (f64, f64) {
        let l = geom.width();
        let r0 = (self.eval_deriv(0.0) + Complex64::i() * robin.a_0 * self.eval(0.0)).norm();
        let rl = (self.eval_deriv(l) - Complex64::i() * robin.a_l * self.eval(l)).norm();
        (r0, rl)
    }
}

/// Build the unit-norm eigenfunction form for a frequency root `lambda`.
pub fn normalized_form(
    lambda: Complex64,
    robin: RobinPair,
    geom: Geometry,
) -> Result<EigenfunctionForm> {
    let ratio = if robin.is_zero() && lambda.norm() < 1e-12 {
        // Constant branch: the ratio tends to 1 as lambda -> 0.
        Complex64::new(1.0, 0.0)
    } else {
        if (lambda - robin.a_0).norm() < pole_guard_radius(robin.a_0) {
            return Err(Error::RatioSingularity {
                lambda,
                a_0: robin.a_0,
            });
        }
        (lambda + robin.a_0) / (lambda - robin.a_0)
    };

    let l = geom.width();
    let norm_sq = unnormalized_norm_sq(lambda, ratio, l);
    if !(norm_sq.is_finite() && norm_sq > 0.0) {
        return Err(Error::InvalidInput(format!(
            "eigenfunction at lambda = {lambda} has non-positive norm {norm_sq}"
        )));
    }
    Ok(EigenfunctionForm {
        lambda,
        coeff_ratio: ratio,
        norm_coeff: 1.0 / norm_sq.sqrt(),
    })
}

/// Evaluate the unit-norm eigenfunction for `lambda` at a single point.
/// For repeated evaluation build the form once with [`normalized_form`].
pub fn eigenfunction_eval(
    lambda: Complex64,
    robin: RobinPair,
    geom: Geometry,
    y: f64,
) -> Result<Complex64> {
    Ok(normalized_form(lambda, robin, geom)?.eval(y))
}

/// `\int_0^l |e^{i lambda y} + R e^{-i lambda y}|^2 dy` from the four
/// closed-form cross terms.
fn unnormalized_norm_sq(lambda: Complex64, ratio: Complex64, l: f64) -> f64 {
    let ip = exp_pair_integral(lambda, lambda, l)
        + ratio.conj() * exp_pair_integral(lambda, -lambda, l)
        + ratio * exp_pair_integral(-lambda, lambda, l)
        + ratio.norm_sqr() * exp_pair_integral(-lambda, -lambda, l);
    ip.re
}
