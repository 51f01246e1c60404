use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::modal::{gram_weighted_norm_sq, propagate};
use crate::evolution::plan::EvolutionPlan;
use crate::evolution::state::ModalState;

/// Time-integrated weighted regularity mass
/// `Q(T) = int_0^T || <x>^-delta (1 - d_xx)^(1/4) u(t) ||^2 dt`,
/// together with its late-half share, which exhibits the saturation of
/// `Q` as the horizon grows.
#[derive(Debug, Clone, Copy)]
pub struct SmoothingReport {
    /// `Q` over the full horizon.
    pub q: f64,
    /// `Q(T) - Q(T/2)`: what the second half of the horizon added.
    pub late_increment: f64,
    pub delta: f64,
    pub horizon: f64,
}

/// Evaluate the smoothing functional of the evolution started from `u0`.
///
/// The quarter-smoothing operator acts as the multiplier `(1 + xi^2)^(1/4)`
/// on the box frequencies and the spatial weight `<x>^-delta` pointwise on
/// the box nodes; the time integral is a trapezoid rule with about `n_t`
/// nodes (rounded so the half horizon is itself a node). The weight only
/// makes the integral converge for `delta > 1/2`, hence the hard bound.
pub fn smoothing_functional(
    plan: &EvolutionPlan,
    u0: &ModalState,
    delta: f64,
    horizon: f64,
    n_t: usize,
) -> Result<SmoothingReport> {
    if !(delta > 0.5) {
        return Err(Error::DeltaOutOfRange { delta });
    }
    u0.check_shape(plan)?;
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "smoothing horizon must be positive and finite, got {horizon}"
        )));
    }
    if n_t < 3 {
        return Err(Error::InvalidInput(format!(
            "time quadrature needs at least 3 nodes, got {n_t}"
        )));
    }
    let segments = (n_t - 1).next_multiple_of(2);
    let dt = horizon / segments as f64;

    let quarter: Vec<f64> = plan
        .xi()
        .iter()
        .map(|&xi| (1.0 + xi * xi).powf(0.25))
        .collect();
    let weight: Vec<f64> = plan
        .x_nodes()
        .iter()
        .map(|&x| (1.0 + x * x).powf(-delta / 2.0))
        .collect();
    let scale = 1.0 / plan.n_x() as f64;

    let mut integrand = Vec::with_capacity(segments + 1);
    for i in 0..=segments {
        let t = u0.t + dt * i as f64;
        let state = propagate(plan, u0, t)?;
        let rows: Vec<Vec<Complex64>> = state
            .coeffs
            .iter()
            .map(|row| {
                let mut buf = row.clone();
                plan.fft_forward(&mut buf);
                for (v, &q) in buf.iter_mut().zip(&quarter) {
                    *v *= q * scale;
                }
                plan.fft_inverse(&mut buf);
                for (v, &w) in buf.iter_mut().zip(&weight) {
                    *v *= w;
                }
                buf
            })
            .collect();
        integrand.push(gram_weighted_norm_sq(plan, &rows).max(0.0));
    }

    let trapezoid = |upto: usize| -> f64 {
        let inner: f64 = integrand[1..upto].iter().sum();
        dt * (inner + 0.5 * (integrand[0] + integrand[upto]))
    };
    let q = trapezoid(segments);
    let q_half = trapezoid(segments / 2);
    Ok(SmoothingReport {
        q,
        late_increment: q - q_half,
        delta,
        horizon,
    })
}
