use num_complex::Complex64;

use crate::basis::dual::DualFamily;
use crate::error::{Error, Result};
use crate::quadrature::YGrid;

/// Largest tolerated disagreement between the primary quadrature and its
/// built-in coarser companion when projecting onto the duals. Beyond it the
/// sampled data is oscillating faster than the grid can integrate.
const SELF_ESTIMATE_LIMIT: f64 = 1e-6;

/// Project grid samples of a transverse profile onto the dual family:
/// `c_n = <samples, psi_n>`. The sample vector must cover all of
/// `grid.nodes()` (primary and companion); the companion resolution is used
/// to estimate the quadrature error of every coefficient.
pub fn decompose(
    samples: &[Complex64],
    grid: &YGrid,
    family: &DualFamily,
) -> Result<Vec<Complex64>> {
    if (grid.interval_width() - family.width()).abs()
        > 1e-12 * family.width().max(1.0)
    {
        return Err(Error::InvalidInput(format!(
            "grid covers [0, {}] but the family lives on [0, {}]",
            grid.interval_width(),
            family.width()
        )));
    }
    if samples.len() != grid.nodes().len() {
        return Err(Error::InvalidInput(format!(
            "sample vector has {} entries, grid expects {}",
            samples.len(),
            grid.nodes().len()
        )));
    }
    let mut coeffs = Vec::with_capacity(family.len());
    let mut worst = 0.0f64;
    for n in 0..family.len() {
        // <f, psi_n> = \int f conj(psi_n) = \int f phi_n / p_n.
        let p = family.pairing(n);
        let integrand: Vec<Complex64> = grid
            .nodes()
            .iter()
            .zip(samples)
            .map(|(&y, &v)| v * family.eval_mode(n, y) / p)
            .collect();
        let fine = grid.integrate(&integrand)?;
        let coarse = grid.integrate_coarse(&integrand)?;
        worst = worst.max((fine - coarse).norm());
        coeffs.push(fine);
    }
    if worst > SELF_ESTIMATE_LIMIT {
        return Err(Error::GridTooCoarse {
            estimate: worst,
            limit: SELF_ESTIMATE_LIMIT,
        });
    }
    Ok(coeffs)
}

/// Evaluate `sum_n c_n phi_n` at the requested points. Fewer coefficients
/// than family members is fine (a truncated sum); more is an error.
pub fn reconstruct(
    coeffs: &[Complex64],
    family: &DualFamily,
    points: &[f64],
) -> Result<Vec<Complex64>> {
    if coeffs.len() > family.len() {
        return Err(Error::InvalidInput(format!(
            "{} coefficients but only {} modes",
            coeffs.len(),
            family.len()
        )));
    }
    Ok(points
        .iter()
        .map(|&y| {
            coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c * family.eval_mode(n, y))
                .sum()
        })
        .collect())
}
