use num_complex::Complex64;

use crate::basis::form::EigenfunctionForm;

/// `phi1(z) = (e^z - 1) / z`, switching to the Taylor series near the
/// removable singularity so small exponents lose no digits to cancellation.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // Truncation error ~ |z|^4 / 120 < 1e-18, below f64 resolution.
        Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - Complex64::new(1.0, 0.0)) / z
    }
}

/// `\int_0^l e^{i alpha y} \overline{e^{i beta y}} dy`, the L2 pairing of two
/// complex exponentials, written as `l phi1(i (alpha - conj(beta)) l)` so the
/// nearly-orthogonal and nearly-parallel regimes are both stable.
pub fn exp_pair_integral(alpha: Complex64, beta: Complex64, l: f64) -> Complex64 {
    let z = Complex64::i() * (alpha - beta.conj()) * l;
    l * phi1(z)
}

/// `\int_0^l e^{i alpha y} dy` (no conjugation): the bilinear counterpart.
fn single_exp_integral(alpha: Complex64, l: f64) -> Complex64 {
    l * phi1(Complex64::i() * alpha * l)
}

/// Sesquilinear inner product `<phi_j, phi_k>` of two eigenfunction forms,
/// expanded into four exponential pair integrals.
pub fn mode_inner_product(fj: &EigenfunctionForm, fk: &EigenfunctionForm, l: f64) -> Complex64 {
    let (lj, lk) = (fj.lambda, fk.lambda);
    let (rj, rk) = (fj.coeff_ratio, fk.coeff_ratio);
    let sum = exp_pair_integral(lj, lk, l)
        + rk.conj() * exp_pair_integral(lj, -lk, l)
        + rj * exp_pair_integral(-lj, lk, l)
        + rj * rk.conj() * exp_pair_integral(-lj, -lk, l);
    fj.norm_coeff * fk.norm_coeff * sum
}

/// Inner product of the derivatives, `<phi_j', phi_k'>`; the sign pattern
/// flips on the reflected terms because differentiation brings down
/// `+i lambda` and `-i lambda` respectively.
pub fn derivative_inner_product(
    fj: &EigenfunctionForm,
    fk: &EigenfunctionForm,
    l: f64,
) -> Complex64 {
    let (lj, lk) = (fj.lambda, fk.lambda);
    let (rj, rk) = (fj.coeff_ratio, fk.coeff_ratio);
    let sum = exp_pair_integral(lj, lk, l) - rk.conj() * exp_pair_integral(lj, -lk, l)
        - rj * exp_pair_integral(-lj, lk, l)
        + rj * rk.conj() * exp_pair_integral(-lj, -lk, l);
    fj.norm_coeff * fk.norm_coeff * lj * lk.conj() * sum
}

/// Bilinear (unconjugated) product `\int_0^l phi_j phi_k dy`; with `j = k`
/// this is the pairing that measures the angle between an eigenfunction and
/// its own dual.
pub fn bilinear_pair_integral(fj: &EigenfunctionForm, fk: &EigenfunctionForm, l: f64) -> Complex64 {
    let (lj, lk) = (fj.lambda, fk.lambda);
    let (rj, rk) = (fj.coeff_ratio, fk.coeff_ratio);
    let sum = single_exp_integral(lj + lk, l)
        + rk * single_exp_integral(lj - lk, l)
        + rj * single_exp_integral(lk - lj, l)
        + rj * rk * single_exp_integral(-lj - lk, l);
    fj.norm_coeff * fk.norm_coeff * sum
}

/// `p = \int_0^l phi^2 dy` for a single mode.
pub fn pairing_integral(form: &EigenfunctionForm, l: f64) -> Complex64 {
    bilinear_pair_integral(form, form, l)
}
