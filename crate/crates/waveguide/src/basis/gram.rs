use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::dual::DualFamily;
use crate::basis::form::{normalized_form, EigenfunctionForm};
use crate::basis::integrals::{
    bilinear_pair_integral, derivative_inner_product, mode_inner_product,
};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::spectrum::SpectrumTable;

/// Riesz-basis diagnostics of the first `size` modes: the Gram matrix, its
/// eigenvalue range and the resulting frame condition number.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub size: usize,
    /// Row-major `size x size` Hermitian matrix `G[j][k] = <phi_j, phi_k>`.
    pub gram: Vec<Complex64>,
    /// Smallest and largest eigenvalue of the Gram matrix.
    pub extreme_eigs: (f64, f64),
    /// `extreme_eigs.1 / extreme_eigs.0`; equals 1 for an orthonormal family.
    pub riesz_condition: f64,
}

/// Reject a Gram matrix whose smallest eigenvalue is at or below this
/// fraction of the largest: the family has numerically lost its lower
/// frame bound.
const POSITIVITY_FLOOR: f64 = 1e-12;

fn table_forms(table: &SpectrumTable, n: usize) -> Result<Vec<EigenfunctionForm>> {
    table
        .modes()
        .iter()
        .take(n)
        .map(|m| normalized_form(m.lambda, table.robin(), table.geom()))
        .collect()
}

/// Row-major Hermitian matrix of mode inner products. Rows are filled in
/// parallel; the strict upper triangle is computed and mirrored so the
/// result is Hermitian by construction.
pub fn gram_matrix(forms: &[EigenfunctionForm], l: f64) -> Vec<Complex64> {
    let n = forms.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (j..n)
                .map(|k| mode_inner_product(&forms[j], &forms[k], l))
                .collect()
        })
        .collect();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let k = j + off;
            g[j * n + k] = v;
            g[k * n + j] = v.conj();
        }
    }
    g
}

/// Same layout for the derivative products `<phi_j', phi_k'>`, used by the
/// derivative frame-bound diagnostics.
pub fn derivative_gram(forms: &[EigenfunctionForm], l: f64) -> Vec<Complex64> {
    let n = forms.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (j..n)
                .map(|k| derivative_inner_product(&forms[j], &forms[k], l))
                .collect()
        })
        .collect();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let k = j + off;
            g[j * n + k] = v;
            g[k * n + j] = v.conj();
        }
    }
    g
}

/// Assemble the Gram matrix of the first `n` modes and extract its
/// eigenvalue range.
pub fn gram_report(table: &SpectrumTable, n: usize) -> Result<GramReport> {
    if n == 0 || n > table.len() {
        return Err(Error::InvalidInput(format!(
            "requested Gram size {n} outside table of {} modes",
            table.len()
        )));
    }
    let forms = table_forms(table, n)?;
    let l = table.geom().width();
    let gram = gram_matrix(&forms, l);
    let eigs = hermitian_eigenvalues(&gram, n)?;
    let lambda_min = eigs[0];
    let lambda_max = eigs[n - 1];
    if lambda_min <= POSITIVITY_FLOOR * lambda_max.max(1.0) {
        return Err(Error::NotPositive { lambda_min });
    }
    Ok(GramReport {
        size: n,
        gram,
        extreme_eigs: (lambda_min, lambda_max),
        riesz_condition: lambda_max / lambda_min,
    })
}

/// Largest deviation of `<phi_j, psi_k>` from the identity over the family:
/// the working definition of "the duals are duals".
pub fn biorthogonality_residual(family: &DualFamily) -> f64 {
    let l = family.width();
    let n = family.len();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            // <phi_j, psi_k> = (\int phi_j phi_k) / p_k.
            let ip = bilinear_pair_integral(family.form(j), family.form(k), l)
                / family.pairing(k);
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((ip - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}
