//! Small dense Hermitian eigenvalue solver.
//!
//! Gram matrices in this crate stay below a few hundred rows, where cyclic
//! Jacobi sweeps are simple, deterministic and accurate to machine
//! precision; there is no need for a factorisation library.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;
const OFF_TOLERANCE: f64 = 1e-14;

/// Eigenvalues of a Hermitian matrix (row-major, `n x n`), ascending.
///
/// The input is only read; a working copy is rotated until the
/// off-diagonal Frobenius mass falls below `1e-14` of the total.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::InvalidInput(format!(
            "matrix buffer has {} entries, expected {}",
            a.len(),
            n * n
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = a.to_vec();
    let fro: f64 = m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }

    for _ in 0..MAX_SWEEPS {
        if off_diag_norm(&m, n) <= OFF_TOLERANCE * fro {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, n, p, q);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

fn off_diag_norm(m: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation annihilating the (p, q) entry.
fn rotate(m: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let alpha = m[p * n + p].re;
    let beta = m[q * n + q].re;
    let tau = (beta - alpha) / (2.0 * r);
    // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0 keeps rotations mild.
    let t = if tau == 0.0 {
        1.0
    } else {
        -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns: A <- A U with U = [[c, -s e^{i phi}], [s e^{-i phi}, c]].
    for i in 0..n {
        let aip = m[i * n + p];
        let aiq = m[i * n + q];
        m[i * n + p] = c * aip + s * phase.conj() * aiq;
        m[i * n + q] = -s * phase * aip + c * aiq;
    }
    // Rows: A <- U^H A.
    for j in 0..n {
        let apj = m[p * n + j];
        let aqj = m[q * n + j];
        m[p * n + j] = c * apj + s * phase * aqj;
        m[q * n + j] = -s * phase.conj() * apj + c * aqj;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_passes_through() {
        let a = vec![
            c(3.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-1.0, 0.0),
        ];
        let e = hermitian_eigenvalues(&a, 2).unwrap();
        assert_eq!(e, vec![-1.0, 3.0]);
    }

    #[test]
    fn complex_two_by_two_has_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let a = vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        let e = hermitian_eigenvalues(&a, 2).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14);
        assert!((e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_det_are_preserved() {
        // Hermitian 4x4 with pseudo-arbitrary entries.
        let n = 4;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    a[i * n + j] = c(1.0 + i as f64, 0.0);
                } else if i < j {
                    let v = c(
                        ((i * 3 + j) as f64 * 0.37).sin(),
                        ((i + 7 * j) as f64 * 0.23).cos() * 0.5,
                    );
                    a[i * n + j] = v;
                    a[j * n + i] = v.conj();
                }
            }
        }
        let e = hermitian_eigenvalues(&a, n).unwrap();
        let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        let esum: f64 = e.iter().sum();
        assert!((trace - esum).abs() < 1e-12);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }
}
