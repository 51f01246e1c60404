use num_complex::Complex64;

use crate::basis::form::{normalized_form, EigenfunctionForm};
use crate::basis::integrals::pairing_integral;
use crate::error::{Error, Result};
use crate::spectrum::SpectrumTable;

/// Reject a dual family whose pairing is smaller than this: the mode is then
/// numerically indistinguishable from a degenerate (exceptional) one and the
/// dual would amplify roundoff by more than ~1e8.
const PAIRING_FLOOR: f64 = 1e-8;

/// A finite eigenfunction family together with the duals that make the pair
/// biorthogonal: `psi_n = conj(phi_n) / conj(p_n)` with `p_n = \int phi_n^2`.
#[derive(Debug, Clone)]
pub struct DualFamily {
    l: f64,
    forms: Vec<EigenfunctionForm>,
    pairings: Vec<Complex64>,
}

impl DualFamily {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn width(&self) -> f64 {
        self.l
    }

    pub fn form(&self, n: usize) -> &EigenfunctionForm {
        &self.forms[n]
    }

    pub fn pairing(&self, n: usize) -> Complex64 {
        self.pairings[n]
    }

    /// Forward eigenfunction `phi_n(y)`.
    pub fn eval_mode(&self, n: usize, y: f64) -> Complex64 {
        self.forms[n].eval(y)
    }

    /// Dual eigenfunction `psi_n(y) = conj(phi_n(y)) / conj(p_n)`, so that
    /// `<phi_j, psi_k> = delta_jk`.
    pub fn eval_dual(&self, n: usize, y: f64) -> Complex64 {
        self.forms[n].eval(y).conj() / self.pairings[n].conj()
    }
}

/// Build the biorthogonal dual family for every mode of a spectrum table.
pub fn dual_family(table: &SpectrumTable) -> Result<DualFamily> {
    let geom = table.geom();
    let robin = table.robin();
    let l = geom.width();
    let mut forms = Vec::with_capacity(table.len());
    let mut pairings = Vec::with_capacity(table.len());
    for mode in table.modes() {
        let form = normalized_form(mode.lambda, robin, geom)?;
        let p = pairing_integral(&form, l);
        if p.norm() < PAIRING_FLOOR {
            return Err(Error::DegeneratePairing {
                index: mode.index,
                magnitude: p.norm(),
                floor: PAIRING_FLOOR,
            });
        }
        forms.push(form);
        pairings.push(p);
    }
    Ok(DualFamily { l, forms, pairings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::integrals::mode_inner_product;
    use crate::geometry::{Geometry, RobinPair};
    use crate::quadrature::YGrid;
    use crate::spectrum::{solve_spectrum, SolverOptions};

    fn family(a_l: f64, a_0: f64, n_max: usize) -> DualFamily {
        let geom = Geometry::new(std::f64::consts::PI).unwrap();
        let table = solve_spectrum(
            n_max,
            RobinPair::new(a_l, a_0),
            geom,
            &SolverOptions::default(),
        )
        .unwrap();
        dual_family(&table).unwrap()
    }

    #[test]
    fn self_adjoint_duals_coincide_with_modes() {
        // Neumann eigenfunctions are real: the dual family is the family
        // itself and every pairing is exactly 1.
        let fam = family(0.0, 0.0, 4);
        for n in 0..fam.len() {
            assert!((fam.pairing(n) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for &y in &[0.0, 0.4, 2.2] {
                assert!((fam.eval_dual(n, y) - fam.eval_mode(n, y)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn duals_are_biorthogonal_by_quadrature() {
        let fam = family(1.0, 1.0, 6);
        let grid = YGrid::gauss_legendre(std::f64::consts::PI, 80).unwrap();
        for j in 0..fam.len() {
            for k in 0..fam.len() {
                let prod: Vec<Complex64> = grid
                    .nodes()
                    .iter()
                    .map(|&y| fam.eval_mode(j, y) * fam.eval_dual(k, y).conj())
                    .collect();
                let ip = grid.integrate(&prod).unwrap();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (ip - Complex64::new(expect, 0.0)).norm() < 1e-10,
                    "<phi_{j}, psi_{k}> = {ip}"
                );
            }
        }
    }

    #[test]
    fn mode_inner_products_match_quadrature() {
        let fam = family(2.0, 0.5, 5);
        let l = std::f64::consts::PI;
        let grid = YGrid::gauss_legendre(l, 80).unwrap();
        for j in 0..fam.len() {
            for k in j..fam.len() {
                let prod: Vec<Complex64> = grid
                    .nodes()
                    .iter()
                    .map(|&y| fam.eval_mode(j, y) * fam.eval_mode(k, y).conj())
                    .collect();
                let by_grid = grid.integrate(&prod).unwrap();
                let closed = mode_inner_product(fam.form(j), fam.form(k), l);
                assert!(
                    (by_grid - closed).norm() < 1e-11,
                    "({j},{k}): {by_grid} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn near_exceptional_pairing_is_rejected() {
        // A balanced pair tuned within 5e-9 of the first branch crossing:
        // the two lowest eigenvalues stay numerically distinct, but the
        // pairings of the nearly-merged modes collapse below the floor.
        let geom = Geometry::new(std::f64::consts::PI).unwrap();
        let a = 1.0 - 5e-9;
        let table = solve_spectrum(
            1,
            RobinPair::new(a, -a),
            geom,
            &SolverOptions::default(),
        )
        .unwrap();
        let r = dual_family(&table);
        assert!(matches!(r, Err(Error::DegeneratePairing { .. })), "{r:?}");
    }

    #[test]
    fn pairings_approach_one_up_the_table() {
        // The duals converge to the modes themselves as n grows; the
        // pairing defect should decay roughly like 1/n.
        let fam = family(1.0, 1.0, 16);
        for n in 1..=16 {
            let defect = (fam.pairing(n) - Complex64::new(1.0, 0.0)).norm();
            assert!(defect < 5.0 / n as f64, "n = {n}: defect {defect}");
        }
        let early = (fam.pairing(2) - Complex64::new(1.0, 0.0)).norm();
        let late = (fam.pairing(16) - Complex64::new(1.0, 0.0)).norm();
        assert!(late < early);
    }
}
