use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::basis::{dual_family, gram_report, DualFamily, GramReport};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::quadrature::YGrid;
use crate::spectrum::SpectrumTable;

/// Everything the propagator needs, assembled once: the truncated mode
/// table, its dual family and Gram matrix, the periodic longitudinal box
/// `[-L, L)` with its FFT plans and frequency layout, and the transverse
/// quadrature grid with the modes pre-sampled on it.
///
/// The box is a stand-in for the real line; data that reaches the box edge
/// wraps around, so callers should size `L` to the fastest group velocity
/// they intend to resolve times the horizon (see `edge_mass_fraction`).
#[derive(Clone)]
pub struct EvolutionPlan {
    table: SpectrumTable,
    duals: DualFamily,
    gram: GramReport,
    y_grid: YGrid,
    /// Mode values on the transverse grid, `mode_samples[n][iy]`.
    mode_samples: Vec<Vec<Complex64>>,
    x_box: f64,
    n_x: usize,
    x_nodes: Vec<f64>,
    /// Discrete frequencies `pi * k~ / L` in FFT bin order, where `k~` is
    /// the signed alias of the bin index.
    xi: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl EvolutionPlan {
    /// Build a plan over the first `n_modes` branches of `table`.
    ///
    /// `x_box` is the half-width `L` of the periodic box, `n_x` its grid
    /// size (a power of two, at least 16), and `y_grid` the transverse
    /// quadrature rule, which must cover the same interval as the table.
    pub fn new(
        table: &SpectrumTable,
        n_modes: usize,
        x_box: f64,
        n_x: usize,
        y_grid: YGrid,
    ) -> Result<Self> {
        if !x_box.is_finite() || x_box <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "box half-width must be positive and finite, got {x_box}"
            )));
        }
        if n_x < 16 || !n_x.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "longitudinal grid size must be a power of two >= 16, got {n_x}"
            )));
        }
        let l = table.geom().width();
        if (y_grid.interval_width() - l).abs() > 1e-12 * l.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "transverse grid covers [0, {}] but the table lives on [0, {l}]",
                y_grid.interval_width()
            )));
        }
        let table = table.truncated(n_modes)?;
        let duals = dual_family(&table)?;
        let gram = gram_report(&table, n_modes)?;
        let mode_samples = (0..n_modes)
            .map(|n| y_grid.nodes().iter().map(|&y| duals.eval_mode(n, y)).collect())
            .collect();

        let dx = 2.0 * x_box / n_x as f64;
        let x_nodes = (0..n_x).map(|j| -x_box + j as f64 * dx).collect();
        let xi = (0..n_x)
            .map(|k| {
                let alias = if k < n_x / 2 { k as i64 } else { k as i64 - n_x as i64 };
                std::f64::consts::PI * alias as f64 / x_box
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n_x);
        let fft_inv = planner.plan_fft_inverse(n_x);

        Ok(EvolutionPlan {
            table,
            duals,
            gram,
            y_grid,
            mode_samples,
            x_box,
            n_x,
            x_nodes,
            xi,
            fft_fwd,
            fft_inv,
        })
    }

    pub fn geom(&self) -> Geometry {
        self.table.geom()
    }

    pub fn robin(&self) -> RobinPair {
        self.table.robin()
    }

    pub fn table(&self) -> &SpectrumTable {
        &self.table
    }

    pub fn duals(&self) -> &DualFamily {
        &self.duals
    }

    pub fn gram(&self) -> &GramReport {
        &self.gram
    }

    pub fn y_grid(&self) -> &YGrid {
        &self.y_grid
    }

    pub fn n_modes(&self) -> usize {
        self.table.len()
    }

    /// Half-width `L` of the periodic box `[-L, L)`.
    pub fn x_box(&self) -> f64 {
        self.x_box
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    /// Longitudinal grid spacing `2L / n_x`.
    pub fn x_step(&self) -> f64 {
        2.0 * self.x_box / self.n_x as f64
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Eigenvalue of branch `n`.
    pub fn mu(&self, n: usize) -> Complex64 {
        self.table.mode(n).mu
    }

    /// Mode values on the transverse grid, one row per branch.
    pub(crate) fn mode_samples(&self) -> &[Vec<Complex64>] {
        &self.mode_samples
    }

    /// Forward DFT of one longitudinal row, in place (unnormalised).
    pub(crate) fn fft_forward(&self, row: &mut [Complex64]) {
        self.fft_fwd.process(row);
    }

    /// Inverse DFT of one longitudinal row, in place. The caller applies
    /// the `1/n_x` normalisation, usually folded into another factor.
    pub(crate) fn fft_inverse(&self, row: &mut [Complex64]) {
        self.fft_inv.process(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Geometry, RobinPair};
    use crate::spectrum::{solve_spectrum, SolverOptions};

    fn table() -> SpectrumTable {
        let geom = Geometry::new(std::f64::consts::PI).unwrap();
        let robin = RobinPair::new(1.0, 1.0);
        solve_spectrum(7, robin, geom, &SolverOptions::default()).unwrap()
    }

    fn grid() -> YGrid {
        YGrid::gauss_legendre(std::f64::consts::PI, 48).unwrap()
    }

    #[test]
    fn rejects_bad_box_parameters() {
        let t = table();
        assert!(EvolutionPlan::new(&t, 4, 0.0, 64, grid()).is_err());
        assert!(EvolutionPlan::new(&t, 4, 20.0, 48, grid()).is_err());
        assert!(EvolutionPlan::new(&t, 4, 20.0, 8, grid()).is_err());
        assert!(EvolutionPlan::new(&t, 0, 20.0, 64, grid()).is_err());
        assert!(EvolutionPlan::new(&t, 9, 20.0, 64, grid()).is_err());
    }

    #[test]
    fn rejects_mismatched_transverse_grid() {
        let t = table();
        let wrong = YGrid::gauss_legendre(2.0, 48).unwrap();
        assert!(EvolutionPlan::new(&t, 4, 20.0, 64, wrong).is_err());
    }

    #[test]
    fn frequency_layout_follows_fft_bin_order() {
        let plan = EvolutionPlan::new(&table(), 4, 10.0, 16, grid()).unwrap();
        let step = std::f64::consts::PI / 10.0;
        assert_eq!(plan.xi()[0], 0.0);
        assert!((plan.xi()[1] - step).abs() < 1e-15);
        assert!((plan.xi()[7] - 7.0 * step).abs() < 1e-14);
        // Bin n/2 is the Nyquist frequency and aliases to the negative
        // side; only xi^2 enters any multiplier, so the sign is moot.
        assert!((plan.xi()[8] + 8.0 * step).abs() < 1e-14);
        assert!((plan.xi()[15] + step).abs() < 1e-15);
    }

    #[test]
    fn x_nodes_tile_the_half_open_box() {
        let plan = EvolutionPlan::new(&table(), 4, 10.0, 16, grid()).unwrap();
        assert_eq!(plan.x_nodes().len(), 16);
        assert_eq!(plan.x_nodes()[0], -10.0);
        assert!((plan.x_step() - 1.25).abs() < 1e-15);
        let last = plan.x_nodes()[15];
        assert!((last - (10.0 - 1.25)).abs() < 1e-14);
    }

    #[test]
    fn truncation_keeps_the_leading_branches() {
        let t = table();
        let plan = EvolutionPlan::new(&t, 5, 10.0, 16, grid()).unwrap();
        assert_eq!(plan.n_modes(), 5);
        assert_eq!(plan.table().len(), 5);
        assert_eq!(plan.duals().len(), 5);
        assert_eq!(plan.gram().size, 5);
        for n in 0..5 {
            assert_eq!(plan.mu(n), t.mode(n).mu);
        }
    }

    #[test]
    fn fft_round_trip_is_identity() {
        let plan = EvolutionPlan::new(&table(), 4, 10.0, 16, grid()).unwrap();
        let orig: Vec<Complex64> = (0..16)
            .map(|j| Complex64::new(j as f64 * 0.3 - 1.0, (j as f64).sin()))
            .collect();
        let mut row = orig.clone();
        plan.fft_forward(&mut row);
        plan.fft_inverse(&mut row);
        for (got, want) in row.iter().zip(&orig) {
            assert!((got / 16.0 - want).norm() < 1e-14);
        }
    }
}
