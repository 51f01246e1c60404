use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::decompose;
use crate::error::{Error, Result};
use crate::evolution::plan::EvolutionPlan;
use crate::evolution::state::{ModalState, WaveState};

/// Largest tolerated relative defect when projecting grid data onto the
/// plan's modes; beyond it the truncated family cannot carry the data and
/// the mode count must be raised.
const TRUNCATION_DEFECT_LIMIT: f64 = 1e-4;

/// Project sampled initial data onto the dual family, one transverse
/// integral per box node. The reconstruction defect
/// `||u - sum u_n (x) phi_n|| / ||u||` guards the truncation level.
pub fn initial_decompose(plan: &EvolutionPlan, wave: &WaveState) -> Result<ModalState> {
    wave.check_shape(plan)?;
    let columns: Vec<Result<Vec<Complex64>>> = wave
        .values
        .par_iter()
        .map(|col| decompose(col, plan.y_grid(), plan.duals()))
        .collect();
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); plan.n_x()]; plan.n_modes()];
    for (j, col) in columns.into_iter().enumerate() {
        for (n, c) in col?.into_iter().enumerate() {
            coeffs[n][j] = c;
        }
    }
    let state = ModalState { t: wave.t, coeffs };

    let total = wave_norm(plan, wave)?;
    if total > 0.0 {
        let rebuilt = synthesize(plan, &state)?;
        let mut diff = wave.clone();
        for (row, built) in diff.values.iter_mut().zip(&rebuilt.values) {
            for (v, b) in row.iter_mut().zip(built) {
                *v -= b;
            }
        }
        let defect = wave_norm(plan, &diff)? / total;
        if defect > TRUNCATION_DEFECT_LIMIT {
            return Err(Error::TruncationTooCoarse {
                defect,
                limit: TRUNCATION_DEFECT_LIMIT,
            });
        }
    }
    Ok(state)
}

/// Advance a modal state to `t_target` exactly: each branch is multiplied
/// by its eigenvalue phase and the free longitudinal propagator is applied
/// as a Fourier multiplier on the box frequencies. There is no time-step
/// error; the only approximation is the spatial truncation already made.
pub fn propagate(
    plan: &EvolutionPlan,
    state: &ModalState,
    t_target: f64,
) -> Result<ModalState> {
    state.check_shape(plan)?;
    let dt = t_target - state.t;
    if !dt.is_finite() || dt < 0.0 {
        return Err(Error::InvalidInput(format!(
            "target time {t_target} precedes the state time {}",
            state.t
        )));
    }
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let phases: Vec<Complex64> = plan
        .xi()
        .iter()
        .map(|&xi| (Complex64::new(0.0, -dt * xi * xi)).exp())
        .collect();
    let scale = 1.0 / plan.n_x() as f64;
    let coeffs: Vec<Vec<Complex64>> = state
        .coeffs
        .par_iter()
        .enumerate()
        .map(|(n, row)| {
            let modal = (-Complex64::new(0.0, dt) * plan.mu(n)).exp() * scale;
            let mut buf = row.clone();
            plan.fft_forward(&mut buf);
            for (v, &ph) in buf.iter_mut().zip(&phases) {
                *v *= ph;
            }
            plan.fft_inverse(&mut buf);
            for v in buf.iter_mut() {
                *v *= modal;
            }
            buf
        })
        .collect();
    Ok(ModalState { t: t_target, coeffs })
}

/// Gram-weighted squared norm of a set of longitudinal rows: the exact
/// discrete L2 norm of `sum_n rows[n] (x) phi_n`, never assuming the modes
/// are orthogonal. Reduction order is fixed by branch index.
pub(crate) fn gram_weighted_norm_sq(plan: &EvolutionPlan, rows: &[Vec<Complex64>]) -> f64 {
    let m = rows.len();
    let dx = plan.x_step();
    let g = &plan.gram().gram;
    let mut total = 0.0;
    for j in 0..m {
        let self_mass: f64 = rows[j].iter().map(|v| v.norm_sqr()).sum();
        total += dx * self_mass * g[j * m + j].re;
        for k in (j + 1)..m {
            let cross: Complex64 = rows[j]
                .iter()
                .zip(&rows[k])
                .map(|(a, b)| a * b.conj())
                .sum();
            total += 2.0 * (dx * cross * g[j * m + k]).re;
        }
    }
    total
}

/// L2(strip) norm of a modal state through the Gram matrix.
pub fn state_norm(plan: &EvolutionPlan, state: &ModalState) -> Result<f64> {
    state.check_shape(plan)?;
    Ok(gram_weighted_norm_sq(plan, &state.coeffs).max(0.0).sqrt())
}

/// Evaluate the modal superposition on the full grid.
pub fn synthesize(plan: &EvolutionPlan, state: &ModalState) -> Result<WaveState> {
    state.check_shape(plan)?;
    let modes = plan.mode_samples();
    let n_y = plan.y_grid().nodes().len();
    let values: Vec<Vec<Complex64>> = (0..plan.n_x())
        .into_par_iter()
        .map(|j| {
            let mut row = vec![Complex64::new(0.0, 0.0); n_y];
            for (coeff_row, mode_row) in state.coeffs.iter().zip(modes) {
                let c = coeff_row[j];
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for (v, &m) in row.iter_mut().zip(mode_row) {
                    *v += c * m;
                }
            }
            row
        })
        .collect();
    Ok(WaveState { t: state.t, values })
}

/// L2(strip) norm of grid samples: transverse quadrature per box node,
/// rectangle rule along the periodic box.
pub fn wave_norm(plan: &EvolutionPlan, wave: &WaveState) -> Result<f64> {
    wave.check_shape(plan)?;
    let mut total = 0.0;
    for col in &wave.values {
        let sq: Vec<Complex64> = col.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
        total += plan.y_grid().integrate(&sq)?.re;
    }
    Ok((total * plan.x_step()).max(0.0).sqrt())
}

/// Fraction of the state's mass in the outer eighths of the box,
/// `|x| >= 7L/8`. A fraction above about 1e-6 means data has reached the
/// edge and wrap-around is contaminating any reading of the box as the
/// real line.
pub fn edge_mass_fraction(plan: &EvolutionPlan, state: &ModalState) -> Result<f64> {
    state.check_shape(plan)?;
    let cut = 0.875 * plan.x_box();
    let mut edge = 0.0;
    let mut total = 0.0;
    for row in &state.coeffs {
        for (v, &x) in row.iter().zip(plan.x_nodes()) {
            let m = v.norm_sqr();
            total += m;
            if x.abs() >= cut {
                edge += m;
            }
        }
    }
    Ok(if total > 0.0 { edge / total } else { 0.0 })
}
