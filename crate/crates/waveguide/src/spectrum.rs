//! Transverse eigenvalue solver: characteristic function, Newton polish
//! and continuation in the boundary coefficients.

mod characteristic;
mod continuation;
mod newton;

pub use characteristic::{
    asymptotic_seed, characteristic, characteristic_derivative, pole_guard_radius, CharEval,
    CharScale,
};
pub use continuation::{solve_mode, solve_spectrum, SpectrumTable, TransverseMode};
pub use newton::{newton_refine, SolverOptions};

pub(crate) use continuation::refine_checked;
