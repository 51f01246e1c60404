//! Eigenfunctions of the transverse operator and everything built on them:
//! closed-form inner products, the biorthogonal dual family, Riesz-frame
//! diagnostics and projection of sampled data onto the modes.

mod dual;
mod form;
mod gram;
mod integrals;
mod project;

pub use dual::{dual_family, DualFamily};
pub use form::{eigenfunction_eval, normalized_form, EigenfunctionForm};
pub use gram::{
    biorthogonality_residual, derivative_gram, gram_matrix, gram_report, GramReport,
};
pub use integrals::{
    bilinear_pair_integral, derivative_inner_product, exp_pair_integral, mode_inner_product,
    pairing_integral,
};
pub use project::{decompose, reconstruct};
