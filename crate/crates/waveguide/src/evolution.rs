//! Time evolution on the strip by exact separation of variables: modal
//! decomposition of initial data, the Fourier-multiplier propagator on a
//! periodic longitudinal box, Gram-exact norm measurement, decay-rate
//! fitting, the weighted smoothing functional and an independent
//! Crank-Nicolson oracle for the transverse dynamics.

mod cn;
mod fit;
mod modal;
mod plan;
mod smoothing;
mod state;

pub use cn::{cn_evolve, energy_identity_residual, CNConfig};
pub use fit::{decay_fit, DecayFit};
pub use modal::{
    edge_mass_fraction, initial_decompose, propagate, state_norm, synthesize, wave_norm,
};
pub use plan::EvolutionPlan;
pub use smoothing::{smoothing_functional, SmoothingReport};
pub use state::{gaussian_wave, mode_state, random_state, ModalState, WaveState};
