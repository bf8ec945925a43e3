//! Continuum-bath rates, Markovian timescales and validity conditions.

mod cutoff;
mod model;
pub mod quadrature;
mod timescales;

pub use cutoff::{cutoff_temperature, Crossing, CutoffReport, BETA_OMEGA_RANGE};
pub use model::SpectralModel;
pub use timescales::{
    closed_dis_over_dec, closed_th_over_dec, closed_th_over_dis, continuum_energy_order2, markov_rate, ratio_report,
    reservoir_braces, separability_check, tau_decoherence, tau_dissipation, tau_reservoir_decoherence, tau_thermal,
    window_energy_order2, window_rate, zero_t_condition, Horizon, IdentityCheck, Ratios, Regime, Separability,
    TimescaleReport, ZeroTCondition, DEFAULT_MARGIN,
};
