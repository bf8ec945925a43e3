//! Exact evolution of the field plus a discrete bath under the
//! rotating-wave Hamiltonian, with thermal baths handled as Fock mixtures.

mod bath;
mod ensemble;
mod hamiltonian;
mod propagate;
mod simulate;

pub use bath::{BathMode, DiscreteBath};
pub use ensemble::{thermal_ensemble, EnsembleMember, ThermalEnsemble};
pub use hamiltonian::{build_hamiltonian, excitation_sectors, Hamiltonian};
pub use propagate::{evolve, EvolutionConfig, Method, Propagator, DENSE_LIMIT};
pub use simulate::{simulate, FieldMode, Trajectory};
