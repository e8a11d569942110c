//! Weight fitting: the exact interpolating solve, the Metropolis random walk
//! and an enumeration oracle for the walk's one-step Gibbs law.

mod exact;
mod gibbs;
mod problem;
mod report;
mod stochastic;

pub use exact::{build_design_matrix, check_integrality, fit_exact, integral_part};
pub use gibbs::{gibbs_oracle_step_expectation, GibbsLattice, GibbsStep, LATTICE_LIMIT};
pub use report::{format_rational, ExactDiagnostics, FitMode, FitReport};
pub use stochastic::{fit_stochastic, TrainerConfig};
