//! Mild solutions: heat semigroup, the Duhamel bilinear operator, the Picard
//! fixed point and a time-stepping reference solver.

mod config;
mod dependence;
mod duhamel;
mod heat;
mod picard;
mod timestep;

pub use config::{Problem, SolverConfig};
pub use dependence::{continuous_dependence_experiment, lipschitz_factor, DependenceReport, DEPENDENCE_SLACK};
pub use duhamel::{
    duhamel_bilinear, duhamel_bilinear_sym, duhamel_bilinear_with, duhamel_integrate, nonlinear_trajectory,
    phi_functions,
};
pub use heat::{heat_flow, heat_propagate, heat_quadrature_slack};
pub use picard::{picard_solve, PicardReport};
pub use timestep::{timestep_solve, BLOW_UP_LIMIT};
