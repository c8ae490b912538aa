//! Nets of standard subspaces from representation data, the one-particle
//! rapidity model of the 1+1d free field and truncated Fock space checks.

pub mod axioms;
mod dd;
pub mod fock;
pub mod rapidity;
pub mod rep;

pub use axioms::{bgl_net, check_net_axioms, AxiomResult, NetAxiomReport, NetEntry};
pub use fock::{composition_check, vacuum_expectation_check, weyl_distance, weyl_op, FockTruncation, WeylOp};
pub use rapidity::{
    bw_residual, bw_residuals, locality_check, rapidity_vector, regularity_probe, rindler_tomita, Gaussian,
    LightlikeTranslation, RapidityModel, RapidityVector, TestFunction,
};
pub use rep::{bgl_pair, gl2_fixture, DeterminantRep, ModularRepData, Representation};
