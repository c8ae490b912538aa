//! Standard subspaces of ℂ^N, their Tomita operators and modular pairs.

pub mod borchers;
pub mod modular;
pub mod subspace;

pub use borchers::{borchers_relation_check, BorchersReport, GeneratorGroup, IdentityGroup, ModularSystem, OneParameterGroup};
pub use modular::{
    bijection_audit, covariance_transport, random_admissible_pair, random_subspace, subspace_from_pair,
    tomita_from_subspace, BijectionInstance, BijectionReport, CovarianceReport, ModularPair, SymmetryOp,
};
pub use subspace::{AntiLinearOp, RealSubspace};
