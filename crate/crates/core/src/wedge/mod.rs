//! Abstract Euler wedges: couples, duality, the cone order and the de Sitter
//! positivity region.

pub mod cone;
pub mod couple;
pub mod desitter;
pub mod order;

pub use cone::{ConeShape, ConeSpec, InvarianceReport};
pub use couple::{act, dual, twisted_adjoint, WedgeCouple};
pub use desitter::{minkowski_square, positivity_region_membership, CausalPoint};
pub use order::{GaussData, OrbitWedge, OrderResult, OrderVerdict, WedgeOrbit};
