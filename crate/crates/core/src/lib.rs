//! Euler elements, abstract wedge spaces, standard subspaces and the
//! net construction from representation data at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: matrix Lie algebras, structure constants, exponentials.
//! * [`euler`]: Euler elements, 3-gradings, symmetric orbits, classification.
//! * [`wedge`]: Euler couples, cones, the order on wedge orbits, de Sitter geometry.
//! * [`stdsub`]: real standard subspaces and their Tomita data in finite dimension.
//! * [`bgl`]: modular pairs from representation data, net axioms, the
//!   rapidity model of the 1+1d free field and truncated Fock checks.
//! * [`modular`]: modular covariance, regularity and anti-ellipticity criteria.
//! * [`atlas`]: classification tables and run configuration shared with the CLI.

pub mod atlas;
pub mod bgl;
pub mod error;
pub mod euler;
pub mod lie;
pub mod linalg;
pub mod modular;
pub mod par;
pub mod random;
pub mod stdsub;
pub mod wedge;

pub use error::{Result, WedgeError};
pub use par::Execution;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
