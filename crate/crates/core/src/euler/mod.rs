//! Euler elements and their 3-gradings.

pub mod classify;
pub mod grading;
pub mod symmetric;

pub use classify::{
    classify_euler_orbits, classify_with_symmetry, find_conjugator, is_hermitian, is_tube_type_hermitian,
    EulerOrbit, OrbitClassification, OrbitInvariant,
};
pub use grading::{
    euler_involution, involution_element, is_euler, is_orthogonal_pair, EulerGrading, EulerInvolution,
    GradingDims, NotEuler,
};
pub use symmetric::{is_symmetric, SymmetryOptions, SymmetryReport, SymmetryVerdict};
