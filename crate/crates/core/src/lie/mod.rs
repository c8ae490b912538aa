//! Matrix Lie algebras: bases, structure constants, brackets, Killing form,
//! exponentials and family constructors.

mod algebra;
pub mod families;
pub mod io;

pub use algebra::{AlgebraElement, Family, GroupElement, LieAlgebra, DEFAULT_TOLERANCE};
pub use families::{direct_sum, gl2, iso, make_algebra, make_algebra_from_label, sl, so, sp};
