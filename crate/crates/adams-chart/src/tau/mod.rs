//! Exact algebra over F2[τ]: polynomials, matrices, Smith normal form and
//! homology of maps between sums of cyclic modules.

mod homology;
mod matrix;
mod poly;
mod snf;

pub use homology::{homology, AlgebraError, Homology, PresentedModule, TauOrder};
pub use matrix::PolyMatrix;
pub use poly::{poly_gcd, TauPoly};
pub use snf::{snf, Snf};
