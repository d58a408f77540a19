//! Exact computations for Hamiltonian circle actions and curve
//! configurations on the three-point blow-up of S²×S².

pub mod configurations;
pub mod error;
pub mod homology;
pub mod inflation;
pub mod karshon;
pub mod liealg;
pub mod linalg;
pub mod polytope;
pub mod relations;
pub mod scalars;

pub use error::{Error, Result};
pub use homology::HomologyClass;
pub use scalars::{Chamber, Fp, LinForm, Q};
