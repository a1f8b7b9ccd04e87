//! Exact computer algebra for graded Lie doubles and their quantum doubles.
//!
//! The engine builds the graded Lie algebra 𝔡 = (𝔤 ⋉ V[-1]) ⋉ (𝔤 ⋉ V[-1])*[-2]
//! from a base Lie algebra and a representation, then verifies, in exact
//! rational arithmetic truncated at a fixed power of the central parameter ℏ:
//!
//! - graded Jacobi, invariance and nondegeneracy of the canonical pairing,
//!   the classical Yang-Baxter equation, and cobracket identities;
//! - the quantum double structure on U(𝔡)[[ℏ]]: dual-pairing coproduct,
//!   R-matrix, antipode, counit, all quasi-triangular Hopf axioms and the
//!   ribbon identities for θ = exp(-ℏC);
//! - the derived zero locus of the moment map as a commutative DG algebra,
//!   its identification with the Chevalley-Eilenberg algebra of the positive
//!   half, and weight-truncated cohomology and invariants by exact ranks;
//! - the tangent Lie algebra models and the Koszul-duality functor pair with
//!   roundtrip, monoidality, and braiding checks.

pub mod dga;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod hopf;
pub mod koszul;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod series;
pub mod suites;
pub mod tensor;
pub mod uea;

pub use error::{Error, Result};
