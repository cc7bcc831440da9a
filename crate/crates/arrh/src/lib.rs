//! Exact-arithmetic analysis of hyperplane multi-arrangements: intersection
//! lattices, derivation modules, scalar and graded chain complexes, and
//! freeness decision procedures, over Q or GF(p).

pub mod complexes;
pub mod derivations;
pub mod families;
pub mod field;
pub mod matrix;
pub mod analyzer;
pub mod arrangement;
pub mod homology;
pub mod poly;
pub mod terao3;
pub mod tf2;

pub use field::{Field, FieldError, Scalar};
pub use matrix::{rank_kernel_solve, Mat};
pub use poly::{monomials, num_monomials, Mono, Poly, PolyVec};
