//! Exact integer linear algebra: normal forms, lattice membership, and
//! finitely generated abelian groups with kernels, images and subquotients.

mod group;
mod matrix;
mod normal_form;

pub use group::{
    graded_piece_dim, homology_at, homology_of_pair, induced_map, is_isomorphic, primary_part, subgroup_pk,
    valuation, FgAbGroup, Homomorphism, Invariants, Normalized, Subquotient,
};
pub use matrix::{int_vec, IntMatrix, IntVector};
pub use normal_form::{hnf, kernel, lattice_solve, snf, Hermite, Smith};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("d_out · d_in is nonzero")]
    NotAComplex,
    #[error("maps are not composable")]
    NotComposable,
    #[error("image of generator {generator} is not a cocycle")]
    NotACocycle { generator: usize },
    #[error("homomorphism does not kill relation {relation}")]
    NotWellDefined { relation: usize },
}
