//! The Bockstein spectral sequence of `Ω_n` at a prime.
//!
//! Pages are produced two ways: by iterating derived exact couples starting
//! from `H(Ω_n; ℤ) →p H(Ω_n; ℤ) → H(Ω_n; 𝔽_p)` ([`BocksteinSequence`]), and
//! from lattice computations on the cochains directly ([`closed_form_page`]).
//! The two are compared through an explicit cochain-level map.

mod closed_form;
mod couple;
mod identification;
mod sequence;

pub use closed_form::{closed_form_page, compare_pages, ClosedFormPage, PageComparison};
pub use couple::{derive, initial_couple_from, CoupleNode, ExactCouple};
pub use identification::{cartier_composite, verify_page_identification, IdentificationOutcome};
pub use sequence::{initial_couple, pages, BocksteinSequence, PageSummary, SpectralPage};

use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::lattice::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BocksteinError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the Bockstein couple needs total degree n >= 1")]
    ZeroDegree,
    #[error("page index must be at least 1")]
    ZeroPage,
    #[error("connecting map: d(x)/p is not a cocycle for generator {generator} in degree {degree}")]
    ConnectingMap { degree: usize, generator: usize },
    #[error("page {page}, degree {degree}: generator {generator} could not be expressed")]
    Expression {
        page: usize,
        degree: usize,
        generator: usize,
    },
    #[error("page {page}, degree {degree}: j' depends on the preimage chosen for generator {generator}")]
    PreimageDependence {
        page: usize,
        degree: usize,
        generator: usize,
    },
    #[error("couple of page {page} is not exact in degree {degree} ({node:?})")]
    NotExact {
        page: usize,
        degree: usize,
        node: CoupleNode,
    },
}
