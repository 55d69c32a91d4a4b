//! Fundamental groups of knot complements.
//!
//! - [`words`]: freely reduced words in syllable form and their notation.
//! - [`presentation`] and [`tietze`]: finitely presented groups, verified
//!   Tietze moves and a deterministic simplifier.
//! - [`wirtinger`]: knot diagrams and Wirtinger presentations.
//! - [`torus`]: normal forms, word problem, center and torsion for
//!   `<a, b | a^m = b^n>` and `Z/m * Z/n`.
//! - [`snf`], [`invariants`], [`finite_group`]: abelianization and
//!   homomorphism counts used to tell groups apart.
//! - [`geometry`]: the explicit retraction of a punctured disk sector onto two
//!   radii, checked numerically.

pub mod finite_group;
pub mod geometry;
pub mod invariants;
pub mod presentation;
pub mod snf;
pub mod tietze;
pub mod torus;
pub mod wirtinger;
pub mod words;

use thiserror::Error;

pub use finite_group::{builtin_table, FiniteGroupTable};
pub use invariants::{
    abelianization, hom_count, invariant_profile, relation_matrix, AbelianInvariants,
    InvariantProfile, DEFAULT_MAX_EVALS,
};
pub use presentation::{evaluate_word_in_quotient, Presentation};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use tietze::{apply_tietze, auto_simplify, DerivationStep, TietzeMove};
pub use torus::{
    free_product_normal_form, is_central, max_torsion_order, order_in_free_product,
    torus_normal_form, words_equal_in_torus_group, FactorOrders, FreeProductNormalForm, Order,
    TorusNormalForm, TorusParams,
};
pub use wirtinger::{builtin_diagram, parse_diagram, wirtinger_presentation, KnotDiagram};
pub use words::{parse_word, Alphabet, GenId, Word};

/// Union of the module errors, for front ends that handle them uniformly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] words::WordError),
    #[error(transparent)]
    Presentation(#[from] presentation::PresentationError),
    #[error(transparent)]
    Tietze(#[from] tietze::TietzeError),
    #[error(transparent)]
    Diagram(#[from] wirtinger::DiagramError),
    #[error(transparent)]
    Torus(#[from] torus::TorusError),
    #[error(transparent)]
    Invariant(#[from] invariants::InvariantError),
    #[error(transparent)]
    FiniteGroup(#[from] finite_group::FiniteGroupError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
}

impl Error {
    /// Whether this is a resource-budget failure rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Invariant(invariants::InvariantError::BudgetExceeded { .. })
        )
    }
}
