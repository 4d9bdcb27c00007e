//! Graded ideals in the exterior algebra over the rationals.
//!
//! The crate computes with Orlik-Solomon ideals of hyperplane arrangements,
//! stable monomial ideals and edge ideals of graphs: graded Betti tables by
//! minimal free resolution, revlex initial and generic initial ideals,
//! Aomoto cohomology and resonance varieties.
//!
//! ```
//! use exterior_resonance::prelude::*;
//!
//! let j = GradedIdeal::from_monomials(5, &["12", "13", "14", "15", "234"]).unwrap();
//! let table = betti_table(&j, 3, &ResolutionOptions::default()).unwrap();
//! assert_eq!(table.linear_strand(2), vec![4, 14, 34, 69]);
//! ```

pub mod demo;
pub mod exterior;
pub mod graph;
pub mod ideal;
pub mod initial;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod resolution;
pub mod resonance;
pub mod scalar;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ideal is not monomial")]
    NotMonomial,
    #[error("ideal is not stable")]
    NotStable,
    #[error("linear forms are dependent")]
    Dependent,
    #[error("generic agreement not reached after {trials} trials per bound (last bound {bound})")]
    NoGenericAgreement { trials: usize, bound: u64 },
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("arrangement is not essential: rank {rank} < ambient dimension {ambient}")]
    NonEssential { rank: usize, ambient: usize },
    #[error("forms {0} and {1} are proportional")]
    ProportionalForms(usize, usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The types and entry points most programs need.
pub mod prelude {
    pub use crate::exterior::{boundary, product_form, ExtElement, LinearChange, Monomial};
    pub use crate::graph::{check_conjecture_b, disjoint_union_complete, ConjectureSubject, Graph};
    pub use crate::ideal::GradedIdeal;
    pub use crate::initial::{gin, initial_ideal, GinOptions};
    pub use crate::matroid::{uniform_matroid, Arrangement, Matroid};
    pub use crate::resolution::{
        betti_table, has_linear_resolution, is_componentwise_linear, regularity, stable_betti, BettiTable,
        ResolutionOptions,
    };
    pub use crate::resonance::{in_resonance, r1_irreducible_os, r1_stable, resonance_probe};
    pub use crate::scalar::{FieldChoice, PrimeField, Rational};
    pub use crate::{Error, Result};
}

