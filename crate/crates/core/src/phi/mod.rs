//! An exact linear calculus for `Φ(γ) = ‖1 - γ‖²` on words over the
//! transvections: star-shaped words and letter types, canonical unknowns,
//! rule generators, exact feasibility with Farkas certificates, the
//! five-point Gram configuration, and coboundary forms on `(Z/2)^n`.

mod audit;
mod canon;
mod check;
mod coboundary;
mod feasibility;
mod figure1;
mod rules;
mod system;
mod word;

use thiserror::Error;

use crate::groups::GroupError;

pub use audit::{audit_harmonicity_counts, harmonicity_closed_form};
pub use canon::{word_key, CanonMode};
pub use check::{
    phi_check, random_instances, random_star, InstanceConfig, Instances, PhiCheck, PhiCheckReport,
    RewriteCheck,
};
pub use coboundary::{parse_vector_spec, point_permutation, CoboundaryForm, CoboundaryReport};
pub use feasibility::{check_feasible, implied_value, FarkasCertificate, Feasibility};
pub use figure1::{figure1_distances, figure1_points, figure1_report, figure1_rules, Figure1Report};
pub use rules::{
    adjacent_nonpositive, delta_letters, delta_pairing, disjoint_exact, expansion_letters,
    gen_cancellation, gen_disjoint, gen_expansion, gen_reorder, gram_cut, star_value,
};
pub use system::{
    polarize, Constraint, LinearExpr, PhiSystem, Relation, RuleTag, Unknown, WordConstraint,
    GENERATOR, IDENTITY,
};
pub use word::{
    analyze_word, components, e, is_star_forest, pentagram_rewrite, LetterType, PlaceAllocator,
    SWord, WordAnalysis,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhiError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no pentagram pattern at position {pos} of `{word}`")]
    PatternMismatch { word: String, pos: usize },
    #[error("pentagram rewrite at position {pos} of `{word}` changes the automorphism")]
    UnsoundRewrite { word: String, pos: usize },
    #[error("supports overlap in places {0:?}")]
    OverlappingSupports(Vec<u32>),
    #[error("`{0}` is not star-shaped with a unique hub")]
    NotStarShaped(String),
    #[error("letters {first} and {second} have different types")]
    TypeMismatch { first: String, second: String },
    #[error("outer words must contain all four letter types around place {hub}")]
    MissingTypes { hub: u32 },
    #[error("place {0} is not fresh")]
    NotFresh(u32),
    #[error("places must be distinct and nonzero: {0:?}")]
    PlacesNotDistinct(Vec<u32>),
    #[error("need at least {needed} places, got {found}")]
    TooFewPlaces { needed: usize, found: usize },
    #[error("vector has length {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("malformed vector spec `{0}`")]
    VectorSpec(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}
