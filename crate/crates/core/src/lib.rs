//! Computational toolkit for property (T) of automorphism groups of free
//! groups: exact group models, Cayley balls, sparse group-algebra
//! arithmetic, sum-of-squares certification of `Δ² - εΔ`, and an exact
//! linear-constraint calculus for functions conditionally of positive type.

pub mod algebra;
pub mod ball;
pub mod exact;
pub mod groups;
pub mod phi;
pub mod sos;
pub mod symmetry;
