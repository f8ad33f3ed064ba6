//! Finitely presented higher-rank graphs (k-graphs) and the algebraic data
//! attached to them by twisted Cuntz-Krieger theory.
//!
//! The crate is organized bottom-up:
//!
//! * [`degree`], [`graph`], [`path`]: the presentation layer. A k-graph is
//!   given by a k-colored 1-skeleton plus commuting squares; paths are kept
//!   in a color-sorted normal form and composed/factorized through the
//!   squares.
//! * [`align`]: minimal common extensions, extension sets, exhaustive sets,
//!   and the closure/section operations on finite path sets.
//! * [`twist`]: phase-valued bicharacters on Z^k, their pullbacks to a graph
//!   (with optional edge-weight coboundary twists), integer subgroups of Z^k
//!   in Hermite normal form, and nondegeneracy tests.
//! * [`spanalg`]: the *-algebra spanned by words `t_mu t_nu^*` subject to the
//!   twisted Toeplitz-Cuntz-Krieger relations, with exact coefficients.
//! * [`sparse`], [`pathrep`]: a truncated representation on the finite path
//!   space, relation checks with explicit truncation margins, and spectral
//!   norms by seeded power iteration.
//! * [`boundary`]: finitely described filters of paths, bounded satiation
//!   closures, and vanishing certificates for gap projections.
//! * [`ideals`]: hereditary/saturated vertex sets and the gauge-invariant
//!   ideal lattice.
//! * [`periodicity`]: the similarity relation, its group of degree
//!   differences, aperiodicity and cofinality.
//! * [`simplicity`]: the decision tree combining the above into a verdict
//!   with re-checkable certificates.
//! * [`specio`], [`samples`]: JSON input formats and built-in sample data.

pub mod align;
pub mod boundary;
pub mod degree;
mod error;
pub mod graph;
pub mod ideals;
pub mod path;
pub mod pathrep;
pub mod periodicity;
pub mod phase;
pub mod samples;
pub mod simplicity;
pub mod spanalg;
pub mod sparse;
pub mod specio;
pub mod twist;

pub use degree::Degree;
pub use error::{Error, Result};
pub use graph::{KGraph, ValidationReport};
pub use path::Path;
