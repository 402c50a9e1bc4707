//! Exact analysis of submonoids of `(ℕ₀ ∪ {inf})^k` cut out by diophantine
//! congruences and linear inequalities.
//!
//! A system of constraints over `k` variables consists of congruence rows
//! `d·t ∈ m·(ℕ₀ ∪ {inf})` and inequality rows `a·t ≥ b·t`, evaluated in the
//! extended naturals where `inf` absorbs addition and sits on top of the
//! order. The solution set is a commutative monoid `M`; reversing every
//! inequality yields its dual `D(M)`, which in general is not isomorphic
//! to `M`.
//!
//! The crate computes, with exact integer arithmetic throughout:
//!
//! * membership, classification and duals ([`system`]);
//! * minimal generating sets of the finite parts `W = M ∩ ℕ₀^k` and
//!   `V = M ∩ D(M) ∩ ℕ₀^k` by Hilbert-basis completion, plus a brute-force
//!   oracle ([`hilbert`]);
//! * the admissible infinite supports of `M`, the reduced system attached
//!   to each, and a finite generating set of `M` over the extended
//!   naturals ([`supports`]);
//! * decomposition search, the algebraic preorder, idempotents, minimal
//!   elements, superdecomposable elements, full-affineness, unperforation
//!   and synthesis of an equation system from a full affine generating
//!   set ([`order`]);
//! * compilation of a system into a tree of primitive blocks composed by
//!   pullbacks, with a grid verifier for the compilation ([`realize`]);
//! * a deterministic command-line front end ([`cli`]).

pub mod cli;
pub mod extnat;
pub mod format;
pub mod hilbert;
pub mod order;
pub mod realize;
mod smith;
pub mod supports;
pub mod system;

pub use extnat::{ExtNat, ExtVector};
pub use hilbert::GeneratorSet;
pub use system::{Classification, SystemSpec};

/// Errors surfaced by parsing and by operations whose preconditions depend
/// on runtime data. Dimension mismatches between already-validated values
/// are programming errors and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("support {0} is not admissible for this system")]
    Inadmissible(String),
    #[error("vector {0} is not a member of the monoid")]
    NotMember(ExtVector),
    #[error("generator set is not full affine; witness {0} is a difference outside the monoid")]
    NotFullAffine(ExtVector),
    #[error("system has no order unit")]
    MissingUnit,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
