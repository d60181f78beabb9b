//! Exact-arithmetic toolkit for the geodesic orbit property on Lorentz
//! nilmanifolds.
//!
//! Inputs are Lie algebras with rational structure constants, reductive
//! decompositions and rational Gram matrices; all core computations are
//! exact, so every verdict is an algebraic identity rather than a numerical
//! estimate. The crate provides:
//!
//! * geodesic-vector tests and the `(α, k)` solver of the Geodesic Lemma,
//! * canonical forms of skew operators of a Lorentz form,
//! * mechanical verifiers for the structure of geodesic orbit Lorentz
//!   nilmanifolds (nondegenerate and degenerate commutator cases),
//! * a deterministic, parallel search harness over parametrized nilpotent
//!   families hunting for a 4-step geodesic orbit candidate.

pub mod bilinear;
pub mod canon;
pub mod geodesic;
pub mod homspace;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod search;
pub mod spacefile;
pub mod structure;
