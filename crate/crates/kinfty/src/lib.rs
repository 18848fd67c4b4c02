//! Finite, fully inspectable models of the structures behind domain theory
//! done up to homotopy: finitely presented simplicial sets, weakly ordered
//! complexes standing in for complete homotopy partial orders, step-function
//! bases for continuous function spaces, the reflexive tower built from
//! projection pairs, and an untyped lambda-calculus interpreter whose beta and
//! eta conversions are interpreted as edges rather than equations.
//!
//! Everything here is desk scale: carriers are finite, every search is
//! exhaustive, and every claim an operation makes is re-checkable by a
//! brute-force oracle that lives next to it in the test suite.
//!
//! The crate is organised by layer:
//!
//! - [`simplicial`] — complexes, horn filling, bounded Kan reports, pi0 and
//!   abelianised pi1 over edge-path words.
//! - [`hpo`] — weak orders on complexes, directed sets, suprema, Scott-domain
//!   predicates, and the `N+` family of pointed sphere disjoint unions.
//! - [`funcspace`] — step functors, function tables, pointwise order, directed
//!   sups, currying, and the continuity oracle.
//! - [`tower`] — the level tower `K0, [K0->K0], ...`, projection pairs, tower
//!   elements in compact normal form, application, and the `h`/`k` maps.
//! - [`lambda`] — parsing, interpretation, one-step beta/eta conversion, and
//!   conversion-edge (non-)equivalence certificates.
//! - [`textio`] — the plain-text formats for complexes, domains, and tower
//!   configuration files.

pub mod funcspace;
pub mod hpo;
pub mod lambda;
pub mod simplicial;
pub mod textio;
pub mod tower;
