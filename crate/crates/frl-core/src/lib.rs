//! A workbench for finite dagger-relational algebra.
//!
//! The crate revolves around boolean incidence matrices between tensor words
//! of finite sets ([`finrel`]), and builds three layers on top of them:
//!
//! * binary Frobenius structures and their groupoid presentations ([`frob2`]),
//! * ternary Frobenius structures, connectors, and their pair calculus
//!   ([`frob3`]),
//! * the constructions relating the two — unit-expansion, splitting,
//!   envelopes ([`bridges`]).
//!
//! A small string-diagram language ([`diagrams`]) evaluates monoidal terms
//! over a ternary structure and rewrites connected terms to spider normal
//! form. [`search`] holds exhaustive enumerations over small carriers and a
//! few curated example structures.
//!
//! Conventions used throughout:
//!
//! * Composition is written diagrammatically: `r.compose(&s)` is "r, then s".
//! * Elements of a tensor word are encoded mixed-radix, row-major, with the
//!   leftmost factor most significant. The encoding is never materialized as
//!   data; helpers on [`finrel::Obj`] convert on the fly.
//! * Equality of relations compares shapes and incidences only; set names and
//!   polarities are bookkeeping for display and the diagram language.

pub mod bridges;
pub mod diagrams;
pub mod finrel;
pub mod frob2;
pub mod frob3;
pub mod search;
