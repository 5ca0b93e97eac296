//! Exact combinatorial machinery around Turán's (3,4)-problem.
//!
//! The crate provides:
//!
//! * [`hypergraph`] — canonical forms, isomorphism, enumeration and exact
//!   induced densities for small 3-uniform hypergraphs;
//! * [`orgraph`] — oriented graphs, the forbidden patterns `C4` (induced
//!   oriented 4-cycle) and `P3bar` (oriented edge plus isolated vertex),
//!   and the Fon-der-Flaass interpretation turning an orgraph into a
//!   3-graph;
//! * [`constructions`] — the Kostochka configurations on `Z3 x R`, the
//!   catalog of named 3-graphs (`I34`, `G3`, `H1..H4`, `M2`, `RHO`) and
//!   exhaustive scans for forbidden induced subgraphs in the slices;
//! * [`regularity`] — deciding whether a 3-graph admits a Fon-der-Flaass
//!   realization (regular) or not (singular) by pruned backtracking;
//! * [`extraction`] — doubled embeddings, the orientation-derivation rule
//!   and certification that a doubled pattern is regular, with failure
//!   witnesses naming a concrete forbidden subgraph;
//! * [`extremal`] — exact minimal edge counts `ex_min(n; F)` with witness
//!   graphs and a DIMACS CNF exporter for independent cross-checking;
//! * [`flag`] — flag enumeration, exact moment matrices, SDPA export and
//!   exact-arithmetic verification of lower-bound certificates.
//!
//! All densities and certificate arithmetic are exact rationals; nothing
//! in an accept path goes through floating point.

pub mod constructions;
pub mod error;
pub mod extraction;
pub mod extremal;
pub mod flag;
pub mod format;
pub mod hypergraph;
pub mod orgraph;
pub mod regularity;

pub use error::{Error, Result};
pub use hypergraph::{CanonicalForm, Density, ThreeGraph};
pub use orgraph::Orgraph;
