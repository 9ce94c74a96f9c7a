#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::type_complexity)]

//! Finite tree algebras and the machinery for evaluating them on regular
//! infinite trees: sorted trees and graph presentations, omega-semigroups and
//! Wilke algebras, table-presented tree algebras, weak Ramseyan splits,
//! evaluations and condensations, consistent labellings, parity tree automata
//! and the ordered constructions built on top of them.
//!
//! Regular infinite trees are always given as finite rooted graphs
//! ([`graph::Graph`]); their products are computed on the graph.

pub mod algebra;
pub mod automaton;
pub mod branching;
pub mod condensation;
pub mod error;
pub mod evaluation;
pub mod games;
pub mod gen;
pub mod graph;
pub mod io;
pub mod labelling;
pub mod ordered;
pub mod rewiring;
pub mod semigroup;
pub mod sort;
pub mod splits;
pub mod suites;
pub mod tree;
pub mod zoo;

pub use algebra::{Arg, Elem, FinAlgebra};
pub use error::{Error, Result};
pub use graph::{Graph, Label, TreeClass};

pub use semigroup::{FinSemigroup, OmegaSemigroup};
pub use sort::Sort;
pub use tree::Tree;
