//! Random integer height functions on expanders and regular trees.
//!
//! The crate covers the whole pipeline around uniformly random
//! `M`-Lipschitz functions and graph homomorphisms to `Z` pinned at a vertex:
//!
//! * [`graph`]: graphs, regular/bipartite/tree generators, balls and boundaries.
//! * [`expansion`]: the mixing-lemma expansion parameter, exhaustively and
//!   spectrally, plus goodness predicates and the basic expansion inequalities.
//! * [`height`]: height functions, validation and phases.
//! * [`samplers`]: exact enumeration, exact tree dynamic programming and
//!   Glauber dynamics.
//! * [`transform`]: the few-to-many flattening map and exhaustive checks of
//!   its counting properties.
//! * [`experiments`]: config-driven experiment runner and report emission.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.

pub mod error;
pub mod expansion;
pub mod experiments;
pub mod graph;
pub mod height;
pub mod par;
pub mod rng;
pub mod samplers;
pub mod transform;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use height::{HeightFunction, Mode, Phase};
