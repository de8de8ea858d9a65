//! Exact bounds and verified constructions for index coding on
//! side-information graphs.
//!
//! The crate computes a hierarchy of exact-rational upper and lower bounds
//! on the broadcast rate of a directed side-information graph (clique-cover
//! and partial-clique LPs, local-chromatic relaxations, a combined
//! local–partial LP and its recursive strengthening), builds vector-linear
//! index codes over prime fields realizing the LP values, and checks the
//! approximation guarantees on generated graph families such as unit disk
//! graphs.

pub mod code;
pub mod family;
pub mod gen;
pub mod gf;
pub mod geom;
pub mod gic;
pub mod graph;
pub mod lps;
pub mod oracles;
pub mod rat;
pub mod rounding;
pub mod sig;
pub mod simplex;

pub use graph::{SideInfoGraph, VertexSet};
pub use rat::Rat;
