//! Computational toolkit for extremal matching problems in k-uniform
//! hypergraphs: the extremal constructions and their counts, exact and
//! fractional matching/cover solvers, the shifting operator, closeness
//! diagnostics, and a randomized rounding pipeline from fractional perfect
//! matchings to near-perfect integral matchings.

pub mod constructions;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod lp;
pub mod optimize;
pub mod report;
pub mod rounding;
pub mod shifting;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{Edge, EdgeSet, Hypergraph, Relabel, VertexSet};
