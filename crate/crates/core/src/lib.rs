//! Oriented matroids, OM programs, coline shellings and the Holt-Klee
//! property, with exact polytope tooling for building witnesses.

pub mod chirotope;
pub mod classify;
pub mod coshell;
pub mod digraph;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod geom;
pub mod om;
pub mod omp;
pub mod sign;

pub use chirotope::Chirotope;
pub use digraph::{Digraph, HoltKleeReport};
pub use error::{Error, Result};
pub use om::OrientedMatroid;
pub use sign::{Sign, SignVector};
