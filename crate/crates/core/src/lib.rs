//! Exact computations on matchings of finite graphs: matching polynomials,
//! matching measures, monomer-dimer entropy and its series expansion, plus a
//! harness that checks the classical inequalities on families of
//! vertex-transitive bipartite graphs.

pub mod degenerate;
pub mod entropy;
pub mod error;
pub mod fmt;
pub mod graphs;
mod intpoly;
pub mod limits;
pub mod polycore;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
