//! DCJ-indel distance of natural genomes: genome model, relational and
//! multi-relational diagrams, the closed formula for singular genomes, an ILP
//! generator for the general case, an exhaustive reference solver and a
//! genome evolution simulator.

pub mod decomposition;
pub mod diagram;
pub mod error;
pub mod exact;
pub mod genome;
pub mod ilp;
pub mod sim;
pub mod singular;

pub use error::{Error, ParseError, Result};
