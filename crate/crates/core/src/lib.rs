//! Compile quantum circuits into tensor-network skeletons and monotone
//! arithmetic circuits, build the permanent instance and its bound, and
//! compile CNF formulas into reversible and counting quantum circuits.

pub mod circuit;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod monotone;
pub mod network;
pub mod permanent;
pub mod poly;
pub mod sat;
pub mod sim;
pub mod skeleton;

pub use error::{Error, Result};
