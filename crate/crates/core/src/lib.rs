pub mod boolean;
pub mod circuit;
pub mod error;
pub mod exec;
pub mod matrixalg;
pub mod mlpoly;
pub mod orbits;
pub mod ring;
pub mod selftest;
pub mod symmetric;

pub use error::{Error, Result};
