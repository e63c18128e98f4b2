pub mod cli;
pub mod error;
pub mod lattice;
pub mod number_theory;
pub mod phase_space;
pub mod report;
pub mod representations;
pub mod statefile;
pub mod suite;

pub use error::{Error, Result};
