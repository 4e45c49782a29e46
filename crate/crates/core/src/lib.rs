pub mod cli;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod premetric;
pub mod quantale;
pub mod solvers;
pub mod synth;

pub use error::{Error, Result};
pub use quantale::QValue;
