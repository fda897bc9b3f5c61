pub mod cli;
pub mod dgalg;
pub mod error;
pub mod exactalg;
pub mod homotopy;
pub mod resolution;
pub mod sampling;
pub mod site;

pub use error::{Error, Result};
