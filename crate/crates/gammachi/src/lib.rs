pub mod arith;
pub mod complexes;
pub mod error;
pub mod gamma;
pub mod limits;
pub mod ratio;
pub mod submeasure;

pub use error::{Error, Result};
