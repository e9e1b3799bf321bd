pub mod criteria;
pub mod detection;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod modes;
pub mod quadrature;

pub use error::{ConfigError, Error, Result};
