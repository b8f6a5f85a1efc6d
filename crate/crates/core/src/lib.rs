pub mod error;
pub mod measure;
pub mod model;
pub mod particle;
pub mod pde;
pub mod quadrature;
pub mod roots;
pub mod scenario;
pub mod stationary;

pub use error::{Error, Result};
