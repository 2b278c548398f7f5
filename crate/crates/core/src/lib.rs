pub mod asymptotics;
pub mod cli;
pub mod dantzig;
pub mod error;
pub mod geometry;
pub mod kkt;
pub mod lasso;
pub mod linalg;
pub mod lp;
pub mod random;
pub mod stats;
pub mod uniqueness;

pub use error::{Error, Result};
