pub mod connection;
pub mod bgg;
pub mod checks;
pub mod curvature;
pub mod error;
pub mod forms;
pub mod frame;
pub mod generate;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod tractor;

pub use error::{AcafError, Result};
pub use scalar::{q, qi, Field, Ring, Q};
