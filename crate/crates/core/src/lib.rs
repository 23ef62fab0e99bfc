pub mod error;
pub mod harness;
pub mod linalg;
pub mod means;
pub mod order;
pub mod param;
pub mod scalar;

pub use error::{MeanError, Result};
