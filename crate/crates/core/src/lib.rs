pub mod arith;
pub mod error;
pub mod json;
pub mod models;
pub mod quotient;
pub mod random;
pub mod star;
pub mod tensor;

pub use error::{Error, Result};
