//! Command-line front end for the star-product library.

pub mod app;
pub mod checks;
pub mod eval;
pub mod expr;
