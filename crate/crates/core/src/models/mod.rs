//! Companion phase spaces: radial functions, flat space, the torus and the
//! Poincaré disk.

pub mod disk;
pub mod flat;
pub mod radial;
pub mod torus;
