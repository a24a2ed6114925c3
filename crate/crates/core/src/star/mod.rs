//! The star product on symbols, the filtered algebra of structured
//! ν-polynomials closed under it, and the identities it satisfies.

mod element;
mod product;
mod series;

pub use element::{extract_structure, StarElement};
pub use product::{
    check_corollary2, check_strong_invariance, poisson_bracket_deg1, star_coefficient, star_commutator,
    star_symbols, star_u, symbol_power, StarTerm, SymbolStarResult,
};
pub use series::RawNuSeries;
