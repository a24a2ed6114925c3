//! Berezin-Rawnsley symbols as symmetric coefficient tensors, and the
//! bidifferential operators M_r that drive the star product.

mod bipoly;
mod contract;
mod multi_index;
mod oracle;
mod symbol;

pub use bipoly::{BiPoly, Monomial};
pub use contract::{contract_m, operator_product};
pub use multi_index::MultiIndex;
pub use oracle::brute_force_m;
pub use symbol::{
    embed, eval_symbol, identity_symbol, pointwise_mul, reduce_degree, symmetrize, SymbolTensor,
};
