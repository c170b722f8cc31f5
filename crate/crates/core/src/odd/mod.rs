//! The odd symmetric algebras `S(V[1])`, `S(V*[-1])` and the calculus of
//! operators and symbols on them.

pub mod duality;
pub mod element;
pub mod operator;
pub mod symbol;

pub use duality::{contract_coproduct, exterior_coproduct, gamma, zeta};
pub use element::{ExtElement, Side};
pub use operator::{adjoint, full_contract, gram_matrix, i_op, j_op, k_contract, pairing, EndOperator};
pub use symbol::{ad, adbar, bracket_symbol, fl, fr, gl, gr, one_m, p_map, BiSymbol, D1Tensor};
