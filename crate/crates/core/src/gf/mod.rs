//! Finite fields F_{p^f} and integer valuation utilities.

mod field;
pub mod prime_poly;
pub mod valuation;

pub use field::{embedding, Elem, Field};
pub use valuation::{
    epsilon_q, is_fermat_prime, legendre_valuation, valuation, Rational, Valuation,
};
