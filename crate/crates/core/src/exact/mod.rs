//! Exact scalars: cyclotomic numbers, finite fields, tame symbols and Gauss sums.

mod cyclo;
mod field;
mod symbol;

pub use cyclo::{cyclotomic_polynomial, rational, totient, Cyclo};
pub use field::{prime_power, Fq};
pub use symbol::{epsilon, gauss_sum, hilbert_symbol, symbol_gauss_sum, TameElement};
