//! Arithmetic of ℚ and its completions: factorization, square classes,
//! Legendre and Hilbert symbols.

mod factor;
mod place;
mod symbols;

pub use factor::{factor, is_prime, is_prime_u64, primes_dividing};
pub use place::Place;
pub use symbols::{
    hilbert, is_local_square, legendre, square_class, squarefree_part, valuation, SquareClass,
};
