//! Exact field arithmetic and the rank/kernel computations that every
//! cohomology dimension reduces to.

mod elim;
mod matrix;
mod scalar;

pub use elim::{
    fraction_free_rank, kernel_basis, naive_rational_rank, rank, rank_two_prime_check, RowSpace,
    TwoPrimeRank,
};
pub use matrix::ExactMatrix;
pub use scalar::{is_prime, FieldSpec, Scalar, DEFAULT_PRIMES, MIN_PRIME};
