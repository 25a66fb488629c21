//! Exact model of a local field: `Q` with the p-adic valuation, so
//! `O = Z_(p)`, `𝔭 = pO` and the uniformizer is `p` itself.

mod closure;
mod matrix;
mod normal_form;
mod scalar;

pub use closure::{ring_closure_check, ClosureCheck};
pub use matrix::{conjugate, conjugate_inverse, in_split_order, lambda_membership, LocalMatrix};
pub use normal_form::{
    diagonal_conjugates_integral, diagonal_witness, elementary_divisors, hermite_normal_form, smith_exponents,
    HermiteForm,
};
pub use scalar::{
    check_prime, format_rational, parse_rational, prime_power, residue, valuation_of, LocalScalar, Valuation,
};

/// Default prime for the model.
pub const DEFAULT_PRIME: u32 = 2;
