//! Split orders in matrix algebras over a local field.
//!
//! An exponent matrix `nu` names the set `(p^nu_ij) ⊆ M_n(k)`. This crate
//! decides when that set is an order, computes the smallest order above it,
//! and identifies orders with their convex sets of containing maximal orders
//! in the standard apartment. Matrix-level claims are checked in an exact
//! model of `Q` with the p-adic valuation.

#![allow(clippy::needless_range_loop)]

pub mod apartments;
pub mod correspondence;
pub mod dvr;
pub mod error;
pub mod exponent;
pub mod par;
pub mod polytope;
pub mod rng;
pub mod sample;
pub mod suites;

pub use apartments::{
    divisor_invariance_check, general_membership, incident, intersect_in_apartment, Apartment, GeneralSplitOrder,
};
pub use correspondence::{
    intersect_maximal, maximal_orders_containing, verify_roundtrip, ApartmentVertex, RoundtripReport,
};
pub use error::{Error, Result};
pub use exponent::{ExponentMatrix, ViolatedTriple};
pub use par::Execution;
pub use polytope::{is_reduced, polytope_of, DifferencePolytope, LatticePoint, DEFAULT_POINT_LIMIT};
