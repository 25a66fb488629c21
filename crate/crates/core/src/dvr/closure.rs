use serde::{Deserialize, Serialize};

use super::matrix::{in_split_order, LocalMatrix};
use super::scalar::prime_power;
use crate::error::Result;
use crate::exponent::{ExponentMatrix, ViolatedTriple};
use crate::rng::seeded;
use crate::sample::sharp_element;

/// Result of testing closure of `(p^nu_ij)` under multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureCheck {
    /// Every sampled product stayed inside.
    Closed { trials: u64 },
    /// `a · b` falls outside the set. `triple` is set when the pair was built
    /// from a violated triangle inequality.
    Counterexample { a: LocalMatrix, b: LocalMatrix, triple: Option<ViolatedTriple> },
}

impl ClosureCheck {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureCheck::Closed { .. })
    }
}

/// For a non-order, returns `A = p^{nu_ik} E^(i,k)` and `B = p^{nu_kj} E^(k,j)`
/// from the first violated triple. Otherwise multiplies `trials` random
/// pairs of sharp-valuation elements and checks each product.
pub fn ring_closure_check(nu: &ExponentMatrix, prime: u32, trials: u64, seed: u64) -> Result<ClosureCheck> {
    let n = nu.n();
    if let Some(t) = nu.violated_triple() {
        let a = LocalMatrix::unit(n, t.i, t.k, prime_power(prime, nu.get(t.i, t.k)), prime)?;
        let b = LocalMatrix::unit(n, t.k, t.j, prime_power(prime, nu.get(t.k, t.j)), prime)?;
        return Ok(ClosureCheck::Counterexample { a, b, triple: Some(t) });
    }
    let mut rng = seeded(seed);
    for _ in 0..trials {
        let a = sharp_element(&mut rng, nu, prime)?;
        let b = sharp_element(&mut rng, nu, prime)?;
        if !in_split_order(&a.mul(&b)?, nu)? {
            return Ok(ClosureCheck::Counterexample { a, b, triple: None });
        }
    }
    Ok(ClosureCheck::Closed { trials })
}
