use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// p-adic valuation of a rational; zero has valuation `Infinite`.
///
/// `Finite(_) < Infinite`, so `min` and comparisons follow the usual
/// conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= bound` with `Infinite` above every integer.
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn check_prime(p: u32) -> Result<u32> {
    if p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Multiplicity of `p` in a nonzero integer.
fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn valuation_of(x: &BigRational, p: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// `p^e` as a rational, for any integer `e`.
pub fn prime_power(p: u32, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// Canonical residue of `x ∈ O` modulo `p^m`, in `{0, …, p^m - 1}`.
pub fn residue(x: &BigRational, p: u32, m: u32) -> Result<BigInt> {
    if !valuation_of(x, p).at_least(0) {
        return Err(Error::NonIntegralInput);
    }
    let modulus = BigInt::from(p).pow(m);
    if modulus.is_one() {
        return Ok(BigInt::zero());
    }
    let den = x.denom().mod_floor(&modulus);
    let inv = den.extended_gcd(&modulus).x;
    Ok((x.numer() * inv).mod_floor(&modulus))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Always `num/den`, with the denominator positive.
pub fn format_rational(x: &BigRational) -> String {
    debug_assert!(x.denom().is_positive());
    format!("{}/{}", x.numer(), x.denom())
}

/// An element of `Q` seen through its p-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalScalar {
    value: BigRational,
    prime: u32,
}

impl LocalScalar {
    pub fn new(value: BigRational, prime: u32) -> Result<Self> {
        Ok(LocalScalar { value, prime: check_prime(prime)? })
    }

    pub fn from_int(value: i64, prime: u32) -> Result<Self> {
        Self::new(BigRational::from_integer(value.into()), prime)
    }

    /// `u · p^e`.
    pub fn scaled_power(u: i64, e: i64, prime: u32) -> Result<Self> {
        Self::new(BigRational::from_integer(u.into()) * prime_power(prime, e), prime)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        valuation_of(&self.value, self.prime)
    }

    /// In the valuation ring `O`.
    pub fn is_integral(&self) -> bool {
        self.valuation().at_least(0)
    }

    /// In the ideal `p^m O`.
    pub fn in_ideal(&self, m: i64) -> bool {
        self.valuation().at_least(m)
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(LocalScalar { value: &self.value + &other.value, prime: self.prime })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(LocalScalar { value: &self.value * &other.value, prime: self.prime })
    }
}

impl fmt::Display for LocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
