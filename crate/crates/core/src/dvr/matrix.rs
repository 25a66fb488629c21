use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{check_prime, format_rational, parse_rational, prime_power, valuation_of, LocalScalar, Valuation};
use crate::correspondence::ApartmentVertex;
use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;

/// Square matrix over `Q` with a fixed prime for valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LocalMatrixRepr", into = "LocalMatrixRepr")]
pub struct LocalMatrix {
    prime: u32,
    n: usize,
    entries: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct LocalMatrixRepr {
    prime: u32,
    entries: Vec<Vec<String>>,
}

impl TryFrom<LocalMatrixRepr> for LocalMatrix {
    type Error = Error;

    fn try_from(r: LocalMatrixRepr) -> Result<Self> {
        LocalMatrix::from_strings(&r.entries, r.prime)
    }
}

impl From<LocalMatrix> for LocalMatrixRepr {
    fn from(m: LocalMatrix) -> Self {
        LocalMatrixRepr { prime: m.prime, entries: m.to_strings() }
    }
}

impl LocalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>, prime: u32) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(LocalMatrix { prime: check_prime(prime)?, n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[Vec<i64>], prime: u32) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
            prime,
        )
    }

    pub fn from_strings(rows: &[Vec<String>], prime: u32) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed, prime)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.chunks(self.n).map(|r| r.iter().map(format_rational).collect()).collect()
    }

    pub fn from_fn(n: usize, prime: u32, mut f: impl FnMut(usize, usize) -> BigRational) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotSquare);
        }
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Ok(LocalMatrix { prime: check_prime(prime)?, n, entries })
    }

    pub fn zero(n: usize, prime: u32) -> Result<Self> {
        Self::from_fn(n, prime, |_, _| BigRational::zero())
    }

    pub fn identity(n: usize, prime: u32) -> Result<Self> {
        Self::from_fn(n, prime, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    /// Matrix unit `E^(i,j)` scaled by `c`.
    pub fn unit(n: usize, i: usize, j: usize, c: BigRational, prime: u32) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(i, j));
        }
        let mut m = Self::zero(n, prime)?;
        m.entries[i * n + j] = c;
        Ok(m)
    }

    pub fn diag(values: Vec<BigRational>, prime: u32) -> Result<Self> {
        let n = values.len();
        let mut m = Self::zero(n, prime)?;
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        Ok(m)
    }

    /// `diag(p^e_1, …, p^e_n)`.
    pub fn diag_powers(exps: &[i64], prime: u32) -> Result<Self> {
        Self::diag(exps.iter().map(|&e| prime_power(prime, e)).collect(), prime)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn scalar(&self, i: usize, j: usize) -> LocalScalar {
        LocalScalar::new(self.get(i, j).clone(), self.prime).expect("prime validated at construction")
    }

    pub fn valuation(&self, i: usize, j: usize) -> Valuation {
        valuation_of(self.get(i, j), self.prime)
    }

    pub fn is_integral(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.valuation(i, j).at_least(0)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // one reduction per entry instead of one per term
                let mut num = BigInt::zero();
                let mut den = BigInt::one();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let tn = a.numer() * b.numer();
                    let td = a.denom() * b.denom();
                    num = num * &td + tn * &den;
                    den *= td;
                }
                out.push(BigRational::new(num, den));
            }
        }
        Ok(LocalMatrix { prime: self.prime, n, entries: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(LocalMatrix { prime: self.prime, n: self.n, entries })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        LocalMatrix { prime: self.prime, n: self.n, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    /// Exact Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self.entries.chunks(n).map(<[_]>::to_vec).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for c in 0..n {
            let r = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, r);
            inv.swap(c, r);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut().chain(inv[c].iter_mut()) {
                *x /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Some(LocalMatrix { prime: self.prime, n, entries: inv.into_iter().flatten().collect() })
    }

    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self.entries.chunks(n).map(<[_]>::to_vec).collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if r != c {
                a.swap(c, r);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    /// In `GL_n(O)`: integral with a unit determinant.
    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && valuation_of(&self.det(), self.prime) == Valuation::Finite(0)
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n).map(<[_]>::to_vec).collect()
    }
}

impl fmt::Display for LocalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}] (p = {})", rows.join("; "), self.prime)
    }
}

/// `ξ^{-1} A ξ`.
pub fn conjugate(xi: &LocalMatrix, a: &LocalMatrix) -> Result<LocalMatrix> {
    xi.compatible(a)?;
    let inv = xi.inverse().ok_or(Error::SingularConjugator)?;
    inv.mul(a)?.mul(xi)
}

/// `ξ A ξ^{-1}`, the opposite orientation of [`conjugate`].
pub fn conjugate_inverse(xi: &LocalMatrix, a: &LocalMatrix) -> Result<LocalMatrix> {
    xi.compatible(a)?;
    let inv = xi.inverse().ok_or(Error::SingularConjugator)?;
    xi.mul(a)?.mul(&inv)
}

/// `v_p(A_ij) >= nu_ij` for all entries.
pub fn in_split_order(a: &LocalMatrix, nu: &ExponentMatrix) -> Result<bool> {
    if a.n() != nu.n() {
        return Err(Error::DimensionMismatch { expected: nu.n(), got: a.n() });
    }
    let n = a.n();
    Ok((0..n).all(|i| (0..n).all(|j| a.valuation(i, j).at_least(nu.get(i, j)))))
}

/// Membership in the maximal order `Λ(m)`: `v_p(A_ij) >= m_i - m_j`.
pub fn lambda_membership(a: &LocalMatrix, v: &ApartmentVertex) -> Result<bool> {
    if a.n() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: a.n() });
    }
    let m = v.coords();
    let n = a.n();
    Ok((0..n).all(|i| (0..n).all(|j| a.valuation(i, j).at_least(m[i] - m[j]))))
}

#[cfg(test)]
pub(crate) fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
