//! Hermite and Smith normal forms over the valuation ring `O = Z_(p)`.
//!
//! Pivots are chosen by minimal valuation, ties going to the lowest row
//! index. Row operations only ever use multipliers in `O`, so the tracked
//! transform stays in `GL_n(O)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{conjugate_inverse, LocalMatrix};
use super::scalar::{prime_power, residue, valuation_of, Valuation};
use crate::error::{Error, Result};

/// Upper-triangular representative of the coset `GL_n(O) · ξ`: diagonal
/// `p^{m_j}`, and each entry above the diagonal in `{0, …, p^{m_j} - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermiteForm {
    matrix: LocalMatrix,
    exponents: Vec<i64>,
}

impl HermiteForm {
    pub fn matrix(&self) -> &LocalMatrix {
        &self.matrix
    }

    /// Diagonal exponents `m_1, …, m_n`.
    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Accepts a matrix already in canonical shape.
    pub fn from_matrix(matrix: LocalMatrix) -> Result<Self> {
        let n = matrix.n();
        let p = matrix.prime();
        let mut exponents = Vec::with_capacity(n);
        for j in 0..n {
            let Valuation::Finite(m) = matrix.valuation(j, j) else {
                return Err(Error::SingularInput);
            };
            if m < 0 || *matrix.get(j, j) != prime_power(p, m) {
                return Err(Error::NonIntegralInput);
            }
            exponents.push(m);
        }
        let p_big = BigInt::from(p);
        for i in 0..n {
            for j in 0..n {
                let a = matrix.get(i, j);
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Greater => a.is_zero(),
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => {
                        a.is_integer() && *a.numer() >= BigInt::zero() && *a.numer() < p_big.pow(exponents[j] as u32)
                    }
                };
                if !ok {
                    return Err(Error::NonIntegralInput);
                }
            }
        }
        Ok(HermiteForm { matrix, exponents })
    }
}

fn row_axpy(m: &mut [Vec<BigRational>], target: usize, src: usize, f: &BigRational) {
    if f.is_zero() {
        return;
    }
    for k in 0..m[src].len() {
        let t = f * &m[src][k];
        m[target][k] -= t;
    }
}

/// Returns `(H, U)` with `U ∈ GL_n(O)` and `U · ξ = H`.
pub fn hermite_normal_form(xi: &LocalMatrix) -> Result<(HermiteForm, LocalMatrix)> {
    if !xi.is_integral() {
        return Err(Error::NonIntegralInput);
    }
    let n = xi.n();
    let p = xi.prime();
    let mut h = xi.rows();
    let mut u = LocalMatrix::identity(n, p)?.rows();
    let mut exponents = Vec::with_capacity(n);

    for c in 0..n {
        let (r, v) = (c..n)
            .filter_map(|r| valuation_of(&h[r][c], p).finite().map(|v| (r, v)))
            .min_by_key(|&(r, v)| (v, r))
            .ok_or(Error::SingularInput)?;
        h.swap(c, r);
        u.swap(c, r);
        let pv = prime_power(p, v);
        let unit = &pv / &h[c][c];
        for x in h[c].iter_mut().chain(u[c].iter_mut()) {
            *x *= &unit;
        }
        for r in c + 1..n {
            let f = &h[r][c] / &pv;
            row_axpy(&mut h, r, c, &f);
            row_axpy(&mut u, r, c, &f);
        }
        exponents.push(v);
    }

    // reduce above the diagonal, left to right
    for c in 1..n {
        let modulus = prime_power(p, exponents[c]);
        for r in 0..c {
            let rep = BigRational::from_integer(residue(&h[r][c], p, exponents[c] as u32)?);
            let f = (&h[r][c] - rep) / &modulus;
            row_axpy(&mut h, r, c, &f);
            row_axpy(&mut u, r, c, &f);
        }
    }

    let matrix = LocalMatrix::from_rows(h, p)?;
    let transform = LocalMatrix::from_rows(u, p)?;
    Ok((HermiteForm { matrix, exponents }, transform))
}

/// Search `d ∈ {0,1}^n` for a diagonal `D` with `ξ D ξ^{-1} ∉ M_n(O)`.
///
/// Such a `D` exists exactly when the Hermite form is not diagonal.
pub fn diagonal_witness(xi: &HermiteForm) -> Result<LocalMatrix> {
    let m = xi.matrix();
    if m.is_diagonal() {
        return Err(Error::AlreadyDiagonal);
    }
    let n = m.n();
    for mask in 0u64..(1 << n) {
        let d = LocalMatrix::diag(
            (0..n).map(|i| if mask >> i & 1 == 1 { BigRational::one() } else { BigRational::zero() }).collect(),
            m.prime(),
        )?;
        if !conjugate_inverse(m, &d)?.is_integral() {
            return Ok(d);
        }
    }
    Err(Error::AlreadyDiagonal)
}

/// Whether `ξ D ξ^{-1}` is integral for every `D = diag(d)`, `d ∈ {0,1}^n`.
pub fn diagonal_conjugates_integral(xi: &LocalMatrix) -> Result<bool> {
    let n = xi.n();
    for mask in 0u64..(1 << n) {
        let d = LocalMatrix::diag(
            (0..n).map(|i| if mask >> i & 1 == 1 { BigRational::one() } else { BigRational::zero() }).collect(),
            xi.prime(),
        )?;
        if !conjugate_inverse(xi, &d)?.is_integral() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Valuations of the Smith form of a square matrix, sorted ascending.
pub fn smith_exponents(m: &LocalMatrix) -> Result<Vec<i64>> {
    let n = m.n();
    let p = m.prime();
    let mut a = m.rows();
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for r in t..n {
            for c in t..n {
                if let Valuation::Finite(v) = valuation_of(&a[r][c], p) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let (v, r, c) = best.ok_or(Error::SingularInput)?;
        a.swap(t, r);
        for row in a.iter_mut() {
            row.swap(t, c);
        }
        let piv = a[t][t].clone();
        for r in t + 1..n {
            let f = &a[r][t] / &piv;
            row_axpy(&mut a, r, t, &f);
        }
        for c in t + 1..n {
            let f = &a[t][c] / &piv;
            if f.is_zero() {
                continue;
            }
            for row in a.iter_mut() {
                let x = &f * &row[t];
                row[c] -= x;
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    Ok(out)
}

/// Elementary divisors `{L : L'}` for lattices given by column bases:
/// the Smith exponents of the change of basis `L^{-1} L'`.
pub fn elementary_divisors(l: &LocalMatrix, l_prime: &LocalMatrix) -> Result<Vec<i64>> {
    let inv = l.inverse().ok_or(Error::SingularInput)?;
    if l_prime.inverse().is_none() {
        return Err(Error::SingularInput);
    }
    smith_exponents(&inv.mul(l_prime)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::matrix::big;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn diagonal_is_fixed() {
        for p in [2, 3, 5] {
            let xi = LocalMatrix::diag_powers(&[1, 0, 3], p).unwrap();
            let (h, u) = hermite_normal_form(&xi).unwrap();
            assert_eq!(h.matrix(), &xi);
            assert_eq!(h.exponents(), &[1, 0, 3]);
            assert_eq!(u, LocalMatrix::identity(3, p).unwrap());
        }
    }

    #[test]
    fn already_canonical() {
        for p in [2, 3, 5] {
            let xi = LocalMatrix::from_ints(&[vec![p as i64, 1], vec![0, p as i64]], p).unwrap();
            let (h, _) = hermite_normal_form(&xi).unwrap();
            assert_eq!(h.matrix(), &xi);
            assert!(HermiteForm::from_matrix(xi).is_ok());
        }
    }

    #[test]
    fn reduces_general_input() {
        let p = 2;
        let xi = LocalMatrix::from_ints(&[vec![3, 5, 2], vec![6, 4, 8], vec![1, 1, 1]], p).unwrap();
        let (h, u) = hermite_normal_form(&xi).unwrap();
        assert!(u.is_unimodular());
        assert_eq!(&u.mul(&xi).unwrap(), h.matrix());
        assert!(HermiteForm::from_matrix(h.matrix().clone()).is_ok());
        // det = 2
        assert_eq!(h.exponents().iter().sum::<i64>(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let frac = LocalMatrix::from_rows(vec![vec![q(1, 2), big(0)], vec![big(0), big(1)]], 2).unwrap();
        assert_eq!(hermite_normal_form(&frac), Err(Error::NonIntegralInput));
        let sing = LocalMatrix::from_ints(&[vec![2, 4], vec![1, 2]], 2).unwrap();
        assert_eq!(hermite_normal_form(&sing), Err(Error::SingularInput));
        // residue out of range
        let bad = LocalMatrix::from_ints(&[vec![1, 2], vec![0, 2]], 2).unwrap();
        assert!(HermiteForm::from_matrix(bad).is_err());
    }

    #[test]
    fn witness_two_by_two() {
        let p = 2;
        let h = HermiteForm::from_matrix(LocalMatrix::from_ints(&[vec![1, 1], vec![0, 2]], p).unwrap()).unwrap();
        let d = diagonal_witness(&h).unwrap();
        assert_eq!(d, LocalMatrix::diag(vec![big(1), big(0)], p).unwrap());
        let c = conjugate_inverse(h.matrix(), &d).unwrap();
        // (a_12 / p^{m_2}) (d_2 - d_1)
        assert_eq!(c.get(0, 1), &q(-1, 2));
        let diag = HermiteForm::from_matrix(LocalMatrix::diag_powers(&[2, 1], p).unwrap()).unwrap();
        assert_eq!(diagonal_witness(&diag), Err(Error::AlreadyDiagonal));
        assert!(diagonal_conjugates_integral(diag.matrix()).unwrap());
    }

    #[test]
    fn divisors() {
        let p = 2;
        let l = LocalMatrix::identity(2, p).unwrap();
        let lp = LocalMatrix::diag_powers(&[1, 2], p).unwrap();
        assert_eq!(elementary_divisors(&l, &lp).unwrap(), vec![1, 2]);
        assert_eq!(elementary_divisors(&lp, &lp).unwrap(), vec![0, 0]);
        let mixed = LocalMatrix::from_ints(&[vec![2, 1], vec![0, 2]], p).unwrap();
        // det 4, gcd of entries 1
        assert_eq!(elementary_divisors(&l, &mixed).unwrap(), vec![0, 2]);
        let sing = LocalMatrix::from_ints(&[vec![1, 1], vec![1, 1]], p).unwrap();
        assert_eq!(elementary_divisors(&l, &sing), Err(Error::SingularInput));
    }
}
