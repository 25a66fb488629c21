//! Random test objects: exponent matrices, vertex sets, and matrices over
//! the local model with controlled valuations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::correspondence::ApartmentVertex;
use crate::dvr::{prime_power, HermiteForm, LocalMatrix};
use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;

/// Off-diagonal entries uniform in `[lo, hi]`.
pub fn exponent_matrix<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Result<ExponentMatrix> {
    ExponentMatrix::from_fn(n, |_, _| rng.random_range(lo..=hi))
}

/// `count` vertices with coordinates uniform in `[lo, hi]` (then normalized).
pub fn vertices<R: Rng>(rng: &mut R, n: usize, count: usize, lo: i64, hi: i64) -> Result<Vec<ApartmentVertex>> {
    (0..count)
        .map(|_| {
            let c: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
            ApartmentVertex::new(&c)
        })
        .collect()
}

/// Integer in `[1, max]` prime to `p`.
pub fn unit_int<R: Rng>(rng: &mut R, p: u32, max: i64) -> i64 {
    loop {
        let u = rng.random_range(1..=max.max(1));
        if u % p as i64 != 0 {
            return u;
        }
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Element of `GL_n(O)`: a product of integral elementary matrices, a
/// diagonal of units, and a random row swap.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, p: u32) -> Result<LocalMatrix> {
    let bound = (p * p) as i64;
    let mut u = LocalMatrix::diag(
        (0..n)
            .map(|_| {
                let s = if rng.random_bool(0.5) { 1 } else { -1 };
                rat(s * unit_int(rng, p, bound))
            })
            .collect(),
        p,
    )?;
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let mut e = LocalMatrix::identity(n, p)?;
        e.set(i, j, rat(rng.random_range(-bound..=bound)));
        u = e.mul(&u)?;
    }
    if n > 1 && rng.random_bool(0.5) {
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        let mut rows = u.rows();
        rows.swap(i, j);
        u = LocalMatrix::from_rows(rows, p)?;
    }
    Ok(u)
}

/// Element of `GL_n(k)`: unimodular · diag(p^e) · unimodular, with
/// `e_i ∈ [-2, 2]`, times an elementary matrix with a non-integral entry.
pub fn gamma<R: Rng>(rng: &mut R, n: usize, p: u32) -> Result<LocalMatrix> {
    let exps: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
    let mid = LocalMatrix::diag_powers(&exps, p)?;
    let mut g = unimodular(rng, n, p)?.mul(&mid)?.mul(&unimodular(rng, n, p)?)?;
    if n > 1 {
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        let mut e = LocalMatrix::identity(n, p)?;
        e.set(i, j, rat(unit_int(rng, p, p as i64 * 2)) * prime_power(p, -rng.random_range(0..=2)));
        g = g.mul(&e)?;
    }
    Ok(g)
}

/// Hermite form with diagonal exponents in `[0, max_exp]` and uniformly
/// random residues above the diagonal. With `off_diagonal`, at least one
/// entry above the diagonal is nonzero (which needs some `m_j > 0`, `j > 0`).
pub fn hermite_form<R: Rng>(rng: &mut R, n: usize, p: u32, max_exp: i64, off_diagonal: bool) -> Result<HermiteForm> {
    if off_diagonal && (max_exp < 1 || n < 2) {
        return Err(Error::AlreadyDiagonal);
    }
    loop {
        let exps: Vec<i64> = (0..n).map(|_| rng.random_range(0..=max_exp)).collect();
        let mut m = LocalMatrix::diag_powers(&exps, p)?;
        for j in 1..n {
            let modulus = (p as i64).pow(exps[j] as u32);
            for i in 0..j {
                m.set(i, j, rat(rng.random_range(0..modulus)));
            }
        }
        if off_diagonal && m.is_diagonal() {
            continue;
        }
        return HermiteForm::from_matrix(m);
    }
}

/// Matrix in `M_n(O)`: integer numerators in `[-p^3, p^3]` over unit
/// denominators.
pub fn integral_matrix<R: Rng>(rng: &mut R, n: usize, p: u32) -> Result<LocalMatrix> {
    let bound = (p as i64).pow(3);
    LocalMatrix::from_fn(n, p, |_, _| {
        let num = rng.random_range(-bound..=bound);
        BigRational::new(num.into(), unit_int(rng, p, p as i64 + 1).into())
    })
}

/// Entries `±u p^v`, `v` uniform in `[vlo, vhi]`, zero with probability 1/8.
pub fn local_matrix<R: Rng>(rng: &mut R, n: usize, p: u32, vlo: i64, vhi: i64) -> Result<LocalMatrix> {
    LocalMatrix::from_fn(n, p, |_, _| {
        if rng.random_range(0..8) == 0 {
            return BigRational::zero();
        }
        let s = if rng.random_bool(0.5) { 1 } else { -1 };
        rat(s * unit_int(rng, p, p as i64 * p as i64)) * prime_power(p, rng.random_range(vlo..=vhi))
    })
}

/// Element of `(p^nu_ij)` with every entry of valuation exactly `nu_ij`:
/// `u p^nu_ij`, `u` uniform in `[1, p^4]` and prime to `p`.
pub fn sharp_element<R: Rng>(rng: &mut R, nu: &ExponentMatrix, p: u32) -> Result<LocalMatrix> {
    let max = (p as i64).pow(4);
    LocalMatrix::from_fn(nu.n(), p, |i, j| rat(unit_int(rng, p, max)) * prime_power(p, nu.get(i, j)))
}

/// Element of `(p^nu_ij)` whose entries sit at valuation `nu_ij`, one
/// higher, or are zero.
pub fn element_of<R: Rng>(rng: &mut R, nu: &ExponentMatrix, p: u32) -> Result<LocalMatrix> {
    LocalMatrix::from_fn(nu.n(), p, |i, j| match rng.random_range(0..6) {
        0 => BigRational::zero(),
        k => {
            let s = if rng.random_bool(0.5) { 1 } else { -1 };
            rat(s * unit_int(rng, p, p as i64 * p as i64)) * prime_power(p, nu.get(i, j) + (k % 2) as i64)
        }
    })
}

/// The idempotents `E^(i,i)`, which generate the diagonal ring `R` over `O`.
pub fn diagonal_idempotents(n: usize, p: u32) -> Result<Vec<LocalMatrix>> {
    (0..n).map(|i| LocalMatrix::unit(n, i, i, BigRational::one(), p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::{in_split_order, Valuation};
    use crate::rng::seeded;

    #[test]
    fn generators_respect_contracts() {
        let mut rng = seeded(11);
        for p in [2, 3, 5] {
            for n in 2..=3 {
                let u = unimodular(&mut rng, n, p).unwrap();
                assert!(u.is_unimodular());
                let g = gamma(&mut rng, n, p).unwrap();
                assert!(g.inverse().is_some());
                assert!(integral_matrix(&mut rng, n, p).unwrap().is_integral());
                let h = hermite_form(&mut rng, n, p, 3, true).unwrap();
                assert!(!h.matrix().is_diagonal());
                let nu = exponent_matrix(&mut rng, n, -3, 5).unwrap();
                let a = sharp_element(&mut rng, &nu, p).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(a.valuation(i, j), Valuation::Finite(nu.get(i, j)));
                    }
                }
                assert!(in_split_order(&element_of(&mut rng, &nu, p).unwrap(), &nu).unwrap());
            }
        }
    }
}
