//! Exponent matrices of orders containing the diagonal ring.
//!
//! A matrix `nu` with zero diagonal stands for the set of matrices whose
//! `(i, j)` entry lies in `p^nu[i][j] O`. All indices in this module are
//! zero-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer exponent matrix with zero diagonal, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ExponentMatrixRepr", into = "ExponentMatrixRepr")]
pub struct ExponentMatrix {
    n: usize,
    entries: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ExponentMatrixRepr {
    n: usize,
    nu: Vec<Vec<i64>>,
}

impl TryFrom<ExponentMatrixRepr> for ExponentMatrix {
    type Error = Error;

    fn try_from(repr: ExponentMatrixRepr) -> Result<Self> {
        let m = ExponentMatrix::new(repr.nu)?;
        if m.n != repr.n {
            return Err(Error::DimensionMismatch { expected: repr.n, got: m.n });
        }
        Ok(m)
    }
}

impl From<ExponentMatrix> for ExponentMatrixRepr {
    fn from(m: ExponentMatrix) -> Self {
        ExponentMatrixRepr { n: m.n, nu: m.rows() }
    }
}

/// A triple witnessing failure of `nu[i][k] + nu[k][j] >= nu[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatedTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadShape { rows: n, cols: rows.iter().map(Vec::len).collect() });
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != 0 {
                return Err(Error::NonZeroDiagonal { index: i, value: row[i] });
            }
        }
        Ok(ExponentMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    /// The zero matrix, i.e. the maximal order `M_n(O)`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![vec![0; n]; n])
    }

    /// Builds a matrix from a closure over off-diagonal positions.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { f(i, j) }).collect()).collect();
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &ExponentMatrix) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// First triple in lexicographic `(i, j, k)` order violating the
    /// triangle inequality, or `None` when the matrix describes an order.
    pub fn violated_triple(&self) -> Option<ViolatedTriple> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // i128 so the check itself can never overflow
                    let lhs = self.get(i, k) as i128 + self.get(k, j) as i128;
                    if lhs < self.get(i, j) as i128 {
                        return Some(ViolatedTriple { i, j, k });
                    }
                }
            }
        }
        None
    }

    /// Whether the set `(p^nu_ij)` is closed under multiplication.
    pub fn is_order(&self) -> bool {
        self.violated_triple().is_none()
    }

    /// Whether some maximal order of the standard apartment contains the set.
    ///
    /// This is the full cycle condition (every directed cycle has nonnegative
    /// weight), not only the two-cycle test `nu_ij + nu_ji >= 0`.
    pub fn has_containing_maximal(&self) -> bool {
        !matches!(self.order_hull(), Err(Error::NegativeCycle))
    }

    /// Min-plus closure: `mu_ij` is the least path sum from `i` to `j`.
    ///
    /// The result is the largest order whose exponents are dominated by
    /// `self`, and it cuts out the same polytope.
    pub fn order_hull(&self) -> Result<ExponentMatrix> {
        let n = self.n;
        let mut d = self.entries.clone();
        for k in 0..n {
            for i in 0..n {
                let dik = d[i * n + k];
                for j in 0..n {
                    let via = dik.checked_add(d[k * n + j]).ok_or(Error::Overflow)?;
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
                if d[i * n + i] < 0 {
                    return Err(Error::NegativeCycle);
                }
            }
        }
        if (0..n).any(|i| d[i * n + i] < 0) {
            return Err(Error::NegativeCycle);
        }
        Ok(ExponentMatrix { n, entries: d })
    }

    /// Level of a two-dimensional order: `nu_12 + nu_21`, the length of the
    /// tree geodesic. The order is conjugate to `(O O; p^level O)`.
    pub fn hijikata_normal_form(&self) -> Result<u64> {
        if self.n != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.n });
        }
        if !self.is_order() {
            return Err(Error::NotAnOrder);
        }
        let level = self.get(0, 1).checked_add(self.get(1, 0)).ok_or(Error::Overflow)?;
        Ok(level as u64)
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.entries.chunks(self.n).enumerate() {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
