//! Difference-constraint polytopes in the standard apartment.
//!
//! The region attached to an exponent matrix `nu` is
//! `{x : x_i - x_j <= nu_ij for all i != j, x_0 = 0}`. Each two-sided bound
//! `-nu_ji <= x_i - x_j <= nu_ij` is the pair of one-sided constraints for
//! `(i, j)` and `(j, i)`.
//!
//! Feasibility and extremal differences are computed by Bellman-Ford on the
//! constraint graph (edge `j -> i` of weight `u_ij` for `x_i <= x_j + u_ij`),
//! independently of the min-plus closure in [`crate::exponent`].

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;
use crate::par::Execution;

/// Default cap on the number of lattice points a single enumeration may emit.
pub const DEFAULT_POINT_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferencePolytope {
    n: usize,
    upper: Vec<i64>,
}

/// Integer point normalized so the first coordinate is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    /// Normalizes by subtracting the first coordinate from every entry.
    pub fn normalized(coords: &[i64]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::BadVertex { got: coords.len() });
        }
        let shift = coords[0];
        let coords = coords.iter().map(|c| c.checked_sub(shift).ok_or(Error::Overflow)).collect::<Result<_>>()?;
        Ok(LatticePoint { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl TryFrom<Vec<i64>> for LatticePoint {
    type Error = Error;

    /// Strict: the first coordinate must already be zero.
    fn try_from(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::BadVertex { got: coords.len() });
        }
        if coords[0] != 0 {
            return Err(Error::UnnormalizedPoint(coords[0]));
        }
        Ok(LatticePoint { coords })
    }
}

impl From<LatticePoint> for Vec<i64> {
    fn from(p: LatticePoint) -> Self {
        p.coords
    }
}

/// Region cut out by the constraints of `nu`.
pub fn polytope_of(nu: &ExponentMatrix) -> DifferencePolytope {
    let n = nu.n();
    let upper = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| nu.get(i, j)).collect();
    DifferencePolytope { n, upper }
}

impl DifferencePolytope {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Bound `u_ij` in `x_i - x_j <= u_ij`.
    #[inline]
    pub fn upper(&self, i: usize, j: usize) -> i64 {
        self.upper[i * self.n + j]
    }

    /// Two-sided bounds `(lo, hi)` on `x_i - x_j`.
    pub fn bounds(&self, i: usize, j: usize) -> (i64, i64) {
        (-self.upper(j, i), self.upper(i, j))
    }

    pub fn contains_point(&self, x: &[i64]) -> bool {
        x.len() == self.n
            && x[0] == 0
            && (0..self.n).all(|i| (0..self.n).all(|j| (x[i] as i128 - x[j] as i128) <= self.upper(i, j) as i128))
    }

    /// Bellman-Ford relaxation over all constraint edges. Returns `None` if a
    /// negative cycle is reachable.
    fn relax(&self, mut dist: Vec<Option<i128>>) -> Option<Vec<Option<i128>>> {
        let n = self.n;
        for round in 0..=n {
            let mut changed = false;
            for j in 0..n {
                let Some(dj) = dist[j] else { continue };
                for i in 0..n {
                    if i == j {
                        continue;
                    }
                    let cand = dj + self.upper(i, j) as i128;
                    if dist[i].is_none_or(|di| cand < di) {
                        dist[i] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(dist);
            }
            if round == n {
                return None;
            }
        }
        None
    }

    /// True iff no real point satisfies the constraints. Since the bounds are
    /// integral this is also the integer feasibility answer.
    pub fn is_empty(&self) -> bool {
        self.relax(vec![Some(0); self.n]).is_none()
    }

    /// `max { x_i - x_j : x in P }`, the shortest-path distance from `j` to `i`.
    pub fn max_difference(&self, i: usize, j: usize) -> Result<i64> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange(i, j));
        }
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let mut start = vec![None; self.n];
        start[j] = Some(0);
        let dist = self.relax(start).ok_or(Error::EmptyPolytope)?;
        // the graph is complete, so every node is reached
        let d = dist[i].expect("complete constraint graph");
        i64::try_from(d).map_err(|_| Error::Overflow)
    }

    /// All integer points, in lexicographic order of `(x_1, …, x_{n-1})`.
    pub fn enumerate_lattice_points(&self) -> Result<Vec<LatticePoint>> {
        self.enumerate_with(DEFAULT_POINT_LIMIT, Execution::default())
    }

    /// Enumeration with an explicit point limit and execution mode. The first
    /// free coordinate is split across workers; output order does not depend
    /// on `exec`.
    pub fn enumerate_with(&self, limit: usize, exec: Execution) -> Result<Vec<LatticePoint>> {
        let n = self.n;
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let mut lo = -self.upper(0, 1);
        let mut hi = self.upper(1, 0);
        if (hi as i128 - lo as i128) >= limit as i128 {
            // every value of the exact projection extends to a lattice point
            lo = -self.max_difference(0, 1)?;
            hi = self.max_difference(1, 0)?;
            if (hi as i128 - lo as i128) >= limit as i128 {
                return Err(Error::TooManyPoints { limit });
            }
        }
        let emitted = AtomicUsize::new(0);
        let overflowed = AtomicBool::new(false);
        let firsts: Vec<i64> = (lo..=hi).collect();
        let chunks = exec.map_slice(&firsts, |&x1| {
            let mut x = vec![0i64; n];
            x[1] = x1;
            let mut out = Vec::new();
            self.extend(&mut x, 2, &mut out, limit, &emitted, &overflowed);
            out
        });
        if overflowed.load(Ordering::Relaxed) {
            return Err(Error::TooManyPoints { limit });
        }
        Ok(chunks.into_iter().flatten().collect())
    }

    fn extend(
        &self,
        x: &mut Vec<i64>,
        idx: usize,
        out: &mut Vec<LatticePoint>,
        limit: usize,
        emitted: &AtomicUsize,
        overflowed: &AtomicBool,
    ) {
        if overflowed.load(Ordering::Relaxed) {
            return;
        }
        if idx == self.n {
            if emitted.fetch_add(1, Ordering::Relaxed) >= limit {
                overflowed.store(true, Ordering::Relaxed);
                return;
            }
            out.push(LatticePoint { coords: x.clone() });
            return;
        }
        // range of x[idx] compatible with every assigned coordinate
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for a in 0..idx {
            lo = lo.max(x[a].saturating_sub(self.upper(a, idx)));
            hi = hi.min(x[a].saturating_add(self.upper(idx, a)));
        }
        if lo > hi {
            return;
        }
        for v in lo..=hi {
            x[idx] = v;
            self.extend(x, idx + 1, out, limit, emitted, overflowed);
            if overflowed.load(Ordering::Relaxed) {
                return;
            }
        }
        x[idx] = 0;
    }
}

/// Nonempty, and every bounding hyperplane `x_i - x_j = nu_ij` meets the region.
pub fn is_reduced(nu: &ExponentMatrix) -> bool {
    let p = polytope_of(nu);
    if p.is_empty() {
        return false;
    }
    let n = nu.n();
    (0..n).all(|i| (0..n).all(|j| i == j || p.max_difference(i, j) == Ok(nu.get(i, j))))
}
