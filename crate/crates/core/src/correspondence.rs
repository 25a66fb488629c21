//! The two maps between reduced exponent matrices and polytopes of vertices
//! in the standard apartment, and a round-trip check that they are inverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;
use crate::polytope::{is_reduced, polytope_of, LatticePoint};

/// A vertex `[0, m_2, …, m_n]` of the standard apartment, i.e. the maximal
/// order `Λ(m)` with `(i, j)` exponent `m_i - m_j`.
///
/// Coordinates are taken modulo `(1, …, 1)`; construction subtracts `m_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ApartmentVertex {
    m: Vec<i64>,
}

impl ApartmentVertex {
    pub fn new(coords: &[i64]) -> Result<Self> {
        let p = LatticePoint::normalized(coords)?;
        Ok(ApartmentVertex { m: p.coords().to_vec() })
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::new(&vec![0; n])
    }

    pub fn coords(&self) -> &[i64] {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// `nu_ij = m_i - m_j`.
    pub fn maximal_order_exponents(&self) -> Result<ExponentMatrix> {
        let m = &self.m;
        let mut overflow = false;
        let nu = ExponentMatrix::from_fn(m.len(), |i, j| {
            m[i].checked_sub(m[j]).unwrap_or_else(|| {
                overflow = true;
                0
            })
        })?;
        if overflow {
            return Err(Error::Overflow);
        }
        Ok(nu)
    }

    /// Whether `Λ(m)` contains `(p^nu_ij)`: `m_i - m_j <= nu_ij` for all pairs.
    pub fn contains(&self, nu: &ExponentMatrix) -> bool {
        nu.n() == self.dim() && polytope_of(nu).contains_point(&self.m)
    }
}

impl TryFrom<Vec<i64>> for ApartmentVertex {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(&v)
    }
}

impl From<ApartmentVertex> for Vec<i64> {
    fn from(v: ApartmentVertex) -> Self {
        v.m
    }
}

impl From<LatticePoint> for ApartmentVertex {
    fn from(p: LatticePoint) -> Self {
        ApartmentVertex { m: p.into() }
    }
}

/// Exponent matrix of the intersection `⋂ Λ(m^(k))`: entrywise maximum of
/// `m_i - m_j` over the vertices.
pub fn intersect_maximal(vertices: &[ApartmentVertex]) -> Result<ExponentMatrix> {
    let first = vertices.first().ok_or(Error::EmptyVertexList)?;
    let n = first.dim();
    if let Some(bad) = vertices.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.dim() });
    }
    let mut mu = vec![vec![i64::MIN; n]; n];
    for v in vertices {
        let m = v.coords();
        for i in 0..n {
            for j in 0..n {
                let d = m[i].checked_sub(m[j]).ok_or(Error::Overflow)?;
                mu[i][j] = mu[i][j].max(d);
            }
        }
    }
    ExponentMatrix::new(mu)
}

/// All maximal orders of the standard apartment containing `(p^nu_ij)`: the
/// lattice points of the polytope of `nu`, in lexicographic order.
pub fn maximal_orders_containing(nu: &ExponentMatrix) -> Result<Vec<ApartmentVertex>> {
    Ok(polytope_of(nu).enumerate_lattice_points()?.into_iter().map(ApartmentVertex::from).collect())
}

/// Outcome of pushing a matrix through polytope → vertices → intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub input: ExponentMatrix,
    pub hull: ExponentMatrix,
    pub is_order: bool,
    pub is_reduced: bool,
    /// Intersection of the maximal orders containing the hull.
    pub reconstructed: ExponentMatrix,
    /// `reconstructed == hull`.
    pub hull_roundtrip: bool,
    /// `reconstructed == input`.
    pub fixed_point: bool,
    /// A reduced input comes back unchanged.
    pub reduced_fixed: bool,
    /// Vertices of the (common) polytope of the input and its hull.
    pub vertices: Vec<ApartmentVertex>,
}

impl RoundtripReport {
    /// `hull_roundtrip` and `reduced_fixed` both hold.
    pub fn passed(&self) -> bool {
        self.hull_roundtrip && self.reduced_fixed
    }
}

pub fn verify_roundtrip(nu: &ExponentMatrix) -> Result<RoundtripReport> {
    let hull = nu.order_hull()?;
    let vertices = maximal_orders_containing(&hull)?;
    let reconstructed = intersect_maximal(&vertices)?;
    let reduced = is_reduced(nu);
    let fixed_point = reconstructed == *nu;
    Ok(RoundtripReport {
        input: nu.clone(),
        is_order: nu.is_order(),
        is_reduced: reduced,
        hull_roundtrip: reconstructed == hull,
        fixed_point,
        reduced_fixed: !reduced || fixed_point,
        hull,
        reconstructed,
        vertices,
    })
}
