//! Split orders outside the standard apartment.
//!
//! An apartment is given by a change of basis `γ` taking the standard basis
//! `e_i` to a frame basis `f_i`. The vertex `m` of that apartment is the
//! lattice `⊕ O p^{m_i} f_i`, whose endomorphism ring is `γ Λ(m) γ^{-1}`.

use serde::{Deserialize, Serialize};

use crate::correspondence::{intersect_maximal, ApartmentVertex};
use crate::dvr::{elementary_divisors, in_split_order, lambda_membership, LocalMatrix};
use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;
use crate::polytope::is_reduced;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apartment {
    gamma: LocalMatrix,
    gamma_inv: LocalMatrix,
}

impl Apartment {
    pub fn new(gamma: LocalMatrix) -> Result<Self> {
        let gamma_inv = gamma.inverse().ok_or(Error::SingularConjugator)?;
        Ok(Apartment { gamma, gamma_inv })
    }

    pub fn standard(n: usize, prime: u32) -> Result<Self> {
        Self::new(LocalMatrix::identity(n, prime)?)
    }

    pub fn gamma(&self) -> &LocalMatrix {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.gamma.n()
    }

    pub fn prime(&self) -> u32 {
        self.gamma.prime()
    }

    /// The frame is the standard one up to order and scaling, i.e. `γ` is a
    /// monomial matrix.
    pub fn is_standard(&self) -> bool {
        let n = self.n();
        let one_per_line =
            |get: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..n).filter(|&j| get(i, j)).count() == 1);
        let nz = |i: usize, j: usize| !num_traits::Zero::is_zero(self.gamma.get(i, j));
        one_per_line(&nz) && one_per_line(&|i, j| nz(j, i))
    }

    /// `γ^{-1} A γ`, the element seen in standard coordinates.
    pub fn pull_back(&self, a: &LocalMatrix) -> Result<LocalMatrix> {
        self.check(a)?;
        self.gamma_inv.mul(a)?.mul(&self.gamma)
    }

    /// `γ A γ^{-1}`.
    pub fn push_forward(&self, a: &LocalMatrix) -> Result<LocalMatrix> {
        self.check(a)?;
        self.gamma.mul(a)?.mul(&self.gamma_inv)
    }

    fn check(&self, a: &LocalMatrix) -> Result<()> {
        if a.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: a.n() });
        }
        if a.prime() != self.prime() {
            return Err(Error::PrimeMismatch(self.prime(), a.prime()));
        }
        Ok(())
    }

    /// Column basis `γ · diag(p^{m_i})` of the lattice at vertex `v`.
    pub fn vertex_lattice(&self, v: &ApartmentVertex) -> Result<LocalMatrix> {
        if v.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: v.dim() });
        }
        self.gamma.mul(&LocalMatrix::diag_powers(v.coords(), self.prime())?)
    }

    /// Membership in the maximal order `γ Λ(v) γ^{-1}`.
    pub fn maximal_order_membership(&self, v: &ApartmentVertex, a: &LocalMatrix) -> Result<bool> {
        lambda_membership(&self.pull_back(a)?, v)
    }

    /// Membership of `a` in each `γ Λ(v) γ^{-1}`, pulling `a` back once.
    pub fn maximal_order_memberships(&self, vertices: &[ApartmentVertex], a: &LocalMatrix) -> Result<Vec<bool>> {
        let local = self.pull_back(a)?;
        vertices.iter().map(|v| lambda_membership(&local, v)).collect()
    }

    /// Incidence computed from lattices: the elementary divisors of one
    /// vertex lattice in the other spread over exactly two consecutive values.
    pub fn incident_by_divisors(&self, u: &ApartmentVertex, v: &ApartmentVertex) -> Result<bool> {
        let d = elementary_divisors(&self.vertex_lattice(u)?, &self.vertex_lattice(v)?)?;
        Ok(d[d.len() - 1] - d[0] == 1)
    }
}

/// `γ (p^nu_ij) γ^{-1}` with `nu` reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GeneralSplitOrderRepr", into = "GeneralSplitOrderRepr")]
pub struct GeneralSplitOrder {
    apartment: Apartment,
    nu: ExponentMatrix,
}

#[derive(Serialize, Deserialize)]
struct GeneralSplitOrderRepr {
    gamma: Vec<Vec<String>>,
    prime: u32,
    nu: ExponentMatrix,
}

impl TryFrom<GeneralSplitOrderRepr> for GeneralSplitOrder {
    type Error = Error;

    fn try_from(r: GeneralSplitOrderRepr) -> Result<Self> {
        let gamma = LocalMatrix::from_strings(&r.gamma, r.prime)?;
        GeneralSplitOrder::new(Apartment::new(gamma)?, r.nu)
    }
}

impl From<GeneralSplitOrder> for GeneralSplitOrderRepr {
    fn from(s: GeneralSplitOrder) -> Self {
        GeneralSplitOrderRepr { gamma: s.apartment.gamma.to_strings(), prime: s.apartment.prime(), nu: s.nu }
    }
}

impl GeneralSplitOrder {
    pub fn new(apartment: Apartment, nu: ExponentMatrix) -> Result<Self> {
        if nu.n() != apartment.n() {
            return Err(Error::DimensionMismatch { expected: apartment.n(), got: nu.n() });
        }
        if !is_reduced(&nu) {
            return Err(Error::NotAnOrder);
        }
        Ok(GeneralSplitOrder { apartment, nu })
    }

    pub fn apartment(&self) -> &Apartment {
        &self.apartment
    }

    pub fn nu(&self) -> &ExponentMatrix {
        &self.nu
    }

    /// `γ E^(i,i) γ^{-1}`, generators of the conjugated diagonal ring.
    pub fn diagonal_generators(&self) -> Result<Vec<LocalMatrix>> {
        let n = self.apartment.n();
        let p = self.apartment.prime();
        (0..n)
            .map(|i| {
                let e = LocalMatrix::unit(n, i, i, num_traits::One::one(), p)?;
                self.apartment.push_forward(&e)
            })
            .collect()
    }
}

/// `A ∈ γ S(nu) γ^{-1}`, tested as `γ^{-1} A γ ∈ S(nu)`.
pub fn general_membership(s: &GeneralSplitOrder, a: &LocalMatrix) -> Result<bool> {
    in_split_order(&s.apartment.pull_back(a)?, &s.nu)
}

/// The intersection of the maximal orders at `vertices` of `ap`.
pub fn intersect_in_apartment(ap: &Apartment, vertices: &[ApartmentVertex]) -> Result<GeneralSplitOrder> {
    let nu = intersect_maximal(vertices)?.order_hull()?;
    GeneralSplitOrder::new(ap.clone(), nu)
}

/// Distinct vertices with lattice representatives `pL ⊆ L' ⊆ L`: the
/// coordinate differences span exactly one step.
pub fn incident(u: &ApartmentVertex, v: &ApartmentVertex) -> bool {
    if u == v || u.dim() != v.dim() {
        return false;
    }
    let diffs = u.coords().iter().zip(v.coords()).map(|(a, b)| b - a);
    let (lo, hi) = diffs.fold((i64::MAX, i64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)));
    hi - lo == 1
}

/// `{L : L'} = {γL : γL'}`.
pub fn divisor_invariance_check(gamma: &LocalMatrix, l: &LocalMatrix, l_prime: &LocalMatrix) -> Result<bool> {
    if gamma.inverse().is_none() {
        return Err(Error::SingularInput);
    }
    let before = elementary_divisors(l, l_prime)?;
    let after = elementary_divisors(&gamma.mul(l)?, &gamma.mul(l_prime)?)?;
    Ok(before == after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::{prime_power, LocalMatrix};

    fn v(c: &[i64]) -> ApartmentVertex {
        ApartmentVertex::new(c).unwrap()
    }

    fn example() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![0, 0, 1], vec![3, 0, 1], vec![3, 2, 0]]).unwrap()
    }

    #[test]
    fn incidence() {
        assert!(incident(&v(&[0, 0]), &v(&[0, 1])));
        assert!(!incident(&v(&[0, 1]), &v(&[0, 1])));
        assert!(!incident(&v(&[0, 0, 2]), &v(&[0, 1, 1])));
        assert!(incident(&v(&[0, 1, 1]), &v(&[0, 0, 0])));
        assert!(incident(&v(&[0, -1, -1]), &v(&[0, 0, 0])));
        assert!(!incident(&v(&[0, 0]), &v(&[0, 2])));
    }

    #[test]
    fn standard_membership() {
        let s = GeneralSplitOrder::new(Apartment::standard(3, 2).unwrap(), example()).unwrap();
        let a = LocalMatrix::unit(3, 0, 2, prime_power(2, 1), 2).unwrap();
        assert!(general_membership(&s, &a).unwrap());
        assert!(general_membership(&s, &LocalMatrix::identity(3, 2).unwrap()).unwrap());
        let e13 = LocalMatrix::unit(3, 0, 2, prime_power(2, 0), 2).unwrap();
        assert!(!general_membership(&s, &e13).unwrap());
        assert!(s.apartment().is_standard());
    }

    #[test]
    fn batched_membership_matches_single() {
        let g = LocalMatrix::from_ints(&[vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1]], 2).unwrap();
        let ap = Apartment::new(g).unwrap();
        let vs = [v(&[0, 0, 0]), v(&[0, 1, 0]), v(&[0, -2, 0])];
        let a = ap.push_forward(&LocalMatrix::unit(3, 0, 1, prime_power(2, 1), 2).unwrap()).unwrap();
        let single: Vec<bool> = vs.iter().map(|x| ap.maximal_order_membership(x, &a).unwrap()).collect();
        assert_eq!(ap.maximal_order_memberships(&vs, &a).unwrap(), single);
        assert_eq!(single, vec![true, true, false]);
    }

    #[test]
    fn requires_reduced() {
        let nu_p = ExponentMatrix::new(vec![vec![0, 0, 2], vec![3, 0, 1], vec![3, 2, 0]]).unwrap();
        assert_eq!(GeneralSplitOrder::new(Apartment::standard(3, 2).unwrap(), nu_p), Err(Error::NotAnOrder));
        let sing = LocalMatrix::from_ints(&[vec![1, 2], vec![2, 4]], 2).unwrap();
        assert_eq!(Apartment::new(sing), Err(Error::SingularConjugator));
    }

    #[test]
    fn intersection_in_standard_apartment() {
        let ap = Apartment::standard(3, 2).unwrap();
        let s = intersect_in_apartment(&ap, &[v(&[0, 0, -1]), v(&[0, 3, 3]), v(&[0, 0, 2])]).unwrap();
        assert_eq!(s.nu(), &example());
        assert_eq!(intersect_in_apartment(&ap, &[]), Err(Error::EmptyVertexList));
    }

    #[test]
    fn divisor_invariance() {
        let p = 2;
        let l = LocalMatrix::identity(2, p).unwrap();
        let lp = LocalMatrix::diag_powers(&[1, 2], p).unwrap();
        assert!(divisor_invariance_check(&l, &l, &lp).unwrap());
        let g = LocalMatrix::from_ints(&[vec![3, 1], vec![4, 2]], p).unwrap();
        assert!(divisor_invariance_check(&g, &l, &lp).unwrap());
        let sing = LocalMatrix::from_ints(&[vec![1, 1], vec![1, 1]], p).unwrap();
        assert_eq!(divisor_invariance_check(&sing, &l, &lp), Err(Error::SingularInput));
    }

    #[test]
    fn json() {
        let g = LocalMatrix::from_ints(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 2]], 3).unwrap();
        let s = GeneralSplitOrder::new(Apartment::new(g).unwrap(), example()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"gamma":[["1/1","1/1","0/1"]"#));
        assert!(text.contains(r#""prime":3"#));
        assert_eq!(serde_json::from_str::<GeneralSplitOrder>(&text).unwrap(), s);
    }
}
