//! Curves with normalization the projective line, presented by gluing data.
//!
//! Each singular point is a [`Cluster`]: branch points `a_i` on the line,
//! conductor exponents `c_i`, and a basis of `O_P / C_P` inside
//! `∏ k[u_i]/(u_i^c_i)` with `u_i = t - a_i`. The point at infinity is smooth.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::linalg::unit;
use crate::algebra::{fmt_q, FracModule, Poly, Subspace, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub name: String,
    pub points: Vec<Q>,
    pub conductor: Vec<i64>,
    /// Basis of `O_P / C_P`, coordinates branch-major with exponents `0..c_i`.
    pub basis: Subspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterInvariants {
    pub delta: usize,
    pub d: usize,
    pub multiplicity: usize,
    pub embdim: usize,
}

impl Cluster {
    pub fn new(name: impl Into<String>, points: Vec<Q>, conductor: Vec<i64>, basis: Subspace) -> Self {
        Cluster { name: name.into(), points, conductor, basis }
    }

    /// Basis given as rows of per-branch polynomials in `u`, reduced mod `u^c_i`.
    pub fn from_rows(name: impl Into<String>, points: Vec<Q>, conductor: Vec<i64>, rows: &[Vec<Poly>]) -> Result<Self> {
        if points.len() != conductor.len() {
            return Err(Error::InvalidData("one conductor exponent per branch is required".into()));
        }
        let n: i64 = conductor.iter().sum();
        let mut vectors = Vec::new();
        for row in rows {
            if row.len() != points.len() {
                return Err(Error::InvalidData(format!(
                    "basis row has {} entries, expected {}",
                    row.len(),
                    points.len()
                )));
            }
            let mut v = vec![Q::zero(); n.max(0) as usize];
            let mut off = 0usize;
            for (p, &c) in row.iter().zip(&conductor) {
                for e in 0..c.max(0) as usize {
                    v[off + e] = p.coeff(e);
                }
                off += c.max(0) as usize;
            }
            vectors.push(v);
        }
        Ok(Cluster::new(name, points, conductor, Subspace::from_vectors(n.max(0) as usize, vectors)))
    }

    pub fn branches(&self) -> usize {
        self.points.len()
    }

    pub fn max_conductor(&self) -> i64 {
        self.conductor.iter().copied().max().unwrap_or(0)
    }

    /// `O_P`
    pub fn ring(&self) -> FracModule {
        FracModule::new(vec![0; self.branches()], self.conductor.clone(), self.basis.clone())
    }

    /// `Obar_P`
    pub fn normalization(&self) -> FracModule {
        FracModule::power_of_u(vec![0; self.branches()])
    }

    /// `C_P`
    pub fn conductor_ideal(&self) -> FracModule {
        FracModule::power_of_u(self.conductor.clone())
    }

    pub fn maximal_ideal(&self) -> FracModule {
        self.ring().radical()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.branches();
        if r == 0 {
            return Err(Error::InvalidData(format!("cluster {} has no branches", self.name)));
        }
        if self.conductor.iter().any(|&c| c < 1) {
            return Err(Error::InvalidData(format!("cluster {}: conductor exponents must be ≥ 1", self.name)));
        }
        let distinct: BTreeSet<&Q> = self.points.iter().collect();
        if distinct.len() != r {
            return Err(Error::InvalidData(format!("cluster {}: repeated branch point", self.name)));
        }
        let n: i64 = self.conductor.iter().sum();
        if self.basis.ambient() != n as usize {
            return Err(Error::InvalidData(format!("cluster {}: basis has wrong length", self.name)));
        }
        let ring = self.ring();
        let one: Vec<Q> = {
            let mut v = vec![Q::zero(); n as usize];
            for b in 0..r {
                v[ring.index(b, 0)] = Q::one();
            }
            v
        };
        if !self.basis.contains(&one) {
            return Err(Error::NotARing(format!("cluster {}: basis does not contain 1", self.name)));
        }
        if !ring.contains_module(&ring.mul(&ring)) {
            return Err(Error::NotARing(format!("cluster {}: basis is not closed under multiplication", self.name)));
        }
        for consts in ring.constant_terms() {
            if consts.iter().any(|c| c != &consts[0]) {
                return Err(Error::NotLocal(format!(
                    "cluster {}: constant terms {:?} are not a multiple of (1,…,1)",
                    self.name,
                    consts.iter().map(fmt_q).collect::<Vec<_>>()
                )));
            }
        }
        let conductor = ring.colon(&self.normalization());
        if conductor != self.conductor_ideal() {
            return Err(Error::ConductorNotExact(format!(
                "cluster {}: declared exponents {:?}, actual conductor valuation {:?}",
                self.name,
                self.conductor,
                conductor.normalized().lo()
            )));
        }
        let delta = self.conductor.iter().sum::<i64>() as usize - self.basis.dim();
        if delta == 0 {
            return Err(Error::InvalidData(format!("cluster {} is a smooth point", self.name)));
        }
        Ok(())
    }

    pub fn delta(&self) -> usize {
        self.conductor.iter().sum::<i64>() as usize - self.basis.dim()
    }

    pub fn invariants(&self) -> ClusterInvariants {
        let m = self.maximal_ideal();
        let obar = self.normalization();
        let multiplicity = obar.colength(&obar.mul(&m));
        let embdim = m.colength(&m.mul(&m));
        ClusterInvariants { delta: self.delta(), d: self.basis.dim(), multiplicity, embdim }
    }

    /// Value semigroup elements below the conductor, when the local ring is
    /// a one-branch monomial ring.
    pub fn semigroup(&self) -> Option<Vec<i64>> {
        if self.branches() != 1 {
            return None;
        }
        let mut out = Vec::new();
        for (row, &p) in self.basis.rows().iter().zip(self.basis.pivots()) {
            if row.iter().enumerate().any(|(k, c)| k != p && !c.is_zero()) {
                return None;
            }
            out.push(p as i64);
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub clusters: Vec<Cluster>,
}

impl CurveModel {
    pub fn new(clusters: Vec<Cluster>) -> Self {
        CurveModel { clusters }
    }

    /// Builds and validates, including the genus hypothesis `g ≥ 2`.
    pub fn validated(clusters: Vec<Cluster>) -> Result<Self> {
        let c = CurveModel::new(clusters);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        let g = self.genus();
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(())
    }

    /// Every check except the genus bound.
    pub fn validate_structure(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for cl in &self.clusters {
            for a in &cl.points {
                if !seen.insert(a.clone()) {
                    return Err(Error::InvalidData(format!("branch point {} used twice", fmt_q(a))));
                }
            }
        }
        for cl in &self.clusters {
            cl.validate()?;
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.clusters.iter().map(|c| c.delta()).sum()
    }

    pub fn branch_points(&self) -> Vec<Q> {
        self.clusters.iter().flat_map(|c| c.points.iter().cloned()).collect()
    }

    pub fn is_branch_point(&self, a: &Q) -> bool {
        self.clusters.iter().any(|c| c.points.contains(a))
    }

    /// `∏ (t - a_i)^c_i` over all branches.
    pub fn conductor_polynomial(&self) -> Poly {
        let mut acc = Poly::one();
        for cl in &self.clusters {
            for (a, &c) in cl.points.iter().zip(&cl.conductor) {
                acc = &acc * &Poly::linear_root(a).pow(c as u32);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterKind {
    Node,
    Cusp,
    Semigroup(Vec<u64>),
    Explicit { conductor: Vec<i64>, rows: Vec<Vec<Poly>> },
}

/// Elements of the numerical semigroup generated by `gens`, with its
/// conductor `F + 1`.
pub fn semigroup_below_conductor(gens: &[u64]) -> Result<(Vec<i64>, i64)> {
    if gens.is_empty() || gens.contains(&0) {
        return Err(Error::NotASemigroup("generators must be positive".into()));
    }
    let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::NotASemigroup(format!("generators have gcd {g}, so the complement is infinite")));
    }
    let lo = *gens.iter().min().unwrap();
    let hi = *gens.iter().max().unwrap();
    let limit = (lo * hi + hi) as usize;
    let mut member = vec![false; limit + 1];
    member[0] = true;
    for n in 1..=limit {
        member[n] = gens.iter().any(|&s| n >= s as usize && member[n - s as usize]);
    }
    let frob = (0..=limit).rev().find(|&n| !member[n]).map_or(-1, |n| n as i64);
    let conductor = frob + 1;
    if conductor == 0 {
        return Err(Error::NotASemigroup("the semigroup is all of N, the point would be smooth".into()));
    }
    let elems = (0..conductor).filter(|&n| member[n as usize]).collect();
    Ok((elems, conductor))
}

pub fn make_cluster(name: impl Into<String>, points: Vec<Q>, kind: &ClusterKind) -> Result<Cluster> {
    let name = name.into();
    let need = |k: usize| -> Result<()> {
        if points.len() != k {
            return Err(Error::InvalidData(format!(
                "cluster {name}: expected {k} branch point(s), got {}",
                points.len()
            )));
        }
        Ok(())
    };
    let cl = match kind {
        ClusterKind::Node => {
            need(2)?;
            Cluster::new(name.clone(), points, vec![1, 1], Subspace::from_vectors(2, [vec![Q::one(), Q::one()]]))
        }
        ClusterKind::Cusp => make_cluster(name.clone(), points, &ClusterKind::Semigroup(vec![2, 3]))?,
        ClusterKind::Semigroup(gens) => {
            need(1)?;
            let (elems, c) = semigroup_below_conductor(gens)?;
            let n = c as usize;
            let basis = Subspace::from_vectors(n, elems.iter().map(|&s| unit(n, s as usize)));
            Cluster::new(name.clone(), points, vec![c], basis)
        }
        ClusterKind::Explicit { conductor, rows } => Cluster::from_rows(name.clone(), points, conductor.clone(), rows)?,
    };
    cl.validate()?;
    Ok(cl)
}

/// Contracts the divisor `D = Σ m_i [a_i]` on the line to a single point:
/// `O = k + C` with conductor `D`, genus `deg D - 1`.
pub fn serre_contract(divisor: &[(Q, u32)]) -> Result<CurveModel> {
    let deg: u32 = divisor.iter().map(|(_, m)| m).sum();
    if deg < 3 {
        return Err(Error::DegreeTooSmall(deg as usize));
    }
    if divisor.iter().any(|(_, m)| *m == 0) {
        return Err(Error::InvalidData("zero multiplicity in divisor".into()));
    }
    let points: Vec<Q> = divisor.iter().map(|(a, _)| a.clone()).collect();
    let conductor: Vec<i64> = divisor.iter().map(|(_, m)| *m as i64).collect();
    let rows = vec![vec![Poly::one(); points.len()]];
    let cl = Cluster::from_rows("P", points, conductor, &rows)?;
    CurveModel::validated(vec![cl])
}

/// The curve `O = k + t^(n+1) k[t]` of genus `n` together with the
/// components `(t^(n+1), …, t^(2n+1), 1)` of its embedding.
pub fn cone_curve(n: u32) -> Result<(CurveModel, Vec<Poly>)> {
    if n < 2 {
        return Err(Error::BadRange(format!("cone curve needs n ≥ 2, got {n}")));
    }
    let c = serre_contract(&[(Q::zero(), n + 1)])?;
    let mut comps: Vec<Poly> = (n + 1..=2 * n + 1).map(|e| Poly::monomial(Q::one(), e as usize)).collect();
    comps.push(Poly::one());
    Ok((c, comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn sg(gens: &[u64]) -> Cluster {
        make_cluster("P", vec![q(0)], &ClusterKind::Semigroup(gens.to_vec())).unwrap()
    }

    #[test]
    fn semigroup_345() {
        let cl = sg(&[3, 4, 5]);
        assert_eq!(cl.conductor, vec![3]);
        assert_eq!(cl.basis.dim(), 1);
        let inv = cl.invariants();
        assert_eq!(inv, ClusterInvariants { delta: 2, d: 1, multiplicity: 3, embdim: 3 });
    }

    #[test]
    fn semigroup_25() {
        let cl = sg(&[2, 5]);
        assert_eq!(cl.conductor, vec![4]);
        assert_eq!(cl.semigroup(), Some(vec![0, 2]));
        assert_eq!(cl.invariants(), ClusterInvariants { delta: 2, d: 2, multiplicity: 2, embdim: 2 });
    }

    #[test]
    fn node_invariants() {
        let cl = make_cluster("N", vec![q(1), q(-1)], &ClusterKind::Node).unwrap();
        assert_eq!(cl.invariants(), ClusterInvariants { delta: 1, d: 1, multiplicity: 2, embdim: 2 });
    }

    #[test]
    fn non_local_basis_rejected() {
        let cl = Cluster::new("X", vec![q(0), q(1)], vec![1, 1], Subspace::from_vectors(2, [vec![q(1), q(0)], vec![q(1), q(1)]]));
        assert!(matches!(cl.validate(), Err(Error::NotLocal(_))));
        let cl = Cluster::new("X", vec![q(0), q(1)], vec![1, 1], Subspace::from_vectors(2, [vec![q(1), q(0)]]));
        assert!(matches!(cl.validate(), Err(Error::NotARing(_))));
    }

    #[test]
    fn inexact_conductor_rejected() {
        let rows = vec![vec![Poly::one()], vec![Poly::monomial(q(1), 3)]];
        let cl = Cluster::from_rows("P", vec![q(0)], vec![4], &rows).unwrap();
        assert!(matches!(cl.validate(), Err(Error::ConductorNotExact(_))));
    }

    #[test]
    fn non_closed_basis_rejected() {
        let rows = vec![vec![Poly::one()], vec![Poly::monomial(q(1), 2)]];
        let cl = Cluster::from_rows("P", vec![q(0)], vec![5], &rows).unwrap();
        assert!(matches!(cl.validate(), Err(Error::NotARing(_))));
    }

    #[test]
    fn serre_contractions() {
        let e1 = serre_contract(&[(q(0), 3)]).unwrap();
        assert_eq!(e1.genus(), 2);
        assert_eq!(e1.clusters[0].semigroup(), Some(vec![0]));
        let three = serre_contract(&[(q(0), 1), (q(1), 1), (q(2), 1)]).unwrap();
        assert_eq!(three.genus(), 2);
        assert_eq!(three.clusters[0].basis.dim(), 1);
        assert!(matches!(serre_contract(&[(q(0), 2)]), Err(Error::DegreeTooSmall(2))));
    }

    #[test]
    fn bad_semigroups() {
        assert!(matches!(semigroup_below_conductor(&[2, 4]), Err(Error::NotASemigroup(_))));
        assert!(matches!(semigroup_below_conductor(&[1, 3]), Err(Error::NotASemigroup(_))));
    }

    #[test]
    fn genus_too_small() {
        let cusp = make_cluster("P", vec![q(0)], &ClusterKind::Cusp).unwrap();
        assert!(matches!(CurveModel::validated(vec![cusp]), Err(Error::GenusTooSmall(1))));
    }
}
