//! The dualizing module as Rosenlicht regular differentials.
//!
//! A differential is written `f dt`; locally at a branch `f du`, so every
//! local module here lives in the same fraction space as `O_P`. In these
//! terms the regular differentials of the normalization are `Obar_P`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{expand_at, nullspace, FracModule, Poly, RatFunc, TruncSeries, Q};
use crate::canonical::local_blowup;
use crate::curve::{Cluster, CurveModel};
use crate::error::{Error, Result};
use crate::Settings;

/// Basis of `H^0(ω)` as `(p_j / c) dt` with `c` the conductor polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBasis {
    pub denominator: Poly,
    pub numerators: Vec<Poly>,
}

impl OmegaBasis {
    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    /// The sections as functions `f` with `η = f dt`.
    pub fn functions(&self) -> Vec<RatFunc> {
        self.numerators
            .iter()
            .map(|p| RatFunc::new(p.clone(), self.denominator.clone()))
            .collect()
    }
}

/// Residue conditions of a cluster applied to germs `f` known on
/// `[-c_i, 0)`: `Σ_i Σ_e b_{i,e} f_{i,-1-e}` for each basis row `b`.
fn residue_pairing(cl: &Cluster, germ: &[TruncSeries]) -> Vec<Q> {
    let ring = cl.ring();
    cl.basis
        .rows()
        .iter()
        .map(|b| {
            let mut acc = Q::zero();
            for (i, s) in germ.iter().enumerate() {
                for e in 0..cl.conductor[i] {
                    let be = &b[ring.index(i, e)];
                    if !be.is_zero() {
                        acc += be * s.coeff(-1 - e);
                    }
                }
            }
            acc
        })
        .collect()
}

pub fn omega_sections(c: &CurveModel) -> Result<OmegaBasis> {
    let den = c.conductor_polynomial();
    let n = den.deg_or(0) as usize - 1;
    let mut columns: Vec<Vec<Q>> = Vec::with_capacity(n);
    for k in 0..n {
        let f = RatFunc::new(Poly::monomial(Q::from_integer(1.into()), k), den.clone());
        let mut col = Vec::new();
        for cl in &c.clusters {
            let germ: Vec<TruncSeries> = cl.points.iter().map(|a| expand_at(&f, a, 0)).collect();
            col.extend(residue_pairing(cl, &germ));
        }
        columns.push(col);
    }
    let m = columns.first().map_or(0, |col| col.len());
    let eqs: Vec<Vec<Q>> = (0..m).map(|r| columns.iter().map(|col| col[r].clone()).collect()).collect();
    let sol = nullspace(&eqs, n);
    let numerators: Vec<Poly> = sol.rows().iter().map(|v| Poly::from_coeffs(v.clone())).collect();
    if numerators.len() != c.genus() {
        return Err(Error::DimensionMismatch(format!(
            "h0(omega) = {} but g = {}",
            numerators.len(),
            c.genus()
        )));
    }
    Ok(OmegaBasis { denominator: den, numerators })
}

/// `ω_P` on the window `[-c, 0)`, with `u^0 Obar_P` as its tail.
pub fn omega_stalk(cl: &Cluster) -> FracModule {
    let lo: Vec<i64> = cl.conductor.iter().map(|&c| -c).collect();
    let hi = vec![0; cl.branches()];
    let shell = FracModule::from_vectors(lo.clone(), hi.clone(), Vec::new());
    let ring = cl.ring();
    let eqs: Vec<Vec<Q>> = cl
        .basis
        .rows()
        .iter()
        .map(|b| {
            let mut row = vec![Q::zero(); shell.ambient()];
            for i in 0..cl.branches() {
                for e in 0..cl.conductor[i] {
                    row[shell.index(i, -1 - e)] = b[ring.index(i, e)].clone();
                }
            }
            row
        })
        .collect();
    FracModule::new(lo, hi, nullspace(&eqs, shell.ambient())).normalized()
}

/// `ω_P` together with the chain `C ω = Obar ⊆ ω ⊆ Obar ω`, `dim ω/Obar = δ`.
pub fn omega_stalk_checked(cl: &Cluster, settings: &Settings) -> Result<FracModule> {
    settings.guard(cl, 2 * cl.max_conductor(), "dualizing stalk")?;
    let omega = omega_stalk(cl);
    let obar = cl.normalization();
    let obar_omega = obar.mul(&omega);
    if cl.conductor_ideal().mul(&omega) != obar {
        return Err(Error::DimensionMismatch(format!("cluster {}: C·ω differs from Obar", cl.name)));
    }
    if !omega.contains_module(&obar) || !obar_omega.contains_module(&omega) {
        return Err(Error::DimensionMismatch(format!("cluster {}: Obar ⊆ ω ⊆ Obar·ω fails", cl.name)));
    }
    if omega.colength(&obar) != cl.delta() {
        return Err(Error::DimensionMismatch(format!("cluster {}: dim ω/Obar differs from δ", cl.name)));
    }
    Ok(omega)
}

/// An element `x ∈ M` with `Obar x = Obar M`, as exact Laurent polynomials.
///
/// Basis rows are tried first in echelon order, then the combinations
/// `Σ_k (k+1)^s row_k` for `s = 0, 1, …`.
pub fn obar_generator(m: &FracModule) -> Vec<TruncSeries> {
    let m = m.normalized();
    let target = m.valuation();
    let order = m.hi().to_vec();
    let rows = m.space().rows();
    let attains = |v: &[Q]| {
        m.element(v, &order).iter().zip(&target).all(|(s, &t)| s.valuation() == t)
    };
    for r in rows {
        if attains(r) {
            return m.element(r, &order);
        }
    }
    let width = m.ambient();
    for s in 0..=(rows.len() * m.branches() + 1) as u32 {
        let weights: Vec<Q> = (0..rows.len()).map(|k| Q::from_integer(((k + 1) as i64).pow(s).into())).collect();
        let v = crate::algebra::linalg::combine(&weights, rows, width);
        if attains(&v) {
            return m.element(&v, &order);
        }
    }
    unreachable!("a generic combination attains the minimal valuation on every branch")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterProfile {
    pub name: String,
    pub delta: usize,
    pub d: usize,
    pub multiplicity: usize,
    pub embdim: usize,
    pub eta: usize,
    /// `dim(ω_P / O_P x)`
    pub eta_via_generator: usize,
    /// `δ_P - dim(Obar ω_P / ω_P)`
    pub eta_via_obar_omega: usize,
    pub cm_type: usize,
    pub omega_principal: bool,
    pub gorenstein: bool,
    pub almost_gorenstein: bool,
    /// `dim(Ohat_P / O_P)`
    pub xi: usize,
    /// `dim(Ohat ω_P / ω_P)`
    pub mu: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityProfile {
    pub clusters: Vec<ClusterProfile>,
    pub eta: usize,
    pub gorenstein: bool,
    pub nearly_normal: bool,
    pub nearly_gorenstein: bool,
}

pub fn cluster_profile(cl: &Cluster, settings: &Settings) -> Result<ClusterProfile> {
    let inv = cl.invariants();
    let ring = cl.ring();
    let omega = omega_stalk_checked(cl, settings)?;
    let obar_omega = cl.normalization().mul(&omega);
    let x = obar_generator(&omega);
    let ox = ring.scale_exact(&x);
    let eta = inv.delta - inv.d;
    let eta_via_generator = omega.colength(&ox);
    let eta_via_obar_omega = inv.delta as i64 - obar_omega.colength(&omega) as i64;
    if eta_via_generator != eta || eta_via_obar_omega != eta as i64 {
        return Err(Error::DimensionMismatch(format!(
            "cluster {}: η computed as {eta}, {eta_via_generator}, {eta_via_obar_omega}",
            cl.name
        )));
    }
    let cm_type = omega.min_generators(&ring);
    let hat = local_blowup(cl, &omega, settings)?;
    let xi = hat.colength(&ring);
    let hat_omega = hat.mul(&omega);
    let mu = hat_omega.colength(&omega);
    Ok(ClusterProfile {
        name: cl.name.clone(),
        delta: inv.delta,
        d: inv.d,
        multiplicity: inv.multiplicity,
        embdim: inv.embdim,
        eta,
        eta_via_generator,
        eta_via_obar_omega: eta_via_obar_omega as usize,
        cm_type,
        omega_principal: cm_type == 1,
        gorenstein: eta == 0,
        almost_gorenstein: cm_type - 1 == eta,
        xi,
        mu,
    })
}

pub fn singularity_profile(c: &CurveModel, settings: &Settings) -> Result<SingularityProfile> {
    let clusters = c
        .clusters
        .par_iter()
        .map(|cl| cluster_profile(cl, settings))
        .collect::<Result<Vec<_>>>()?;
    let eta = clusters.iter().map(|p| p.eta).sum();
    let nearly_normal = clusters.len() == 1 && clusters[0].d == 1;
    let non_gor: Vec<&ClusterProfile> = clusters.iter().filter(|p| !p.gorenstein).collect();
    let nearly_gorenstein = non_gor.len() == 1 && non_gor[0].almost_gorenstein;
    Ok(SingularityProfile { gorenstein: eta == 0, clusters, eta, nearly_normal, nearly_gorenstein })
}
