//! Torsion-free rank-one sheaves: a fractional module at each cluster and
//! a divisor on the smooth locus, the point at infinity included.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::modular::{exact_rank, integer_rows};
use crate::algebra::{expand_at, fmt_q, nullspace, q, FracModule, Poly, RatFunc, TruncSeries, Q};
use crate::curve::CurveModel;
use crate::dualizing::omega_stalk;
use crate::error::{Error, Result};
use crate::Settings;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Q),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(a) => write!(f, "{}", fmt_q(a)),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneSheaf {
    /// One module per cluster, in cluster order.
    pub stalks: Vec<FracModule>,
    /// Local sections at a smooth place `a` are functions with `ord_a ≥ -D(a)`.
    pub divisor: BTreeMap<Place, i64>,
}

impl RankOneSheaf {
    pub fn new(stalks: Vec<FracModule>, divisor: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut d = BTreeMap::new();
        for (p, m) in divisor {
            *d.entry(p).or_insert(0) += m;
        }
        d.retain(|_, m| *m != 0);
        RankOneSheaf { stalks: stalks.into_iter().map(|m| m.normalized()).collect(), divisor: d }
    }

    pub fn structure(c: &CurveModel) -> Self {
        RankOneSheaf::new(c.clusters.iter().map(|cl| cl.ring()).collect(), [])
    }

    /// `ω` with sections `f` such that `f dt` is regular.
    pub fn omega(c: &CurveModel) -> Self {
        RankOneSheaf::new(c.clusters.iter().map(omega_stalk).collect(), [(Place::Infinity, -2)])
    }

    pub fn divisor_at(&self, p: &Place) -> i64 {
        self.divisor.get(p).copied().unwrap_or(0)
    }

    pub fn divisor_degree(&self) -> i64 {
        self.divisor.values().sum()
    }

    pub fn validate(&self, c: &CurveModel) -> Result<()> {
        if self.stalks.len() != c.clusters.len() {
            return Err(Error::InvalidData("one stalk per cluster is required".into()));
        }
        for (cl, m) in c.clusters.iter().zip(&self.stalks) {
            if m.branches() != cl.branches() || !m.contains_module(&cl.ring().mul(m)) {
                return Err(Error::InvalidData(format!("stalk at {} is not an O_P-module", cl.name)));
            }
        }
        for p in self.divisor.keys() {
            if let Place::Finite(a) = p {
                if c.is_branch_point(a) {
                    return Err(Error::SupportOnSingular(fmt_q(a)));
                }
            }
        }
        Ok(())
    }

    /// Every stalk is principal over its local ring.
    pub fn is_invertible(&self, c: &CurveModel) -> bool {
        c.clusters.iter().zip(&self.stalks).all(|(cl, m)| m.min_generators(&cl.ring()) == 1)
    }
}

/// Basis of `H^0(F)` as `p_j / q` over one denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sections {
    pub denominator: Poly,
    pub numerators: Vec<Poly>,
}

impl Sections {
    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn functions(&self) -> Vec<RatFunc> {
        self.numerators.iter().map(|p| RatFunc::new(p.clone(), self.denominator.clone())).collect()
    }
}

/// Denominator and numerator degree bound of the section ansatz.
fn ansatz(c: &CurveModel, f: &RankOneSheaf) -> (Poly, i64) {
    let mut den = Poly::one();
    for (cl, m) in c.clusters.iter().zip(&f.stalks) {
        for (a, &nu) in cl.points.iter().zip(m.lo()) {
            if nu < 0 {
                den = &den * &Poly::linear_root(a).pow((-nu) as u32);
            }
        }
    }
    for (p, &d) in &f.divisor {
        if let (Place::Finite(a), true) = (p, d > 0) {
            den = &den * &Poly::linear_root(a).pow(d as u32);
        }
    }
    let bound = den.deg_or(0) + f.divisor_at(&Place::Infinity);
    (den, bound)
}

/// Expansions of `t^k / q` at `a` on `[lo, top)` for `k = 0..=n`.
fn monomial_expansions(den: &Poly, a: &Q, lo: i64, top: i64, n: usize) -> Vec<Vec<Q>> {
    let width = (top - lo).max(0) as usize;
    let s = expand_at(&RatFunc::new(Poly::one(), den.clone()), a, top);
    let mut cur: Vec<Q> = (lo..top).map(|e| s.coeff(e)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(cur.clone());
        // multiply by t = a + u
        let mut next = vec![Q::zero(); width];
        for j in 0..width {
            next[j] = a * &cur[j];
            if j > 0 {
                next[j] += &cur[j - 1];
            }
        }
        cur = next;
    }
    out
}

/// Linear conditions on the numerator coefficients `0..=n` of a section
/// over the ansatz denominator, or `None` when the degree bound is negative.
fn section_equations(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<(Poly, Option<(usize, Vec<Vec<Q>>)>)> {
    let (den, bound) = ansatz(c, f);
    if bound < 0 {
        return Ok((den, None));
    }
    let n = bound as usize;
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for (cl, m) in c.clusters.iter().zip(&f.stalks) {
        // per unknown: coefficients below the window (must vanish) and the
        // window vector reduced modulo the stalk
        let mut below_rows: Vec<Vec<Q>> = vec![Vec::new(); n + 1];
        let mut windows: Vec<Vec<Q>> = vec![Vec::new(); n + 1];
        for (i, a) in cl.points.iter().enumerate() {
            let lo = m.lo()[i].min(0);
            let top = m.hi()[i];
            settings.guard(cl, top - lo, "section expansion")?;
            let below = (m.lo()[i] - lo) as usize;
            for (k, e) in monomial_expansions(&den, a, lo, top, n).into_iter().enumerate() {
                below_rows[k].extend(e[..below].iter().cloned());
                windows[k].extend(e[below..].iter().cloned());
            }
        }
        let residues: Vec<Vec<Q>> = windows.iter().map(|w| m.space().reduce(w)).collect();
        for j in 0..m.ambient() {
            let row: Vec<Q> = residues.iter().map(|r| r[j].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                eqs.push(row);
            }
        }
        let nb = below_rows.first().map_or(0, |r| r.len());
        for j in 0..nb {
            let row: Vec<Q> = below_rows.iter().map(|r| r[j].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                eqs.push(row);
            }
        }
    }
    for (p, &d) in &f.divisor {
        if let (Place::Finite(a), true) = (p, d < 0) {
            for j in 0..(-d) as usize {
                let row: Vec<Q> = (0..=n)
                    .map(|k| {
                        if k < j {
                            Q::zero()
                        } else {
                            crate::algebra::binomial(k as u64, j as u64) * pow_q(a, k - j)
                        }
                    })
                    .collect();
                eqs.push(row);
            }
        }
    }
    Ok((den, Some((n, eqs))))
}

pub fn sections(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<Sections> {
    let (den, system) = section_equations(c, f, settings)?;
    let Some((n, eqs)) = system else {
        return Ok(Sections { denominator: den, numerators: Vec::new() });
    };
    let sol = nullspace(&eqs, n + 1);
    let numerators = sol.rows().iter().map(|v| Poly::from_coeffs(v.clone())).collect();
    Ok(Sections { denominator: den, numerators })
}

fn pow_q(a: &Q, e: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

/// `dim H^0`, as the number of unknowns minus the rank of the conditions;
/// the rank is taken on the transpose, whose kernel is small.
pub fn h0(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<usize> {
    let (_, bound) = ansatz(c, f);
    if bound < 0 {
        return Ok(0);
    }
    // jets of width `top - min(lo, 0)` at each branch point and `-d` at
    // each zero; numerators of degree at most `bound` reach every jet once
    // `bound + 1` is at least the total width
    let mut width = 0i64;
    let mut codim = 0i64;
    for (cl, m) in c.clusters.iter().zip(&f.stalks) {
        let mut w = 0;
        for (&lo, &hi) in m.lo().iter().zip(m.hi()) {
            settings.guard(cl, hi - lo.min(0), "section expansion")?;
            w += hi - lo.min(0);
        }
        width += w;
        codim += w - m.space().dim() as i64;
    }
    for (p, &d) in &f.divisor {
        if let (Place::Finite(_), true) = (p, d < 0) {
            width -= d;
            codim -= d;
        }
    }
    if bound + 1 >= width {
        return Ok((bound + 1 - codim) as usize);
    }
    let (_, system) = section_equations(c, f, settings)?;
    let Some((n, eqs)) = system else {
        return Ok(0);
    };
    let rows = integer_rows(&eqs);
    let transpose: Vec<Vec<BigInt>> = (0..=n).map(|k| rows.iter().map(|r| r[k].clone()).collect()).collect();
    Ok(n + 1 - exact_rank(&transpose, rows.len(), false).rank)
}

/// `Hom(F, G)`: stalks `(G_P : F_P)`, divisor `D_G - D_F`.
pub fn hom(f: &RankOneSheaf, g: &RankOneSheaf) -> RankOneSheaf {
    let stalks = f.stalks.iter().zip(&g.stalks).map(|(mf, mg)| mg.colon(mf)).collect();
    let divisor = g.divisor.iter().map(|(p, d)| (p.clone(), *d)).chain(f.divisor.iter().map(|(p, d)| (p.clone(), -d)));
    RankOneSheaf::new(stalks, divisor)
}

pub fn dual_into_omega(c: &CurveModel, f: &RankOneSheaf) -> RankOneSheaf {
    hom(f, &RankOneSheaf::omega(c))
}

pub fn h1(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<usize> {
    h0(c, &dual_into_omega(c, f), settings)
}

/// `Σ_P [M_P : O_P] + deg D`, without the Euler check.
pub fn raw_degree(c: &CurveModel, f: &RankOneSheaf) -> i64 {
    let local: i64 = c.clusters.iter().zip(&f.stalks).map(|(cl, m)| m.relative_index(&cl.ring())).sum();
    local + f.divisor_degree()
}

/// Degree, checked against `h0 - h1 = deg + 1 - g`.
pub fn sheaf_degree(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<i64> {
    let deg = raw_degree(c, f);
    let chi = h0(c, f, settings)? as i64 - h1(c, f, settings)? as i64;
    if chi != deg + 1 - c.genus() as i64 {
        return Err(Error::InconsistentEuler(format!("h0 - h1 = {chi}, deg + 1 - g = {}", deg + 1 - c.genus() as i64)));
    }
    Ok(deg)
}

/// Isomorphic copy `φ F` with `φ = ∏ (t - a_i)^(-ν_i)`, moving every stalk
/// to valuation zero so windows stay short for high tensor powers.
pub fn twist_to_origin(c: &CurveModel, f: &RankOneSheaf) -> RankOneSheaf {
    // φ = ∏ (t - a)^(-ν_a)
    let mut factors: Vec<(Q, i64)> = Vec::new();
    let mut shift = 0;
    for (cl, m) in c.clusters.iter().zip(&f.stalks) {
        for (a, nu) in cl.points.iter().zip(m.valuation()) {
            shift += nu;
            if nu != 0 {
                factors.push((a.clone(), -nu));
            }
        }
    }
    let stalks = c
        .clusters
        .iter()
        .zip(&f.stalks)
        .map(|(cl, m)| {
            let germ: Vec<TruncSeries> = cl
                .points
                .iter()
                .enumerate()
                .map(|(i, a)| product_germ(&factors, a, m.hi()[i] - m.lo()[i] + 1))
                .collect();
            m.scale(&germ)
        })
        .collect();
    let divisor = f.divisor.iter().map(|(p, d)| (p.clone(), *d)).chain([(Place::Infinity, -shift)]);
    RankOneSheaf::new(stalks, divisor)
}

/// Germ at `a` of `∏ (t - b)^e`, known through `extra` terms past its valuation.
fn product_germ(factors: &[(Q, i64)], a: &Q, extra: i64) -> TruncSeries {
    let n = extra.max(1) as usize;
    let mut germ = TruncSeries::new(a.clone(), 0, unit_coeffs(n));
    for (b, e) in factors {
        let d = a - b;
        let factor = if d.is_zero() {
            TruncSeries::new(a.clone(), *e, unit_coeffs(n))
        } else {
            // (d + u)^e = Σ binom(e, j) d^(e - j) u^j
            let mut coeffs = Vec::with_capacity(n);
            let mut x = d.pow(*e as i32);
            for j in 0..n as i64 {
                coeffs.push(x.clone());
                x = x * Q::from_integer((e - j).into()) / (Q::from_integer((j + 1).into()) * &d);
            }
            TruncSeries::new(a.clone(), 0, coeffs)
        };
        germ = germ.mul(&factor);
    }
    germ
}

fn unit_coeffs(n: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[0] = Q::one();
    v
}

/// `F^{⊗l}` for a sheaf whose stalks are modules over the given rings.
pub fn tensor_power(c: &CurveModel, f: &RankOneSheaf, l: usize) -> RankOneSheaf {
    let stalks = c
        .clusters
        .iter()
        .zip(&f.stalks)
        .map(|(cl, m)| m.power(&cl.ring(), l))
        .collect();
    let divisor = f.divisor.iter().map(|(p, d)| (p.clone(), d * l as i64));
    twist_to_origin(c, &RankOneSheaf::new(stalks, divisor))
}

/// Line bundle `O(D)` for a divisor on the smooth locus.
pub fn line_bundle(c: &CurveModel, d: &[(Place, i64)]) -> Result<RankOneSheaf> {
    for (p, _) in d {
        if let Place::Finite(a) = p {
            if c.is_branch_point(a) {
                return Err(Error::SupportOnSingular(fmt_q(a)));
            }
        }
    }
    Ok(RankOneSheaf::new(c.clusters.iter().map(|cl| cl.ring()).collect(), d.iter().cloned()))
}

/// The submodule of `ν_* O(n)` generated by `1, t, …, t^n`, on a curve
/// with a unique multiple point whose maximal ideal is the conductor.
pub fn eks_sheaf(c: &CurveModel, n: usize) -> Result<RankOneSheaf> {
    if c.clusters.len() != 1 || c.clusters[0].basis.dim() != 1 {
        return Err(Error::NotNearlyNormal);
    }
    let g = c.genus();
    if n < 1 || n + 1 > g {
        return Err(Error::BadRange(format!("EKS sheaf needs 1 ≤ n ≤ g-1 = {}, got {n}", g.saturating_sub(1))));
    }
    let cl = &c.clusters[0];
    let top = cl.conductor.clone();
    let germs: Vec<Vec<TruncSeries>> = (0..=n)
        .map(|k| {
            let f = RatFunc::poly(Poly::monomial(Q::one(), k));
            cl.points.iter().zip(&top).map(|(a, &t)| expand_at(&f, a, t)).collect()
        })
        .collect();
    let span = FracModule::span_of_germs(&germs, vec![0; cl.branches()], top);
    let stalk = cl.ring().mul(&span);
    Ok(RankOneSheaf::new(vec![stalk], [(Place::Infinity, n as i64)]))
}

/// Germ of a rational function, exact through `u^(ν + extra - 1)`.
fn germ_with_margin(f: &RatFunc, a: &Q, extra: i64) -> TruncSeries {
    let nu = f.num.root_order(a) as i64 - f.den.root_order(a) as i64;
    expand_at(f, a, nu + extra)
}

/// `φ G = F` for a function `φ`.
fn multiplier_matches(c: &CurveModel, phi: &RatFunc, g: &RankOneSheaf, f: &RankOneSheaf) -> bool {
    for (k, cl) in c.clusters.iter().enumerate() {
        let mg = &g.stalks[k];
        let germ: Vec<TruncSeries> = cl
            .points
            .iter()
            .enumerate()
            .map(|(i, a)| germ_with_margin(phi, a, mg.hi()[i] - mg.lo()[i] + 1))
            .collect();
        if mg.scale(&germ) != f.stalks[k] {
            return false;
        }
    }
    // order of φ at smooth places must be D_G - D_F
    let branch = c.branch_points();
    let num = phi.num.strip_roots(&branch);
    let den = phi.den.strip_roots(&branch);
    let mut want_num = Poly::one();
    let mut want_den = Poly::one();
    let mut places: Vec<&Place> = g.divisor.keys().chain(f.divisor.keys()).collect();
    places.sort();
    places.dedup();
    let mut e_inf = 0;
    for p in places {
        let e = g.divisor_at(p) - f.divisor_at(p);
        match p {
            Place::Infinity => e_inf = e,
            Place::Finite(a) if e > 0 => want_num = &want_num * &Poly::linear_root(a).pow(e as u32),
            Place::Finite(a) if e < 0 => want_den = &want_den * &Poly::linear_root(a).pow((-e) as u32),
            _ => {}
        }
    }
    if (&num * &want_den).monic() != (&den * &want_num).monic() {
        return false;
    }
    phi.den.deg_or(0) - phi.num.deg_or(0) == e_inf
}

/// `F ≅ G` iff `Hom(G, F)` has a one-dimensional space of sections whose
/// generator carries `G` onto `F`.
pub fn isomorphic(c: &CurveModel, f: &RankOneSheaf, g: &RankOneSheaf, settings: &Settings) -> Result<bool> {
    let h = hom(g, f);
    let s = sections(c, &h, settings)?;
    if s.dim() != 1 {
        return Ok(false);
    }
    let phi = s.functions().remove(0);
    Ok(multiplier_matches(c, &phi, g, f))
}

/// Global sections generate every stalk, the smooth locus and infinity.
pub fn generated_by_sections(c: &CurveModel, f: &RankOneSheaf, settings: &Settings) -> Result<bool> {
    let s = sections(c, f, settings)?;
    if s.dim() == 0 {
        return Ok(false);
    }
    let funcs = s.functions();
    for (cl, m) in c.clusters.iter().zip(&f.stalks) {
        let top: Vec<i64> = (0..cl.branches()).map(|i| m.hi()[i].max(cl.conductor[i] + m.lo()[i])).collect();
        settings.guard(cl, top.iter().zip(m.lo()).map(|(t, l)| t - l).max().unwrap_or(0), "generation check")?;
        let germs: Vec<Vec<TruncSeries>> = funcs
            .iter()
            .map(|phi| cl.points.iter().zip(&top).map(|(a, &n)| expand_at(phi, a, n)).collect())
            .collect();
        if germs.iter().any(|g| g.iter().zip(m.lo()).any(|(s, &l)| s.valuation() < l)) {
            return Ok(false);
        }
        let span = FracModule::span_of_germs(&germs, m.lo().to_vec(), top);
        if cl.ring().mul(&span) != *m {
            return Ok(false);
        }
    }
    let branch = c.branch_points();
    let g = s.numerators.iter().fold(Poly::zero(), |acc, p| Poly::gcd(&acc, p)).strip_roots(&branch);
    let mut want = Poly::one();
    for (p, &d) in &f.divisor {
        if let (Place::Finite(a), true) = (p, d < 0) {
            want = &want * &Poly::linear_root(a).pow((-d) as u32);
        }
    }
    if g.monic() != want.monic() {
        return Ok(false);
    }
    let (den, bound) = ansatz(c, f);
    let max_deg = s.numerators.iter().map(|p| p.deg_or(-1)).max().unwrap_or(-1);
    Ok(max_deg == bound && den == s.denominator)
}

/// `λ^* O(n)`: `n` times the fiber of `λ` through a smooth rational point.
pub fn lambda_pullback(c: &CurveModel, lambda: &RatFunc, n: i64) -> Result<RankOneSheaf> {
    for k in 0..100i64 {
        let t0 = q(k);
        if c.is_branch_point(&t0) || lambda.den.eval(&t0).is_zero() {
            continue;
        }
        let l0 = lambda.num.eval(&t0) / lambda.den.eval(&t0);
        let h = &lambda.num - &lambda.den.scale(&l0);
        let rest = h.div_exact(&Poly::linear_root(&t0)).expect("t0 lies on its own fiber");
        let other = match rest.degree() {
            Some(0) => Place::Infinity,
            Some(1) => Place::Finite(-rest.coeff(0) / rest.coeff(1)),
            _ => continue,
        };
        if let Place::Finite(a) = &other {
            if c.is_branch_point(a) {
                continue;
            }
        }
        return line_bundle(c, &[(Place::Finite(t0), n), (other, n)]);
    }
    Err(Error::ProbeExhausted(100))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqualityCase {
    Trivial,
    Canonical,
    HyperellipticPullback(usize),
    Eks(usize),
}

impl fmt::Display for EqualityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqualityCase::Trivial => write!(f, "trivial"),
            EqualityCase::Canonical => write!(f, "canonical"),
            EqualityCase::HyperellipticPullback(n) => write!(f, "hyperelliptic-pullback({n})"),
            EqualityCase::Eks(n) => write!(f, "eks({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordReport {
    pub label: String,
    pub h0: usize,
    pub h1: usize,
    pub degree: i64,
    pub invertible: bool,
    pub bound_holds: bool,
    pub equality_case: Option<EqualityCase>,
    pub generated_by_globals: Option<bool>,
    pub involution_holds: bool,
}

impl CliffordReport {
    pub fn sum(&self) -> usize {
        self.h0 + self.h1
    }

    pub fn applicable(&self) -> bool {
        self.h0 >= 1 && self.h1 >= 1
    }
}

/// What the audit needs to classify equality cases.
#[derive(Clone, Debug, Default)]
pub struct AuditContext {
    pub lambda: Option<RatFunc>,
    pub nearly_normal: bool,
}

/// One sheaf of the audit; errors signal a violated property.
pub fn audit_one(
    c: &CurveModel,
    label: &str,
    f: &RankOneSheaf,
    ctx: &AuditContext,
    settings: &Settings,
) -> Result<CliffordReport> {
    let g = c.genus();
    let h0v = h0(c, f, settings)?;
    let dual = dual_into_omega(c, f);
    let h1v = h0(c, &dual, settings)?;
    let degree = raw_degree(c, f);
    if h0v as i64 - h1v as i64 != degree + 1 - g as i64 {
        return Err(Error::InconsistentEuler(format!("{label}: h0 = {h0v}, h1 = {h1v}, deg = {degree}")));
    }
    let involution_holds = dual_into_omega(c, &dual) == *f;
    let mut report = CliffordReport {
        label: label.to_string(),
        h0: h0v,
        h1: h1v,
        degree,
        invertible: f.is_invertible(c),
        bound_holds: true,
        equality_case: None,
        generated_by_globals: None,
        involution_holds,
    };
    if !report.applicable() {
        return Ok(report);
    }
    report.bound_holds = h0v + h1v <= g + 1;
    if !report.bound_holds {
        return Err(Error::CounterexampleFound(format!("{label}: h0 + h1 = {} > g + 1", h0v + h1v)));
    }
    if h0v + h1v < g + 1 {
        return Ok(report);
    }
    report.generated_by_globals = Some(generated_by_sections(c, f, settings)?);
    let case = if h0v == 1 {
        isomorphic(c, f, &RankOneSheaf::structure(c), settings)?.then_some(EqualityCase::Trivial)
    } else if h1v == 1 {
        isomorphic(c, f, &RankOneSheaf::omega(c), settings)?.then_some(EqualityCase::Canonical)
    } else if let Some(lambda) = &ctx.lambda {
        let n = h0v - 1;
        isomorphic(c, f, &lambda_pullback(c, lambda, n as i64)?, settings)?
            .then_some(EqualityCase::HyperellipticPullback(n))
    } else if ctx.nearly_normal {
        let n = h0v - 1;
        (isomorphic(c, f, &eks_sheaf(c, n)?, settings)? && !report.invertible).then_some(EqualityCase::Eks(n))
    } else {
        None
    };
    match case {
        Some(case) => report.equality_case = Some(case),
        None => {
            return Err(Error::CounterexampleFound(format!(
                "{label}: equality h0 + h1 = g + 1 with h0 = {h0v} outside the classified cases"
            )))
        }
    }
    Ok(report)
}

pub fn clifford_audit(
    c: &CurveModel,
    sheaves: &[(String, RankOneSheaf)],
    ctx: &AuditContext,
    settings: &Settings,
) -> Result<Vec<CliffordReport>> {
    sheaves.par_iter().map(|(label, f)| audit_one(c, label, f, ctx, settings)).collect()
}

const SLICE_CAP: usize = 4096;

/// Local choices at a cluster: monomial modules `S ⊆ E ⊆ N` closed under
/// `+S` on one-branch monomial clusters, else `O_P` and `Obar_P`.
fn local_options(cl: &crate::curve::Cluster) -> Vec<(String, FracModule)> {
    let Some(sg) = cl.semigroup() else {
        return vec![("O".into(), cl.ring()), ("Obar".into(), cl.normalization())];
    };
    let c = cl.conductor[0];
    let gaps: Vec<i64> = (0..c).filter(|e| !sg.contains(e)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << gaps.len()) {
        let mut e: Vec<i64> = sg.clone();
        e.extend(gaps.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x));
        e.sort();
        let closed = e.iter().all(|&x| sg.iter().all(|&s| s == 0 || x + s >= c || e.contains(&(x + s))));
        if !closed {
            continue;
        }
        let n = c as usize;
        let vectors = e.iter().map(|&x| crate::algebra::linalg::unit(n, x as usize)).collect();
        let label = format!("{{{}}}", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        out.push((label, FracModule::from_vectors(vec![0], vec![c], vectors)));
    }
    out
}

fn smooth_probe(c: &CurveModel) -> Q {
    (0..).map(q).find(|t| !c.is_branch_point(t)).unwrap()
}

/// The finite slice of sheaves audited for the Clifford bound.
pub fn clifford_slice(c: &CurveModel, ctx: &AuditContext) -> Result<Vec<(String, RankOneSheaf)>> {
    let g = c.genus() as i64;
    let options: Vec<Vec<(String, FracModule)>> = c.clusters.iter().map(local_options).collect();
    let product: usize = options.iter().map(|o| o.len()).product::<usize>() * (2 * g - 1) as usize;
    let mut combos: Vec<Vec<usize>> = Vec::new();
    if product <= SLICE_CAP {
        combos.push(Vec::new());
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    (0..opts.len()).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
    } else {
        let base: Vec<usize> = options
            .iter()
            .map(|o| o.iter().position(|(l, _)| l == "O").unwrap_or(0))
            .collect();
        for (k, opts) in options.iter().enumerate() {
            for j in 0..opts.len() {
                let mut v = base.clone();
                v[k] = j;
                if !combos.contains(&v) {
                    combos.push(v);
                }
            }
        }
    }
    let mut out = Vec::new();
    for combo in &combos {
        let stalks: Vec<FracModule> = combo.iter().zip(&options).map(|(&k, o)| o[k].1.clone()).collect();
        let tag: Vec<String> = c
            .clusters
            .iter()
            .zip(combo.iter().zip(&options))
            .map(|(cl, (&k, o))| format!("{}:{}", cl.name, o[k].0))
            .collect();
        for d in 0..=(2 * g - 2) {
            out.push((
                format!("{} + {d}inf", tag.join(" ")),
                RankOneSheaf::new(stalks.clone(), [(Place::Infinity, d)]),
            ));
        }
    }
    let s = smooth_probe(c);
    for d in 0..=2 * g {
        for j in 0..=d.min(2) {
            out.push((
                format!("O({j}[{}] + {}inf)", fmt_q(&s), d - j),
                line_bundle(c, &[(Place::Finite(s.clone()), j), (Place::Infinity, d - j)])?,
            ));
        }
    }
    if let Some(lambda) = &ctx.lambda {
        for n in 1..g {
            out.push((format!("lambda^*O({n})"), lambda_pullback(c, lambda, n)?));
        }
    }
    if ctx.nearly_normal {
        for n in 1..g as usize {
            out.push((format!("EKS({n})"), eks_sheaf(c, n)?));
        }
    }
    out.push(("O".into(), RankOneSheaf::structure(c)));
    out.push(("omega".into(), RankOneSheaf::omega(c)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_cluster, ClusterKind};

    fn sg(gens: &[u64]) -> CurveModel {
        CurveModel::validated(vec![make_cluster("P", vec![q(0)], &ClusterKind::Semigroup(gens.to_vec())).unwrap()]).unwrap()
    }

    #[test]
    fn cohomology_of_basic_sheaves() {
        let s = Settings::default();
        let e1 = sg(&[3, 4, 5]);
        let o = RankOneSheaf::structure(&e1);
        let w = RankOneSheaf::omega(&e1);
        assert_eq!((h0(&e1, &o, &s).unwrap(), h1(&e1, &o, &s).unwrap()), (1, 2));
        assert_eq!((h0(&e1, &w, &s).unwrap(), h1(&e1, &w, &s).unwrap()), (2, 1));
        assert_eq!(sheaf_degree(&e1, &w, &s).unwrap(), 2);
        assert_eq!(sheaf_degree(&e1, &o, &s).unwrap(), 0);
    }

    #[test]
    fn eks_on_345() {
        let s = Settings::default();
        let e1 = sg(&[3, 4, 5]);
        let f = eks_sheaf(&e1, 1).unwrap();
        assert_eq!((h0(&e1, &f, &s).unwrap(), h1(&e1, &f, &s).unwrap()), (2, 1));
        assert_eq!(sheaf_degree(&e1, &f, &s).unwrap(), 2);
        assert!(!f.is_invertible(&e1));
        assert!(matches!(eks_sheaf(&e1, 0), Err(Error::BadRange(_))));
        let e4 = sg(&[4, 5, 6, 7]);
        let f = eks_sheaf(&e4, 2).unwrap();
        assert_eq!((h0(&e4, &f, &s).unwrap(), h1(&e4, &f, &s).unwrap()), (3, 1));
    }

    #[test]
    fn isomorphism_and_duality() {
        let s = Settings::default();
        let e1 = sg(&[3, 4, 5]);
        let w = RankOneSheaf::omega(&e1);
        let o = RankOneSheaf::structure(&e1);
        assert!(isomorphic(&e1, &dual_into_omega(&e1, &w), &o, &s).unwrap());
        assert!(isomorphic(&e1, &w, &w, &s).unwrap());
        assert!(!isomorphic(&e1, &w, &o, &s).unwrap());
        // [1] - inf is principal on the line but t - 1 is no unit of the cusp
        let twisted = line_bundle(&e1, &[(Place::Finite(q(1)), 1), (Place::Infinity, -1)]).unwrap();
        assert!(!isomorphic(&e1, &twisted, &o, &s).unwrap());
        let cube = Poly::monomial(q(1), 3);
        let germ = vec![expand_at(&RatFunc::poly(cube), &q(0), 12)];
        let shifted = RankOneSheaf::new(vec![e1.clusters[0].ring().scale(&germ)], [(Place::Infinity, 3)]);
        assert!(isomorphic(&e1, &shifted, &o, &s).unwrap());
        assert!(matches!(line_bundle(&e1, &[(Place::Finite(q(0)), 1)]), Err(Error::SupportOnSingular(_))));
    }

    #[test]
    fn one_point_bundle() {
        let s = Settings::default();
        let e1 = sg(&[3, 4, 5]);
        let f = line_bundle(&e1, &[(Place::Finite(q(1)), 1)]).unwrap();
        assert_eq!(h0(&e1, &f, &s).unwrap(), 1);
    }

    #[test]
    fn h0_matches_section_basis() {
        let s = Settings::default();
        for gens in [&[3u64, 4, 5][..], &[4, 5, 6, 7], &[3, 5], &[2, 5]] {
            let c = sg(gens);
            let w = RankOneSheaf::omega(&c);
            for d in -4..12 {
                let divisor = w.divisor.iter().map(|(p, m)| (p.clone(), *m)).chain([(Place::Infinity, d)]);
                let f = RankOneSheaf::new(w.stalks.clone(), divisor);
                assert_eq!(h0(&c, &f, &s).unwrap(), sections(&c, &f, &s).unwrap().numerators.len(), "{gens:?} {d}");
            }
            let f = line_bundle(&c, &[(Place::Finite(q(1)), -2), (Place::Infinity, 5)]).unwrap();
            assert_eq!(h0(&c, &f, &s).unwrap(), sections(&c, &f, &s).unwrap().numerators.len());
            let f = twist_to_origin(&c, &w);
            assert_eq!(h0(&c, &f, &s).unwrap(), sections(&c, &f, &s).unwrap().numerators.len());
        }
    }
}
