//! Fractional modules over the completed semilocal ring `∏ k[[u_i]]` of a
//! cluster of branches.
//!
//! A module `M` is stored as a window of exponents `[lo_i, hi_i)` per branch
//! and a subspace of the window coordinates, with the convention that
//! `u^hi · ∏ k[[u_i]]` is contained in `M`. Every operation below is exact.

use num_traits::Zero;

use super::linalg::{unit, Subspace};
use super::{TruncSeries, Q};

#[derive(Clone, Debug)]
pub struct FracModule {
    lo: Vec<i64>,
    hi: Vec<i64>,
    space: Subspace,
}

impl PartialEq for FracModule {
    fn eq(&self, other: &Self) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.lo == b.lo && a.hi == b.hi && a.space == b.space
    }
}

impl Eq for FracModule {}

fn width(lo: &[i64], hi: &[i64]) -> usize {
    lo.iter().zip(hi).map(|(l, h)| (h - l).max(0) as usize).sum()
}

fn offsets(lo: &[i64], hi: &[i64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(lo.len());
    let mut acc = 0;
    for (l, h) in lo.iter().zip(hi) {
        out.push(acc);
        acc += (h - l).max(0) as usize;
    }
    out
}

impl FracModule {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>, space: Subspace) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(l, h)| l <= h), "empty window");
        assert_eq!(space.ambient(), width(&lo, &hi));
        FracModule { lo, hi, space }
    }

    pub fn from_vectors(lo: Vec<i64>, hi: Vec<i64>, vectors: Vec<Vec<Q>>) -> Self {
        let n = width(&lo, &hi);
        FracModule::new(lo, hi, Subspace::from_vectors(n, vectors))
    }

    /// The principal module `u^v · ∏ k[[u_i]]`.
    pub fn power_of_u(v: Vec<i64>) -> Self {
        FracModule::new(v.clone(), v, Subspace::zero(0))
    }

    pub fn branches(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn ambient(&self) -> usize {
        self.space.ambient()
    }

    pub fn index(&self, branch: usize, e: i64) -> usize {
        debug_assert!(e >= self.lo[branch] && e < self.hi[branch]);
        offsets(&self.lo, &self.hi)[branch] + (e - self.lo[branch]) as usize
    }

    /// Per-branch coefficient slices of a window vector.
    fn split<'a>(&self, v: &'a [Q]) -> Vec<&'a [Q]> {
        let off = offsets(&self.lo, &self.hi);
        (0..self.branches())
            .map(|i| {
                let w = (self.hi[i] - self.lo[i]) as usize;
                &v[off[i]..off[i] + w]
            })
            .collect()
    }

    /// Minimal valuation on each branch.
    pub fn valuation(&self) -> Vec<i64> {
        let mut nu = self.hi.clone();
        for row in self.space.rows() {
            for (i, part) in self.split(row).iter().enumerate() {
                if let Some(k) = part.iter().position(|c| !c.is_zero()) {
                    nu[i] = nu[i].min(self.lo[i] + k as i64);
                }
            }
        }
        nu
    }

    /// Same module in the larger window `[lo, hi)`.
    pub fn extend_to(&self, lo: &[i64], hi: &[i64]) -> FracModule {
        assert!(lo.iter().zip(&self.lo).all(|(a, b)| a <= b));
        assert!(hi.iter().zip(&self.hi).all(|(a, b)| a >= b));
        let n = width(lo, hi);
        let off = offsets(lo, hi);
        let mut vectors: Vec<Vec<Q>> = Vec::new();
        for row in self.space.rows() {
            let mut v = vec![Q::zero(); n];
            for (i, part) in self.split(row).iter().enumerate() {
                let base = off[i] + (self.lo[i] - lo[i]) as usize;
                v[base..base + part.len()].clone_from_slice(part);
            }
            vectors.push(v);
        }
        for i in 0..lo.len() {
            for e in self.hi[i]..hi[i] {
                vectors.push(unit(n, off[i] + (e - lo[i]) as usize));
            }
        }
        FracModule::from_vectors(lo.to_vec(), hi.to_vec(), vectors)
    }

    /// Tightest window: `lo` is the valuation and `hi` the least top.
    pub fn normalized(&self) -> FracModule {
        let nu = self.valuation();
        let mut top = self.hi.clone();
        for i in 0..self.branches() {
            while top[i] > nu[i] && self.space.contains(&unit(self.ambient(), self.index(i, top[i] - 1))) {
                top[i] -= 1;
            }
        }
        if nu == self.lo && top == self.hi {
            return self.clone();
        }
        let keep: Vec<(usize, usize)> = (0..self.branches())
            .map(|i| {
                let start = self.index_or_end(i, nu[i]);
                (start, (top[i] - nu[i]) as usize)
            })
            .collect();
        let vectors = self
            .space
            .rows()
            .iter()
            .map(|row| {
                keep.iter()
                    .flat_map(|&(s, w)| row[s..s + w].iter().cloned())
                    .collect()
            })
            .collect();
        FracModule::from_vectors(nu, top, vectors)
    }

    fn index_or_end(&self, branch: usize, e: i64) -> usize {
        offsets(&self.lo, &self.hi)[branch] + (e - self.lo[branch]) as usize
    }

    fn common_window(&self, other: &FracModule) -> (Vec<i64>, Vec<i64>) {
        let lo = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect();
        let hi = self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect();
        (lo, hi)
    }

    /// `other ⊆ self`
    pub fn contains_module(&self, other: &FracModule) -> bool {
        let (lo, hi) = self.common_window(other);
        let a = self.extend_to(&lo, &hi);
        let b = other.extend_to(&lo, &hi);
        b.space.is_subspace_of(&a.space)
    }

    pub fn sum(&self, other: &FracModule) -> FracModule {
        let (lo, hi) = self.common_window(other);
        let a = self.extend_to(&lo, &hi);
        let b = other.extend_to(&lo, &hi);
        FracModule::new(lo, hi, a.space.sum(&b.space)).normalized()
    }

    pub fn intersect(&self, other: &FracModule) -> FracModule {
        let (lo, hi) = self.common_window(other);
        let a = self.extend_to(&lo, &hi);
        let b = other.extend_to(&lo, &hi);
        FracModule::new(lo, hi, a.space.intersect(&b.space)).normalized()
    }

    /// `dim(M / u^top)` for a top at or above `hi`.
    fn dim_below(&self, lo: &[i64], top: &[i64]) -> usize {
        self.extend_to(lo, top).space.dim()
    }

    /// `dim(self / sub)`, assuming `sub ⊆ self`.
    pub fn colength(&self, sub: &FracModule) -> usize {
        debug_assert!(self.contains_module(sub));
        let (lo, hi) = self.common_window(sub);
        self.dim_below(&lo, &hi) - sub.dim_below(&lo, &hi)
    }

    /// Relative index `[self : other] = dim(self/N) - dim(other/N)` for any
    /// common submodule `N`.
    pub fn relative_index(&self, other: &FracModule) -> i64 {
        let (lo, hi) = self.common_window(other);
        self.dim_below(&lo, &hi) as i64 - other.dim_below(&lo, &hi) as i64
    }

    /// Coefficients of a window vector as per-branch series.
    pub fn row_series(&self, row: &[Q]) -> Vec<TruncSeries> {
        self.split(row)
            .iter()
            .enumerate()
            .map(|(i, part)| TruncSeries::new(Q::zero(), self.lo[i], part.to_vec()))
            .collect()
    }

    /// A window vector as an exact Laurent polynomial per branch, padded
    /// with zeros through `u^(order_i - 1)`.
    pub fn element(&self, row: &[Q], order: &[i64]) -> Vec<TruncSeries> {
        self.row_series(row)
            .into_iter()
            .zip(order)
            .map(|(s, &n)| s.pad_to(n))
            .collect()
    }

    /// Window coordinates of a germ, or `None` if the germ has terms below
    /// the window. Panics if the germ is not known up to `hi`.
    pub fn germ_vector(&self, germ: &[TruncSeries]) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); self.ambient()];
        let off = offsets(&self.lo, &self.hi);
        for (i, s) in germ.iter().enumerate() {
            assert!(s.order() >= self.hi[i], "germ precision below module top");
            if s.valuation() < self.lo[i] {
                return None;
            }
            for e in self.lo[i]..self.hi[i] {
                v[off[i] + (e - self.lo[i]) as usize] = s.coeff(e);
            }
        }
        Some(v)
    }

    pub fn contains_germ(&self, germ: &[TruncSeries]) -> bool {
        match self.germ_vector(germ) {
            Some(v) => self.space.contains(&v),
            None => false,
        }
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &FracModule) -> FracModule {
        let a = self.normalized();
        let b = other.normalized();
        let r = a.branches();
        let lo: Vec<i64> = (0..r).map(|i| a.lo[i] + b.lo[i]).collect();
        let hi: Vec<i64> = (0..r)
            .map(|i| (a.hi[i] + b.lo[i]).min(a.lo[i] + b.hi[i]))
            .collect();
        let n = width(&lo, &hi);
        let off = offsets(&lo, &hi);
        let mut out = Subspace::zero(n);
        for ra in a.space.rows() {
            let pa = a.split(ra);
            for rb in b.space.rows() {
                let pb = b.split(rb);
                let mut v = vec![Q::zero(); n];
                for i in 0..r {
                    mul_into(&mut v[off[i]..off[i] + (hi[i] - lo[i]) as usize], lo[i], pa[i], a.lo[i], pb[i], b.lo[i]);
                }
                out.insert(v);
            }
        }
        FracModule::new(lo, hi, out).normalized()
    }

    /// `ring · self^l` for a module `self` over `ring`.
    pub fn power(&self, ring: &FracModule, l: usize) -> FracModule {
        if let Some(x) = self.generator(ring) {
            return (0..l).fold(ring.clone(), |acc, _| acc.scale_exact(&x));
        }
        let (mut out, mut base, mut k) = (ring.clone(), self.clone(), l);
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// A germ `x` with `self = ring · x`, when `u^lo`, one of the basis
    /// rows or their weighted sum is such a generator.
    pub fn generator(&self, ring: &FracModule) -> Option<Vec<TruncSeries>> {
        let m = self.normalized();
        let monomial: Vec<TruncSeries> =
            m.lo.iter().map(|&v| TruncSeries::new(Q::zero(), v, vec![Q::from_integer(1.into())])).collect();
        if ring.scale_exact(&monomial) == m {
            return Some(monomial);
        }
        let mut candidates: Vec<Vec<Q>> = m.space.rows().to_vec();
        let mut combo = vec![Q::zero(); m.ambient()];
        for (k, row) in m.space.rows().iter().enumerate() {
            let w = Q::from_integer((k as i64 + 1).into());
            for (c, x) in combo.iter_mut().zip(row) {
                *c += &w * x;
            }
        }
        if candidates.len() > 1 {
            candidates.push(combo);
        }
        candidates.into_iter().map(|row| m.element(&row, &m.hi)).find(|x| ring.scale_exact(x) == m)
    }

    /// Multiplication by a single germ.
    pub fn scale(&self, x: &[TruncSeries]) -> FracModule {
        let m = self.normalized();
        let r = m.branches();
        let nu: Vec<i64> = x.iter().map(|s| s.valuation()).collect();
        let lo: Vec<i64> = (0..r).map(|i| m.lo[i] + nu[i]).collect();
        let hi: Vec<i64> = (0..r).map(|i| m.hi[i] + nu[i]).collect();
        for i in 0..r {
            assert!(x[i].order() >= hi[i] - m.lo[i], "germ precision too low for scaling");
        }
        let n = width(&lo, &hi);
        let off = offsets(&lo, &hi);
        let vectors = m
            .space
            .rows()
            .iter()
            .map(|row| {
                let parts = m.split(row);
                let mut v = vec![Q::zero(); n];
                for i in 0..r {
                    mul_into(&mut v[off[i]..off[i] + (hi[i] - lo[i]) as usize], lo[i], parts[i], m.lo[i], &x[i].coeffs, x[i].lo);
                }
                v
            })
            .collect();
        FracModule::from_vectors(lo, hi, vectors).normalized()
    }

    /// Multiplication by an exact Laurent polynomial germ.
    pub fn scale_exact(&self, x: &[TruncSeries]) -> FracModule {
        let m = self.normalized();
        let padded: Vec<TruncSeries> = x
            .iter()
            .enumerate()
            .map(|(i, s)| s.pad_to(s.valuation().min(s.order()) + m.hi[i] - m.lo[i] + 1))
            .collect();
        m.scale(&padded)
    }

    /// Ideal quotient `(self : j) = { x : x·j ⊆ self }`.
    pub fn colon(&self, j: &FracModule) -> FracModule {
        let i = self.normalized();
        let j = j.normalized();
        let r = i.branches();
        let xlo: Vec<i64> = (0..r).map(|b| i.lo[b] - j.lo[b]).collect();
        let xhi: Vec<i64> = (0..r).map(|b| i.hi[b] - j.lo[b]).collect();
        let top: Vec<i64> = (0..r).map(|b| j.hi[b].max(j.lo[b] + i.hi[b] - i.lo[b])).collect();
        let jx = j.extend_to(&j.lo, &top);
        let nx = width(&xlo, &xhi);
        let ioff = offsets(&i.lo, &i.hi);
        let ni = i.ambient();
        // residues[k][m] = reduce(e_k · m) modulo i
        let mut eqs: Vec<Vec<Q>> = Vec::new();
        let mut columns: Vec<Vec<Vec<Q>>> = Vec::with_capacity(nx);
        for b in 0..r {
            for e in xlo[b]..xhi[b] {
                let mut per_m = Vec::with_capacity(jx.space.dim());
                for row in jx.space.rows() {
                    let part = jx.split(row)[b];
                    let mut v = vec![Q::zero(); ni];
                    for (k, c) in part.iter().enumerate() {
                        let exp = e + jx.lo[b] + k as i64;
                        if exp >= i.hi[b] {
                            break;
                        }
                        if !c.is_zero() {
                            v[ioff[b] + (exp - i.lo[b]) as usize] = c.clone();
                        }
                    }
                    per_m.push(i.space.reduce(&v));
                }
                columns.push(per_m);
            }
        }
        for m in 0..jx.space.dim() {
            for c in 0..ni {
                let row: Vec<Q> = columns.iter().map(|col| col[m][c].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
        let sol = super::nullspace(&eqs, nx);
        FracModule::new(xlo, xhi, sol).normalized()
    }

    /// Restriction to a subset of the branches (multiplication by the
    /// corresponding idempotent).
    pub fn project(&self, keep: &[usize]) -> FracModule {
        let lo: Vec<i64> = keep.iter().map(|&i| self.lo[i]).collect();
        let hi: Vec<i64> = keep.iter().map(|&i| self.hi[i]).collect();
        let vectors = self
            .space
            .rows()
            .iter()
            .map(|row| {
                let parts = self.split(row);
                keep.iter().flat_map(|&i| parts[i].iter().cloned()).collect()
            })
            .collect();
        FracModule::from_vectors(lo, hi, vectors).normalized()
    }

    /// Span of germs plus `u^top`, for germs known at least to `top`.
    pub fn span_of_germs(germs: &[Vec<TruncSeries>], lo: Vec<i64>, top: Vec<i64>) -> FracModule {
        let shell = FracModule::new(lo.clone(), top.clone(), Subspace::zero(width(&lo, &top)));
        let vectors = germs
            .iter()
            .map(|g| shell.germ_vector(g).expect("germ below window"))
            .collect();
        FracModule::from_vectors(lo, top, vectors).normalized()
    }

    /// Jacobson radical of a ring module: elements with zero constant term
    /// on every branch.
    pub fn radical(&self) -> FracModule {
        let one: Vec<i64> = self.hi.iter().map(|&h| h.max(1)).collect();
        let lo: Vec<i64> = self.lo.iter().map(|&l| l.min(0)).collect();
        let ring = self.extend_to(&lo, &one);
        let n = ring.ambient();
        let vanishing: Vec<Vec<Q>> = (0..n)
            .filter(|&k| {
                !(0..ring.branches()).any(|b| ring.lo[b] <= 0 && 0 < ring.hi[b] && ring.index(b, 0) == k)
            })
            .map(|k| unit(n, k))
            .collect();
        let sub = Subspace::from_vectors(n, vanishing);
        FracModule::new(lo, one, ring.space.intersect(&sub)).normalized()
    }

    /// `dim(M / rad(R)·M)`, the minimal number of generators over a local ring `R`.
    pub fn min_generators(&self, ring: &FracModule) -> usize {
        let rm = ring.radical().mul(self);
        self.colength(&rm)
    }

    /// Constant-term vector of each basis element, after exposing constants.
    pub fn constant_terms(&self) -> Vec<Vec<Q>> {
        let one: Vec<i64> = self.hi.iter().map(|&h| h.max(1)).collect();
        let lo: Vec<i64> = self.lo.iter().map(|&l| l.min(0)).collect();
        let ring = self.extend_to(&lo, &one);
        ring.space
            .rows()
            .iter()
            .map(|row| (0..ring.branches()).map(|b| row[ring.index(b, 0)].clone()).collect())
            .collect()
    }
}

/// Accumulates the product of two coefficient slices into `out`, which
/// covers exponents `[out_lo, out_lo + out.len())`.
fn mul_into(out: &mut [Q], out_lo: i64, a: &[Q], a_lo: i64, b: &[Q], b_lo: i64) {
    let end = out_lo + out.len() as i64;
    for (p, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let ea = a_lo + p as i64;
        for (k, y) in b.iter().enumerate() {
            let e = ea + b_lo + k as i64;
            if e >= end {
                break;
            }
            if e < out_lo || y.is_zero() {
                continue;
            }
            out[(e - out_lo) as usize] += x * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;

    /// Monomial module on one branch: span of `u^e` for listed e, plus `u^top`.
    fn mono(exps: &[i64], top: i64) -> FracModule {
        let lo = exps.iter().copied().min().unwrap_or(top).min(top);
        let n = (top - lo) as usize;
        let vectors = exps.iter().filter(|&&e| e < top).map(|&e| unit(n, (e - lo) as usize)).collect();
        FracModule::from_vectors(vec![lo], vec![top], vectors)
    }

    #[test]
    fn colon_of_principal_ideals() {
        let i = FracModule::power_of_u(vec![2]);
        let j = FracModule::power_of_u(vec![1]);
        assert_eq!(i.colon(&j), FracModule::power_of_u(vec![1]));
    }

    #[test]
    fn endomorphisms_of_maximal_ideal_of_345() {
        let i = FracModule::power_of_u(vec![3]);
        assert_eq!(i.colon(&i), FracModule::power_of_u(vec![0]));
    }

    #[test]
    fn conductor_of_cusp() {
        let o = mono(&[0], 2);
        let obar = FracModule::power_of_u(vec![0]);
        assert_eq!(o.colon(&obar), FracModule::power_of_u(vec![2]));
    }

    #[test]
    fn normalization_finds_top() {
        let m = mono(&[0, 3, 4, 5, 6, 7], 8);
        let n = m.normalized();
        assert_eq!(n.lo(), &[0]);
        assert_eq!(n.hi(), &[3]);
        assert_eq!(n.space().dim(), 1);
    }

    #[test]
    fn product_of_semigroup_ring_with_itself() {
        let o = mono(&[0, 2], 4);
        assert_eq!(o.mul(&o), o);
        let m = mono(&[2], 4);
        let m2 = m.mul(&m);
        assert_eq!(m2, mono(&[4, 6, 7], 8));
    }

    #[test]
    fn two_branch_node() {
        let node = FracModule::from_vectors(vec![0, 0], vec![1, 1], vec![vec![q(1), q(1)]]);
        let obar = FracModule::power_of_u(vec![0, 0]);
        assert_eq!(obar.colength(&node), 1);
        assert_eq!(node.colon(&obar), FracModule::power_of_u(vec![1, 1]));
        assert_eq!(node.radical(), FracModule::power_of_u(vec![1, 1]));
    }

    #[test]
    fn power_agrees_with_repeated_products() {
        // the ring of the cusp <3,4,5>, its canonical module, and a
        // non-principal module over it
        let ring = mono(&[0, 3, 4, 5], 6);
        let omega = mono(&[0, 1, 3, 4, 5], 6);
        let wide = mono(&[1, 2, 3, 4, 5], 6);
        assert!(omega.generator(&ring).is_none());
        assert!(mono(&[2, 5, 6, 7], 8).generator(&ring).is_some());
        for m in [omega, wide, mono(&[2, 5, 6, 7], 8), ring.clone()] {
            for l in 0..5 {
                let slow = (0..l).fold(ring.clone(), |acc, _| acc.mul(&m));
                assert_eq!(m.power(&ring, l), slow, "{m:?} {l}");
            }
        }
    }
}
