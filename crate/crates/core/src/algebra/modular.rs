//! Exact ranks and kernels of integer matrices through modular images.
//!
//! The rank modulo a prime bounds the rational rank from below. A kernel
//! basis found modulo several primes is lifted by Chinese remaindering and
//! rational reconstruction and then checked exactly over the integers,
//! which bounds the rank from above.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::{nullspace, Subspace};
use super::Q;

/// The Mersenne prime `2^61 - 1`, the first modulus tried.
pub const MERSENNE: u64 = (1 << 61) - 1;

const MAX_PRIMES: usize = 256;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p == MERSENNE {
        let x = a as u128 * b as u128;
        let r = (x & MERSENNE as u128) as u64 + (x >> 61) as u64;
        let r = (r & MERSENNE) + (r >> 61);
        if r >= MERSENNE {
            r - MERSENNE
        } else {
            r
        }
    } else {
        (a as u128 * b as u128 % p as u128) as u64
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `2^61 - 1` followed by the largest primes below `2^62`.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = vec![MERSENNE];
        let mut n = (1u64 << 62) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub fn reduce_int(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().unwrap();
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

/// Image of a rational number, or `None` when `p` divides the denominator.
pub fn reduce_q(x: &Q, p: u64) -> Option<u64> {
    let den = reduce_int(x.denom(), p);
    (den != 0).then(|| mul_mod(reduce_int(x.numer(), p), inv_mod(den, p), p))
}

/// Rows scaled by the least common multiple of their denominators.
pub fn integer_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Row echelon form modulo `p`, built one row at a time.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    p: u64,
    ncols: usize,
    pivots: Vec<usize>,
    /// Each row vanishes at the pivots of the rows stored before it.
    rows: Vec<Vec<u64>>,
}

impl ModEchelon {
    pub fn new(ncols: usize, p: u64) -> Self {
        ModEchelon { p, ncols, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (pivot, b) in self.pivots.iter().zip(&self.rows) {
            let f = v[*pivot];
            if f != 0 {
                let f = p - f;
                for j in *pivot..self.ncols {
                    if b[j] != 0 {
                        let x = v[j] + mul_mod(f, b[j], p);
                        v[j] = if x >= p { x - p } else { x };
                    }
                }
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pivot], p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        self.pivots.push(pivot);
        self.rows.push(v);
        true
    }
}

struct Echelon {
    /// Indices of the input rows that were independent of those before them.
    kept: Vec<usize>,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

fn echelon_mod(rows: &[Vec<u64>], ncols: usize, p: u64, cap: usize) -> Echelon {
    let mut e = ModEchelon::new(ncols, p);
    let mut kept = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if e.rank() >= cap {
            break;
        }
        if e.insert(row.clone()) {
            kept.push(i);
        }
    }
    Echelon { kept, pivots: e.pivots, rows: e.rows }
}

/// Rank of rows given modulo `p`, stopping at `cap`.
pub fn rank_mod(rows: &[Vec<u64>], ncols: usize, p: u64, cap: usize) -> usize {
    echelon_mod(rows, ncols, p, cap).rows.len()
}

/// Kernel basis modulo `p`: one vector per free column, listed as its
/// entries at the pivot columns.
fn kernel_mod(e: &Echelon, ncols: usize, p: u64) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let mut order: Vec<usize> = (0..e.rows.len()).collect();
    order.sort_by_key(|&i| e.pivots[i]);
    let pivots: Vec<usize> = order.iter().map(|&i| e.pivots[i]).collect();
    let mut rows: Vec<Vec<u64>> = order.iter().map(|&i| e.rows[i].clone()).collect();
    for i in (0..rows.len()).rev() {
        let (before, rest) = rows.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in before.iter_mut() {
            let f = row[pivots[i]];
            if f != 0 {
                let f = p - f;
                for j in pivots[i]..ncols {
                    if pivot_row[j] != 0 {
                        let x = row[j] + mul_mod(f, pivot_row[j], p);
                        row[j] = if x >= p { x - p } else { x };
                    }
                }
            }
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| pivots.binary_search(c).is_err()).collect();
    let entries = free
        .iter()
        .map(|&f| rows.iter().map(|r| if r[f] == 0 { 0 } else { p - r[f] }).collect())
        .collect();
    (pivots, free, entries)
}

/// Kernel basis modulo `p` of the rows, one vector per free column.
pub fn kernel_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let e = echelon_mod(rows, ncols, p, usize::MAX);
    let (pivots, free, entries) = kernel_mod(&e, ncols, p);
    free.iter()
        .zip(entries)
        .map(|(&f, ys)| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (&c, y) in pivots.iter().zip(ys) {
                v[c] = y;
            }
            v
        })
        .collect()
}

/// Rational `n/d` with `|n|, d ≤ sqrt(m/2)` congruent to `a` modulo `m`.
fn reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Exact rank of an integer matrix, with independent rows and a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRank {
    pub rank: usize,
    /// Indices of input rows forming a basis of the row space.
    pub independent: Vec<usize>,
    /// Basis of `{x : A x = 0}`, one vector per free column, when requested.
    pub kernel: Option<Vec<Vec<Q>>>,
}

fn verify(rows: &[Vec<BigInt>], kernel: &[Vec<Q>]) -> bool {
    let scaled = integer_rows(kernel);
    scaled.iter().all(|y| {
        rows.iter().all(|r| {
            let mut acc = BigInt::zero();
            for (a, b) in r.iter().zip(y) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc.is_zero()
        })
    })
}

fn exact_fallback(rows: &[Vec<BigInt>], ncols: usize, want_kernel: bool) -> ExactRank {
    let mut space = Subspace::zero(ncols);
    let mut independent = Vec::new();
    let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().cloned().map(Q::from_integer).collect()).collect();
    for (i, r) in qrows.iter().enumerate() {
        if space.insert(r.clone()) {
            independent.push(i);
        }
    }
    let kernel = want_kernel.then(|| nullspace(&qrows, ncols).rows().to_vec());
    ExactRank { rank: space.dim(), independent, kernel }
}

/// Rank of `rows` over the rationals. With `want_kernel`, or whenever the
/// rank is below `min(#rows, ncols)`, a kernel basis is certified exactly.
pub fn exact_rank(rows: &[Vec<BigInt>], ncols: usize, want_kernel: bool) -> ExactRank {
    let full = rows.len().min(ncols);
    let p0 = primes()[0];
    let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce_int(x, p0)).collect()).collect();
    let e = echelon_mod(&reduced, ncols, p0, usize::MAX);
    if e.rows.len() == full && !want_kernel {
        return ExactRank { rank: full, independent: e.kept, kernel: None };
    }
    // the kernel of the rows kept modulo the first prime contains the true
    // kernel; a lifted basis that annihilates every row certifies both
    let kept: Vec<Vec<BigInt>> = e.kept.iter().map(|&i| rows[i].clone()).collect();
    if let Some(kernel) = lift_kernel(&kept, rows, ncols) {
        return ExactRank { rank: ncols - kernel.len(), independent: e.kept, kernel: Some(kernel) };
    }
    let indices: Vec<usize> = (0..rows.len()).collect();
    match lift_kernel(rows, rows, ncols) {
        Some(kernel) => {
            let rank = ncols - kernel.len();
            let independent = independent_rows(rows, &indices, ncols, rank);
            ExactRank { rank, independent, kernel: Some(kernel) }
        }
        None => exact_fallback(rows, ncols, want_kernel),
    }
}

/// Rank of rows whose rank over `Q` is known to be at most `upper`; a prime
/// reaching the bound certifies it without lifting.
pub fn exact_rank_at_most(rows: &[Vec<BigInt>], ncols: usize, upper: usize) -> ExactRank {
    let p = primes()[0];
    let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce_int(x, p)).collect()).collect();
    let e = echelon_mod(&reduced, ncols, p, upper);
    if e.rows.len() == upper {
        return ExactRank { rank: upper, independent: e.kept, kernel: None };
    }
    exact_rank(rows, ncols, false)
}

/// First rows, in order, whose rank modulo some prime reaches `rank`.
fn independent_rows(rows: &[Vec<BigInt>], indices: &[usize], ncols: usize, rank: usize) -> Vec<usize> {
    for &p in primes() {
        let reduced: Vec<Vec<u64>> = indices.iter().map(|&i| rows[i].iter().map(|x| reduce_int(x, p)).collect()).collect();
        let e = echelon_mod(&reduced, ncols, p, rank);
        if e.rows.len() == rank {
            return e.kept.iter().map(|&k| indices[k]).collect();
        }
    }
    exact_fallback(rows, ncols, false).independent
}

/// Kernel of `sub` lifted from residues by CRT and rational reconstruction,
/// accepted once two consecutive lifts agree and it annihilates `check`.
fn lift_kernel(sub: &[Vec<BigInt>], check: &[Vec<BigInt>], ncols: usize) -> Option<Vec<Vec<Q>>> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut modulus = BigInt::one();
    // kernel residues modulo `modulus`, indexed [free column][pivot row]
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut previous: Option<Vec<Vec<Q>>> = None;
    let mut previous_sentinels: Option<Vec<Q>> = None;
    for &p in primes() {
        let reduced: Vec<Vec<u64>> = sub.iter().map(|r| r.iter().map(|x| reduce_int(x, p)).collect()).collect();
        let e = echelon_mod(&reduced, ncols, p, usize::MAX);
        let (pivots, free, entries) = kernel_mod(&e, ncols, p);
        let rank = e.rows.len();
        let better = match &best {
            None => true,
            Some((r, bp)) => rank > *r || (rank == *r && pivots < *bp),
        };
        let same = best.as_ref().map_or(false, |(r, bp)| rank == *r && pivots == *bp);
        if better {
            modulus = BigInt::one();
            acc = vec![vec![BigInt::zero(); pivots.len()]; free.len()];
            previous = None;
            previous_sentinels = None;
            best = Some((rank, pivots.clone()));
        } else if !same {
            continue;
        }
        let pb = BigInt::from(p);
        let m_inv = inv_mod(reduce_int(&modulus, p), p);
        for (a_row, e_row) in acc.iter_mut().zip(&entries) {
            for (a, &b) in a_row.iter_mut().zip(e_row) {
                let diff = (b as i128 - reduce_int(a, p) as i128).rem_euclid(p as i128) as u64;
                let k = mul_mod(diff, m_inv, p);
                *a += &modulus * BigInt::from(k);
            }
        }
        modulus *= &pb;
        // the last entry of each vector must lift stably before all of them
        let sentinels: Option<Vec<Q>> =
            acc.iter().filter_map(|a_row| a_row.last()).map(|a| reconstruct(a, &modulus)).collect();
        let stable = sentinels.is_some() && sentinels == previous_sentinels;
        previous_sentinels = sentinels;
        if !stable {
            continue;
        }
        let mut kernel = Vec::with_capacity(free.len());
        let mut ok = true;
        'lift: for (&f, a_row) in free.iter().zip(&acc) {
            let mut y = vec![Q::zero(); ncols];
            y[f] = Q::one();
            for (&c, a) in pivots.iter().zip(a_row) {
                match reconstruct(a, &modulus) {
                    Some(x) => y[c] = x,
                    None => {
                        ok = false;
                        break 'lift;
                    }
                }
            }
            kernel.push(y);
        }
        if !ok {
            previous = None;
            continue;
        }
        if previous.as_ref() == Some(&kernel) {
            return verify(check, &kernel).then_some(kernel);
        }
        previous = Some(kernel);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;

    fn int_rows(x: &[&[i64]]) -> Vec<Vec<BigInt>> {
        x.iter().map(|r| r.iter().map(|&a| BigInt::from(a)).collect()).collect()
    }

    #[test]
    fn primes_are_distinct_primes() {
        let ps = primes();
        assert_eq!(ps.len(), MAX_PRIMES);
        assert!(ps.iter().all(|&p| is_prime(p)));
        assert!(ps.windows(2).skip(1).all(|w| w[0] > w[1]));
        assert!(!is_prime(1 << 61) && is_prime(MERSENNE));
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(MERSENNE);
        for (n, d) in [(3i64, 7i64), (-5, 12), (0, 1), (1, 1)] {
            let x = Q::new(BigInt::from(n), BigInt::from(d));
            let a = BigInt::from(reduce_q(&x, MERSENNE).unwrap());
            assert_eq!(reconstruct(&a, &m), Some(x));
        }
    }

    #[test]
    fn rank_and_kernel_of_dependent_rows() {
        let rows = int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let r = exact_rank(&rows, 3, true);
        assert_eq!(r.rank, 2);
        assert_eq!(r.independent, vec![0, 2]);
        let k = r.kernel.unwrap();
        assert_eq!(k, vec![vec![q(-1), q(-1), q(1)]]);
    }

    #[test]
    fn large_entries_need_several_primes() {
        let big = BigInt::from(10).pow(60);
        let rows = vec![
            vec![big.clone(), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(3), BigInt::from(0), big.clone() + 1],
        ];
        let r = exact_rank(&rows, 3, true);
        assert_eq!(r.rank, 2);
        let k = r.kernel.unwrap();
        assert_eq!(k.len(), 1);
        let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().cloned().map(Q::from_integer).collect()).collect();
        assert_eq!(Subspace::from_vectors(3, k), nullspace(&qrows, 3));
    }

    #[test]
    fn full_rank_short_circuits() {
        let rows = int_rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        let r = exact_rank(&rows, 2, false);
        assert_eq!((r.rank, r.independent), (2, vec![0, 1]));
    }
}
