use num_traits::{One, Zero};

use super::{Poly, Q};

/// Laurent polynomial in `u = t - center`, known exactly modulo `u^N`.
///
/// `coeffs[k]` is the coefficient of `u^(lo + k)` and `N = lo + coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub center: Q,
    pub lo: i64,
    pub coeffs: Vec<Q>,
}

impl TruncSeries {
    pub fn new(center: Q, lo: i64, coeffs: Vec<Q>) -> Self {
        TruncSeries { center, lo, coeffs }
    }

    /// Exponent bound: everything from `u^N` on is unknown.
    pub fn order(&self) -> i64 {
        self.lo + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> Q {
        if e < self.lo || e >= self.order() {
            return Q::zero();
        }
        self.coeffs[(e - self.lo) as usize].clone()
    }

    /// First exponent carrying a nonzero coefficient, or `order()` if none.
    pub fn valuation(&self) -> i64 {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => self.lo + k as i64,
            None => self.order(),
        }
    }

    /// Product, exact modulo the largest power both factors determine.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let v1 = self.valuation();
        let v2 = other.valuation();
        let n = (self.order() + v2).min(other.order() + v1);
        let lo = v1 + v2;
        let len = (n - lo).max(0) as usize;
        let mut out = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.lo + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = ea + other.lo + j as i64;
                if e >= n {
                    break;
                }
                if !b.is_zero() {
                    out[(e - lo) as usize] += a * b;
                }
            }
        }
        TruncSeries::new(self.center.clone(), lo, out)
    }

    /// `1 / self`, known through as many terms past its valuation as `self`.
    pub fn inverse(&self) -> TruncSeries {
        let v = self.valuation();
        let c = &self.coeffs[(v - self.lo) as usize..];
        assert!(!c.is_empty(), "inverse of a zero germ");
        let inv0 = Q::one() / &c[0];
        let mut out: Vec<Q> = Vec::with_capacity(c.len());
        for k in 0..c.len() {
            let mut acc = if k == 0 { Q::one() } else { Q::zero() };
            for j in 1..=k {
                if !c[j].is_zero() {
                    acc -= &c[j] * &out[k - j];
                }
            }
            out.push(acc * &inv0);
        }
        TruncSeries::new(self.center.clone(), -v, out)
    }

    pub fn div(&self, other: &TruncSeries) -> TruncSeries {
        self.mul(&other.inverse())
    }

    pub fn scale(&self, x: &Q) -> TruncSeries {
        TruncSeries::new(self.center.clone(), self.lo, self.coeffs.iter().map(|c| c * x).collect())
    }

    /// The same Laurent polynomial regarded as exact through `u^(n-1)`.
    pub fn pad_to(&self, n: i64) -> TruncSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((n - self.lo).max(coeffs.len() as i64) as usize, Q::zero());
        TruncSeries::new(self.center.clone(), self.lo, coeffs)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let lo = self.lo.min(other.lo);
        let n = self.order().min(other.order());
        let coeffs = (lo..n).map(|e| self.coeff(e) + other.coeff(e)).collect();
        TruncSeries::new(self.center.clone(), lo, coeffs)
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let lead = den.leading().unwrap().clone();
        RatFunc {
            num: num.scale(&(Q::one() / &lead)),
            den: den.monic(),
        }
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Order of vanishing at the point at infinity.
    pub fn ord_infinity(&self) -> i64 {
        self.den.deg_or(0) - self.num.deg_or(0)
    }

    /// max(deg num, deg den), the degree of the induced map to the line.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

/// Laurent expansion of `f` at `t = a`, exact through `u^(n-1)`.
pub fn expand_at(f: &RatFunc, a: &Q, n: i64) -> TruncSeries {
    if f.is_zero() {
        return TruncSeries::new(a.clone(), n, Vec::new());
    }
    let num = f.num.shift(a);
    let den = f.den.shift(a);
    let kn = num.coeffs().iter().take_while(|c| c.is_zero()).count();
    let kd = den.coeffs().iter().take_while(|c| c.is_zero()).count();
    let lo = kn as i64 - kd as i64;
    let len = (n - lo).max(0) as usize;
    let nc = &num.coeffs()[kn..];
    let dc = &den.coeffs()[kd..];
    let inv0 = Q::one() / &dc[0];
    let mut out: Vec<Q> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = nc.get(k).cloned().unwrap_or_else(Q::zero);
        for j in 1..=k.min(dc.len() - 1) {
            if !dc[j].is_zero() {
                acc -= &dc[j] * &out[k - j];
            }
        }
        out.push(acc * &inv0);
    }
    TruncSeries::new(a.clone(), lo, out)
}

/// Coefficient of `(t - a)^-1` in the expansion of `r` at `a`.
pub fn residue_at(r: &RatFunc, a: &Q) -> Q {
    expand_at(r, a, 0).coeff(-1)
}

#[cfg(test)]
mod tests {
    use super::super::{q, qf};
    use super::*;

    #[test]
    fn series_division_matches_expansion_of_the_quotient() {
        // (t^2 + 3t + 1) / (t^3 - 2t) at t = 0 and t = 1
        let num = Poly::from_ints(&[1, 3, 1]);
        let den = Poly::from_ints(&[0, -2, 0, 1]);
        for a in [q(0), q(1)] {
            let n = expand_at(&RatFunc::poly(num.clone()), &a, 9);
            let d = expand_at(&RatFunc::poly(den.clone()), &a, 9);
            let quotient = n.div(&d);
            let direct = expand_at(&RatFunc::new(num.clone(), den.clone()), &a, quotient.order());
            assert_eq!(quotient.coeffs, direct.coeffs);
            assert_eq!(quotient.lo, direct.lo);
        }
        let x = expand_at(&RatFunc::poly(Poly::from_ints(&[0, 0, 2, 5])), &q(0), 8);
        let one = x.mul(&x.inverse());
        assert_eq!((one.valuation(), one.coeff(0), one.coeff(1)), (0, q(1), q(0)));
        assert_eq!(one.order(), 6);
    }

    #[test]
    fn geometric_series() {
        let f = RatFunc::new(Poly::one(), Poly::from_ints(&[1, -1]));
        let s = expand_at(&f, &q(0), 3);
        assert_eq!(s.lo, 0);
        assert_eq!(s.coeffs, vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn laurent_tail() {
        let f = RatFunc::new(Poly::from_ints(&[1, 0, 5]), Poly::from_ints(&[0, 0, 0, 1]));
        let s = expand_at(&f, &q(0), 1);
        assert_eq!(s.lo, -3);
        assert_eq!(s.coeffs, vec![q(1), q(0), q(5), q(0)]);
        assert_eq!(residue_at(&f, &q(0)), q(5));
    }

    #[test]
    fn monomial_valuation() {
        let s = expand_at(&RatFunc::poly(Poly::from_ints(&[0, 0, 1])), &q(0), 5);
        assert_eq!(s.lo, 2);
        assert_eq!(s.valuation(), 2);
        assert_eq!(s.coeffs, vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn simple_pole_residue() {
        let f = RatFunc::new(Poly::one(), Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(residue_at(&f, &q(1)), qf(1, 2));
        assert_eq!(residue_at(&f, &q(-1)), qf(-1, 2));
    }
}
