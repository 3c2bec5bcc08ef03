use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{binomial, fmt_q, q, Q};

/// Dense univariate polynomial, coefficients in increasing degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * t^e`
    pub fn monomial(c: Q, e: usize) -> Self {
        let mut v = vec![Q::zero(); e + 1];
        v[e] = c;
        Poly::from_coeffs(v)
    }

    /// The linear polynomial `t - a`.
    pub fn linear_root(a: &Q) -> Self {
        Poly::from_coeffs(vec![-a.clone(), Q::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&x| q(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_or(&self, zero_degree: i64) -> i64 {
        self.degree().map_or(zero_degree, |d| d as i64)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&(Q::one() / l)),
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = Q::one() / d.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            quo[i] = c;
        }
        r.truncate(dd);
        (Poly::from_coeffs(quo), Poly::from_coeffs(r))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (quo, rem) = self.divrem(d);
        rem.is_zero().then_some(quo)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `p(t + a)`, the coefficients of `p` in powers of `u = t - a`.
    pub fn shift(&self, a: &Q) -> Poly {
        if a.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = vec![Q::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut apow = Q::one();
            for k in (0..=j).rev() {
                out[k] += c * &binomial(j as u64, k as u64) * &apow;
                apow *= a;
            }
        }
        Poly::from_coeffs(out)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_order(&self, a: &Q) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let s = self.shift(a);
        s.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Removes every factor `t - a` for `a` in `roots`.
    pub fn strip_roots(&self, roots: &[Q]) -> Poly {
        let mut p = self.clone();
        for a in roots {
            let lin = Poly::linear_root(a);
            while let Some(quo) = p.div_exact(&lin) {
                if p.is_zero() {
                    break;
                }
                p = quo;
            }
        }
        p
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl Poly {
    /// Human-readable form in the variable `var`, lowest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = super::is_neg(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = fmt_q(&abs);
            match e {
                0 => out.push_str(&coef),
                _ => {
                    if !super::is_one(&abs) {
                        out.push_str(&coef);
                        out.push('*');
                    }
                    out.push_str(var);
                    if e > 1 {
                        out.push('^');
                        out.push_str(&e.to_string());
                    }
                }
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (quo, rem) = a.divrem(&b);
        assert_eq!(quo, Poly::from_ints(&[1, 1]));
        assert!(rem.is_zero());
        let c = Poly::from_ints(&[1, 1]);
        assert_eq!(Poly::gcd(&a, &(&c * &c)), c);
    }

    #[test]
    fn shift_recenters() {
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shift(&q(1)), Poly::from_ints(&[1, 2, 1]));
        assert_eq!(p.root_order(&q(0)), 2);
        assert_eq!(p.root_order(&q(1)), 0);
    }

    #[test]
    fn strip_roots_removes_all_multiplicity() {
        let p = &Poly::from_ints(&[0, 0, 1]) * &Poly::from_ints(&[-2, 1]);
        assert_eq!(p.strip_roots(&[q(0)]), Poly::from_ints(&[-2, 1]));
    }

    #[test]
    fn render_is_readable() {
        let p = Poly::from_coeffs(vec![q(1), Q::zero(), super::super::qf(-3, 4)]);
        assert_eq!(p.render("u"), "1 - 3/4*u^2");
    }
}
