//! Exact arithmetic over the rationals: polynomials, rational functions,
//! truncated Laurent expansions, echelon-form subspaces and fractional
//! modules over the completed local rings of a cluster.

pub mod linalg;
pub mod modular;
pub mod module;
pub mod poly;
pub mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use linalg::{nullspace, Subspace};
pub use module::FracModule;
pub use poly::Poly;
pub use series::{expand_at, residue_at, RatFunc, TruncSeries};

/// Elements of the base field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub(crate) fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub(crate) fn is_neg(x: &Q) -> bool {
    x.is_negative()
}

/// Binomial coefficient as a field element.
pub fn binomial(n: u64, k: u64) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}
