//! Exact arithmetic building blocks: a coefficient-field trait, sparse
//! monomials, sparse multivariate polynomials, multivariate gcd and dense
//! linear algebra over an arbitrary exact field.

mod gcd;
pub mod linalg;
mod mono;
mod mpoly;

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use mono::{Mono, TermOrder};
pub use mpoly::MPoly;

/// Exact field operations needed by the polynomial kernel.
///
/// All implementations keep their values in a canonical form so that
/// `PartialEq` is mathematical equality.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
    fn from_i64(n: i64) -> Self;
    /// The coefficient as a rational number, if it is one.
    fn as_rational(&self) -> Option<BigRational>;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero rational");
        self.recip()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Renders a rational the way the expression parser reads it back.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
