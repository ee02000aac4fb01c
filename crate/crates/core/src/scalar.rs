//! Coefficient fields for the polynomial layer.
//!
//! Everything in this crate is generic over [`Scalar`]; the concrete
//! instantiation used throughout the examples and the CLI is
//! [`num_rational::BigRational`] (see the `Rat` alias at the crate root).

use num_traits::{FromPrimitive, Num};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Field of coefficients: exact division, negation, and construction from
/// small integers (needed for factorials in the residue calculus).
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + FromPrimitive
{
    /// 1/n! as a field element. Panics on overflow only for absurd orders.
    fn inv_factorial(n: u64) -> Self {
        let mut f = Self::one();
        for k in 2..=n {
            f = f * Self::from_u64(k).expect("factorial argument out of range");
        }
        Self::one() / f
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer out of range for scalar")
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + PartialEq + Debug + Display + FromPrimitive
{
}
