// SPDX-License-Identifier: Apache-2.0

//! Numeric abstraction for the graph and scoring code.
//!
//! Everything that does arithmetic on edge weights, walk probabilities,
//! modularity or betweenness is written against [`Scalar`], so the same
//! routine runs in `f64` for production, `f32` when memory matters and in
//! exact rationals ([`crate::Exact`]) when a test needs bit-exact answers.

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt::{Debug, Display};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Tolerance under which two values are treated as a tie. Zero for exact types.
    fn tie_tolerance() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f64 {
    fn tie_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tie_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Ratio<i64> {
    fn tie_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

impl Scalar for Ratio<i128> {
    fn tie_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`
pub fn approx_eq<T: Scalar>(a: &T, b: &T) -> bool {
    let diff = (a.clone() - b.clone()).abs();
    let mut scale = T::one();
    for v in [a.abs(), b.abs()] {
        if v > scale {
            scale = v;
        }
    }
    diff <= T::tie_tolerance() * scale
}

/// Total order that folds near-equal values into `Equal`.
pub fn cmp_tol<T: Scalar>(a: &T, b: &T) -> Ordering {
    if approx_eq(a, b) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
