//! Scalar abstractions shared by the integer algorithms.
//!
//! [`Natural`] covers the unsigned types (`u32`, `u64`, `u128`, `BigUint`) and
//! [`Whole`] the signed ones (`i64`, `i128`, `BigInt`). Machine-word
//! instantiations are fast but may overflow on extreme inputs; the big-integer
//! instantiations never do.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedMul, FromPrimitive, Signed, ToPrimitive, Unsigned};

pub trait Natural:
    Integer + Unsigned + CheckedMul + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive
{
}

impl<T> Natural for T where
    T: Integer + Unsigned + CheckedMul + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive
{
}

pub trait Whole: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {}

impl<T> Whole for T where T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {}

pub(crate) fn from_u64<T: FromPrimitive>(v: u64) -> T {
    T::from_u64(v).expect("scalar type cannot represent a u64 value")
}
