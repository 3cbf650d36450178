//! Integer backends for the exact polyhedral kernels.
//!
//! Hot loops run on `i128` with checked arithmetic and are retried on
//! `BigInt` when an operation would overflow.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Int:
    Clone + Debug + Ord + Eq + Send + Sync + Zero + One + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul
{
    fn from_i64(x: i64) -> Self;
    fn to_i64(&self) -> Option<i64>;
    fn to_big(&self) -> BigInt;
}

impl Int for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Marker for an overflow inside an `i128` kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = std::result::Result<T, Overflow>;

#[inline]
pub(crate) fn mul<T: Int>(a: &T, b: &T) -> Checked<T> {
    a.checked_mul(b).ok_or(Overflow)
}

#[inline]
pub(crate) fn sub<T: Int>(a: &T, b: &T) -> Checked<T> {
    a.checked_sub(b).ok_or(Overflow)
}

#[inline]
pub(crate) fn add<T: Int>(a: &T, b: &T) -> Checked<T> {
    a.checked_add(b).ok_or(Overflow)
}

pub(crate) fn dot<T: Int>(a: &[T], b: &[T]) -> Checked<T> {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s = add(&s, &mul(x, y)?)?;
        }
    }
    Ok(s)
}

/// Divides by the gcd of the entries; the sign is kept.
pub(crate) fn make_primitive<T: Int>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_floor(&g);
    }
}

pub(crate) fn lift<T: Int>(rows: &[Vec<i64>]) -> Vec<Vec<T>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
        .collect()
}

pub(crate) fn lower<T: Int>(rows: &[Vec<T>], context: &'static str) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow(context)))
                .collect()
        })
        .collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Primitive integer vector in the same direction (zero stays zero).
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}
