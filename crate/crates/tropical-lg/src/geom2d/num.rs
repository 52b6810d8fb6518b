//! Exact rational scalars, lattice vectors, and points of the plane.
//!
//! Every quantity in this module is exact: scalars are arbitrary-precision
//! rationals in lowest terms with positive denominator, lattice vectors are
//! pairs of arbitrary-precision integers. No floating point appears anywhere
//! on a computation path.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in canonical lowest terms.
///
/// ```
/// use tropical_lg::geom2d::Scalar;
/// let a: Scalar = "3/6".parse().unwrap();
/// assert_eq!(a.to_string(), "1/2");
/// assert_eq!(&a + &a, Scalar::from(1));
/// ```
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Scalar(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Lossy conversion used only for rendering.
    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer();
        let d = self.0.denom();
        // Good enough for display scales; exact paths never call this.
        let nf = n.to_string().parse::<f64>().unwrap_or(0.0);
        let df = d.to_string().parse::<f64>().unwrap_or(1.0);
        nf / df
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |_| Error::InvalidInput(format!("bad rational literal {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let num = BigInt::from_str(n.trim()).map_err(bad)?;
                let den = BigInt::from_str(d.trim()).map_err(bad)?;
                Scalar::new(num, den)
            }
            None => {
                let num = BigInt::from_str(s.trim()).map_err(bad)?;
                Ok(Scalar::from_bigint(num))
            }
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $fn:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $fn(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$fn(&rhs.0))
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $fn(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$fn(rhs.0))
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// An integral vector, read as an element of either `M` or its dual `N`
/// depending on context; the pairing between the two is the dot product in
/// the fixed dual bases.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVec {
    pub x: BigInt,
    pub y: BigInt,
}

impl IntVec {
    pub fn new(x: i64, y: i64) -> Self {
        IntVec {
            x: BigInt::from(x),
            y: BigInt::from(y),
        }
    }

    pub fn zero() -> Self {
        IntVec::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Pairing with a rational point/vector.
    pub fn eval(&self, p: &Point) -> Scalar {
        &(&Scalar::from_bigint(self.x.clone()) * &p.x)
            + &(&Scalar::from_bigint(self.y.clone()) * &p.y)
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn rot90_ccw(&self) -> IntVec {
        IntVec {
            x: -&self.y,
            y: self.x.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntVec {
        IntVec {
            x: &self.x * k,
            y: &self.y * k,
        }
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        IntVec {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        IntVec {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let x = i64::try_from(&self.x).map_err(serde::ser::Error::custom)?;
        let y = i64::try_from(&self.y).map_err(serde::ser::Error::custom)?;
        [x, y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[i64; 2]>::deserialize(d)?;
        Ok(IntVec::new(x, y))
    }
}

/// A point of the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: Scalar::from(x),
            y: Scalar::from(y),
        }
    }

    /// `self + t * v` for an integral direction `v`.
    pub fn translate(&self, v: &IntVec, t: &Scalar) -> Point {
        Point {
            x: &self.x + &(t * &Scalar::from_bigint(v.x.clone())),
            y: &self.y + &(t * &Scalar::from_bigint(v.y.clone())),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(Point {
            x: x.parse().map_err(de::Error::custom)?,
            y: y.parse().map_err(de::Error::custom)?,
        })
    }
}

/// The determinant `v1*w2 - v2*w1`, computed exactly.
pub fn det2(v: &IntVec, w: &IntVec) -> BigInt {
    &v.x * &w.y - &v.y * &w.x
}

/// Determinant of two rational vectors, used for path orientation signs.
pub fn det2_mixed(v: &IntVec, dx: &Scalar, dy: &Scalar) -> Scalar {
    &(&Scalar::from_bigint(v.x.clone()) * dy) - &(&Scalar::from_bigint(v.y.clone()) * dx)
}

/// Splits a nonzero vector `v` as `k * v_hat` with `v_hat` primitive and
/// `k > 0`.
pub fn primitive(v: &IntVec) -> Result<(IntVec, BigInt)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.x.gcd(&v.y);
    Ok((
        IntVec {
            x: &v.x / &g,
            y: &v.y / &g,
        },
        g,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det2_examples() {
        assert_eq!(det2(&IntVec::new(1, 0), &IntVec::new(0, 1)), BigInt::from(1));
        assert_eq!(
            det2(&IntVec::new(1, 0), &IntVec::new(-1, -1)),
            BigInt::from(-1)
        );
        assert_eq!(det2(&IntVec::new(2, 4), &IntVec::new(1, 2)), BigInt::from(0));
    }

    #[test]
    fn primitive_examples() {
        let (p, k) = primitive(&IntVec::new(2, 4)).unwrap();
        assert_eq!((p, k), (IntVec::new(1, 2), BigInt::from(2)));
        let (p, k) = primitive(&IntVec::new(1, 1)).unwrap();
        assert_eq!((p, k), (IntVec::new(1, 1), BigInt::from(1)));
        let (p, k) = primitive(&IntVec::new(0, -3)).unwrap();
        assert_eq!((p, k), (IntVec::new(0, -1), BigInt::from(3)));
        assert!(matches!(
            primitive(&IntVec::zero()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn scalar_parse_display_round_trip() {
        for s in ["0", "-3", "1/2", "-7/3"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: Scalar = "4/6".parse().unwrap();
        assert_eq!(v.to_string(), "2/3");
        let v: Scalar = "5/1".parse().unwrap();
        assert_eq!(v.to_string(), "5");
    }
}
