use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{self, Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Precision of radii. Radii only need a few correct bits; they are always
/// rounded toward +inf so they stay valid upper bounds.
pub const RADIUS_PRECISION: u32 = 64;

fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RADIUS_PRECISION, val, Round::Up).0
}

fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RADIUS_PRECISION, val, Round::Down).0
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

fn abs_down(x: &Float) -> Float {
    down(&*x.as_abs())
}

/// Bound on the error of a round-to-nearest result: half an ulp of `x`, or
/// zero when the operation was exact.
fn rounding_error(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return Float::new(RADIUS_PRECISION);
    }
    let mut h = Float::with_val(RADIUS_PRECISION, 1);
    match x.get_exp() {
        // MPFR normalizes x = m * 2^e with 1/2 <= |m| < 1, so ulp(x) = 2^(e - prec).
        Some(e) => h <<= e - x.prec() as i32 - 1,
        // Only reachable on underflow to zero; the smallest normal bounds the error.
        None => h <<= float::exp_min() - 1,
    }
    h
}

/// A real number known only to lie in `[mid - rad, mid + rad]`.
///
/// The midpoint carries the working precision; the radius is a short float
/// rounded upward. Every operation returns a ball containing the exact image
/// of every point of its inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedReal {
    mid: Float,
    rad: Float,
}

impl CertifiedReal {
    fn from_rounded((mid, ord): (Float, Ordering), rad: Float) -> Self {
        let err = rounding_error(&mid, ord);
        let rad = if err.is_zero() { rad } else { up(&rad + &err) };
        Self { mid, rad }
    }

    /// Builds a ball from an explicit midpoint and radius.
    pub fn new(mid: Float, rad: Float) -> Result<Self> {
        if !mid.is_finite() {
            return Err(Error::Domain(format!("non-finite midpoint {mid}")));
        }
        if !rad.is_finite() || rad.is_sign_negative() && !rad.is_zero() {
            return Err(Error::Domain(format!("invalid radius {rad}")));
        }
        Ok(Self { mid, rad: up(&rad) })
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            mid: Float::new(prec),
            rad: Float::new(RADIUS_PRECISION),
        }
    }

    pub fn from_i64(value: i64, prec: u32) -> Self {
        Self::from_rounded(
            Float::with_val_round(prec, value, Round::Nearest),
            Float::new(RADIUS_PRECISION),
        )
    }

    pub fn from_integer(value: &Integer, prec: u32) -> Self {
        Self::from_rounded(
            Float::with_val_round(prec, value, Round::Nearest),
            Float::new(RADIUS_PRECISION),
        )
    }

    pub fn from_rational(value: &Rational, prec: u32) -> Self {
        Self::from_rounded(
            Float::with_val_round(prec, value, Round::Nearest),
            Float::new(RADIUS_PRECISION),
        )
    }

    /// The ratio `num / den` as a ball.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from((num, den)), prec)
    }

    /// Smallest ball (at precision `prec`) containing `[lo, hi]`.
    pub fn from_bounds(lo: &Float, hi: &Float, prec: u32) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Domain(format!("invalid bounds [{lo}, {hi}]")));
        }
        let mid = Float::with_val(prec, lo + hi) / 2u32;
        let rad = up(hi - &mid).max(&up(&mid - lo));
        Ok(Self { mid, rad })
    }

    /// pi with a radius of half an ulp.
    pub fn pi(prec: u32) -> Self {
        Self::from_rounded(
            Float::with_val_round(prec, Constant::Pi, Round::Nearest),
            Float::new(RADIUS_PRECISION),
        )
    }

    pub fn precision(&self) -> u32 {
        self.mid.prec()
    }

    pub fn midpoint(&self) -> &Float {
        &self.mid
    }

    pub fn radius(&self) -> &Float {
        &self.rad
    }

    /// Lower endpoint, rounded down at the working precision.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.precision(), &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up at the working precision.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.precision(), &self.mid + &self.rad, Round::Up).0
    }

    /// Lower endpoint as a short float.
    pub(crate) fn lower_short(&self) -> Float {
        down(&self.mid - &self.rad)
    }

    /// Upper endpoint as a short float.
    pub(crate) fn upper_short(&self) -> Float {
        up(&self.mid + &self.rad)
    }

    /// Upper bound on |x| over the ball.
    pub(crate) fn mag_upper(&self) -> Float {
        up(&abs_up(&self.mid) + &self.rad)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    /// Every point of the ball is > 0.
    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    /// Every point of the ball is < 0.
    pub fn is_negative(&self) -> bool {
        *self.mid.as_neg() > self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Exact test of `q` against the ball.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let mid = self.mid.to_rational().expect("finite midpoint");
        let rad = self.rad.to_rational().expect("finite radius");
        Rational::from(q - &mid).abs() <= rad
    }

    pub fn contains_integer(&self, q: &Integer) -> bool {
        self.contains_rational(&Rational::from(q))
    }

    /// Whether two balls share at least one point.
    pub fn overlaps(&self, other: &Self) -> bool {
        let a = self.mid.to_rational().expect("finite midpoint");
        let b = other.mid.to_rational().expect("finite midpoint");
        let ra = self.rad.to_rational().expect("finite radius");
        let rb = other.rad.to_rational().expect("finite radius");
        (a - b).abs() <= ra + rb
    }

    /// Smallest ball containing both inputs.
    pub fn hull(&self, other: &Self) -> Self {
        let prec = self.precision().max(other.precision());
        let lo = self.lower().min(&other.lower());
        let hi = self.upper().max(&other.upper());
        Self::from_bounds(&lo, &hi, prec).expect("ordered finite bounds")
    }

    /// The same ball with its midpoint rounded to `prec` bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_rounded(
            Float::with_val_round(prec, &self.mid, Round::Nearest),
            self.rad.clone(),
        )
    }

    /// Widens the radius by `extra` (which must be nonnegative).
    pub(crate) fn widen(mut self, extra: &Float) -> Self {
        self.rad = up(&self.rad + extra);
        self
    }

    /// Multiplies by 2^k exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        mid <<= k;
        rad <<= k;
        Self { mid, rad }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else if self.is_positive() {
            self.clone()
        } else {
            // [0, max|x|]
            let hi = self.mag_upper();
            let zero = Float::new(RADIUS_PRECISION);
            Self::from_bounds(&zero, &hi, self.precision()).expect("ordered finite bounds")
        }
    }

    fn binary_prec(&self, other: &Self) -> u32 {
        self.precision().max(other.precision())
    }

    /// Quotient; fails when the divisor's ball contains zero.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let prec = self.binary_prec(other);
        let bm_lo = abs_down(&other.mid);
        let gap = down(&*other.mid.as_abs() - &other.rad);
        if !gap.is_sign_positive() || gap.is_zero() {
            return Err(Error::Domain(format!(
                "division by an interval containing zero ({other})"
            )));
        }
        let num = up(&up(&abs_up(&self.mid) * &other.rad) + &up(&abs_up(&other.mid) * &self.rad));
        let rad = if num.is_zero() {
            num
        } else {
            up(&num / &down(&bm_lo * &gap))
        };
        Ok(Self::from_rounded(
            Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest),
            rad,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_i64(1, self.precision()).try_div(self)
    }

    pub fn exp(&self) -> Self {
        let prec = self.precision();
        let rad = if self.rad.is_zero() {
            Float::new(RADIUS_PRECISION)
        } else {
            let scale = up(self.mid.exp_ref());
            let growth = up(self.rad.exp_m1_ref());
            up(&scale * &growth)
        };
        Self::from_rounded(
            Float::with_val_round(prec, self.mid.exp_ref(), Round::Nearest),
            rad,
        )
    }

    /// Natural logarithm; the whole ball must be positive.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.lower_short();
        if !lo.is_sign_positive() || lo.is_zero() {
            return Err(Error::Domain(format!("logarithm of {self}")));
        }
        let rad = up(&self.rad / &lo);
        Ok(Self::from_rounded(
            Float::with_val_round(self.precision(), self.mid.ln_ref(), Round::Nearest),
            rad,
        ))
    }

    /// Square root; the whole ball must be positive.
    pub fn sqrt(&self) -> Result<Self> {
        let lo = self.lower_short();
        if !lo.is_sign_positive() || lo.is_zero() {
            return Err(Error::Domain(format!("square root of {self}")));
        }
        let rad = if self.rad.is_zero() {
            Float::new(RADIUS_PRECISION)
        } else {
            // |sqrt(x) - sqrt(m)| = |x - m| / (sqrt(x) + sqrt(m)) <= r / sqrt(m)
            up(&self.rad / &down(self.mid.sqrt_ref()))
        };
        Ok(Self::from_rounded(
            Float::with_val_round(self.precision(), self.mid.sqrt_ref(), Round::Nearest),
            rad,
        ))
    }

    /// Integer power by repeated squaring. Negative exponents need a
    /// zero-free ball.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::from_i64(1, self.precision());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if k < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// `self^q` for rational `q`. Non-integer exponents require a positive ball.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        if *q.denom() == 1 {
            if let Some(k) = q.numer().to_i64() {
                return self.powi(k);
            }
        }
        let exponent = Self::from_rational(q, self.precision());
        Ok((&exponent * &self.ln()?).exp())
    }

    pub fn sinh(&self) -> Self {
        (&self.exp() - &(-self).exp()).mul_pow2(-1)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Larger of two balls, pointwise.
    pub fn max(&self, other: &Self) -> Self {
        let prec = self.binary_prec(other);
        let lo = self.lower().max(&other.lower());
        let hi = self.upper().max(&other.upper());
        Self::from_bounds(&lo, &hi, prec).expect("ordered finite bounds")
    }
}

impl Add for &CertifiedReal {
    type Output = CertifiedReal;

    fn add(self, other: &CertifiedReal) -> CertifiedReal {
        CertifiedReal::from_rounded(
            Float::with_val_round(
                self.binary_prec(other),
                &self.mid + &other.mid,
                Round::Nearest,
            ),
            up(&self.rad + &other.rad),
        )
    }
}

impl Sub for &CertifiedReal {
    type Output = CertifiedReal;

    fn sub(self, other: &CertifiedReal) -> CertifiedReal {
        CertifiedReal::from_rounded(
            Float::with_val_round(
                self.binary_prec(other),
                &self.mid - &other.mid,
                Round::Nearest,
            ),
            up(&self.rad + &other.rad),
        )
    }
}

impl Mul for &CertifiedReal {
    type Output = CertifiedReal;

    fn mul(self, other: &CertifiedReal) -> CertifiedReal {
        let cross = up(&up(&abs_up(&self.mid) * &other.rad) + &up(&abs_up(&other.mid) * &self.rad));
        let rad = up(&cross + &up(&self.rad * &other.rad));
        CertifiedReal::from_rounded(
            Float::with_val_round(
                self.binary_prec(other),
                &self.mid * &other.mid,
                Round::Nearest,
            ),
            rad,
        )
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;

    fn neg(self) -> CertifiedReal {
        CertifiedReal {
            mid: Float::with_val(self.precision(), -&self.mid),
            rad: self.rad.clone(),
        }
    }
}

impl Neg for CertifiedReal {
    type Output = CertifiedReal;

    fn neg(self) -> CertifiedReal {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, other: CertifiedReal) -> CertifiedReal {
                (&self).$method(&other)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, other: &CertifiedReal) -> CertifiedReal {
                (&self).$method(other)
            }
        }
        impl $tr<CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, other: CertifiedReal) -> CertifiedReal {
                self.$method(&other)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        write!(
            f,
            "{} +/- {}",
            self.mid.to_string_radix(10, Some(digits.clamp(2, 40))),
            self.rad.to_string_radix(10, Some(3))
        )
    }
}

impl Serialize for CertifiedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let mut s = serializer.serialize_struct("CertifiedReal", 3)?;
        s.serialize_field("midpoint", &self.mid.to_string_radix(10, Some(digits)))?;
        s.serialize_field("radius", &self.rad.to_string_radix(10, Some(6)))?;
        s.serialize_field("precision", &self.precision())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(mid: f64, rad: f64) -> CertifiedReal {
        CertifiedReal::new(Float::with_val(128, mid), Float::with_val(64, rad)).unwrap()
    }

    #[test]
    fn exact_sum() {
        let one = CertifiedReal::from_i64(1, 64);
        let two = &one + &one;
        assert_eq!(two.to_f64(), 2.0);
        assert!(two.radius().is_zero());
    }

    #[test]
    fn product_radius() {
        let p = &ball(2.0, 0.1) * &ball(3.0, 0.1);
        assert_eq!(p.to_f64(), 6.0);
        assert!(p.radius_f64() >= 0.51);
        assert!(p.radius_f64() < 0.52);
    }

    #[test]
    fn division_by_zero_ball() {
        let err = ball(1.0, 0.0).try_div(&ball(0.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn log_and_exp_at_identity() {
        let l = CertifiedReal::from_i64(1, 128).ln().unwrap();
        assert!(l.contains_rational(&Rational::new()));
        let e = CertifiedReal::zero(128).exp();
        assert!(e.contains_rational(&Rational::from(1)));
    }

    #[test]
    fn sqrt_of_23() {
        let s = CertifiedReal::from_i64(23, 128).sqrt().unwrap();
        let sq = s.square();
        assert!(sq.contains_rational(&Rational::from(23)));
        assert!(s.radius_f64() < 1e-35);
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(ball(0.1, 0.2).ln().is_err());
        assert!(ball(-1.0, 0.0).sqrt().is_err());
        assert!(CertifiedReal::zero(64).sqrt().is_err());
    }

    #[test]
    fn pi_radius_is_half_ulp() {
        let pi = CertifiedReal::pi(256);
        let ulp = Float::with_val(64, 1) << (2 - 256);
        assert!(*pi.radius() <= ulp);
        let reference = Float::with_val(512, Constant::Pi);
        assert!(pi.lower() < reference && reference < pi.upper());
    }

    #[test]
    fn powers() {
        let x = CertifiedReal::from_ratio(3, 2, 128);
        let cube = x.powi(3).unwrap();
        assert!(cube.contains_rational(&Rational::from((27, 8))));
        let inv = x.powi(-2).unwrap();
        assert!(inv.contains_rational(&Rational::from((4, 9))));
        let root = CertifiedReal::from_i64(4, 128)
            .pow_rational(&Rational::from((3, 2)))
            .unwrap();
        assert!((root.to_f64() - 8.0).abs() < 1e-30);
        assert!(root.overlaps(&CertifiedReal::from_i64(8, 128)));
    }

    #[test]
    fn abs_and_hull() {
        let straddle = ball(0.5, 1.0);
        let a = straddle.abs();
        assert!(a.lower() <= 0.0);
        assert!(a.upper() >= 1.5);
        let h = ball(1.0, 0.1).hull(&ball(3.0, 0.1));
        assert!(h.lower() <= 0.9);
        assert!(h.upper() >= 3.09);
    }

    #[test]
    fn sinh_matches_definition() {
        let x = CertifiedReal::from_i64(2, 128);
        let s = x.sinh();
        assert!((s.to_f64() - 2f64.sinh()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(CertifiedReal::new(Float::with_val(64, 1), Float::with_val(64, -1)).is_err());
        assert!(CertifiedReal::new(
            Float::with_val(64, 1),
            Float::with_val(64, rug::float::Special::Infinity)
        )
        .is_err());
    }

    #[test]
    fn serializes_as_strings() {
        let json = serde_json::to_value(CertifiedReal::from_i64(3, 64)).unwrap();
        assert!(json["midpoint"].as_str().unwrap().starts_with('3'));
        assert_eq!(json["precision"], 64);
    }
}
