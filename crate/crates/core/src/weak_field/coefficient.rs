//! Scalar types usable as power-series coefficients.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_float::DBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations plus the few transcendental pieces the weak-field
/// functional needs.  `Ctx` carries the working precision where there is one.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Debug + Send + Sync;

    fn from_ratio(num: i64, den: i64, ctx: &Self::Ctx) -> Self;

    /// Exact for binary types; decimal types take the shortest
    /// round-tripping representation, so `0.01` becomes exactly 1/100.
    fn from_f64(x: f64, ctx: &Self::Ctx) -> Result<Self>;

    fn is_zero(&self) -> bool;

    /// Square root; exact types fail unless the value is a perfect square.
    fn sqrt(&self) -> Result<Self>;

    /// `pi`, if the type can represent it.
    fn pi(ctx: &Self::Ctx) -> Result<Self>;

    /// `L(w) = 2 artanh(sqrt w) / sqrt w`, continued analytically to `w < 0`.
    fn odd_log_kernel(w: &Self, ctx: &Self::Ctx) -> Result<Self>;

    fn to_f64(&self) -> f64;

    /// Full-precision text form.
    fn render(&self) -> String;

    fn zero(ctx: &Self::Ctx) -> Self {
        Self::from_ratio(0, 1, ctx)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        Self::from_ratio(1, 1, ctx)
    }
}

fn kernel_domain() -> Error {
    Error::domain("odd-log kernel needs w < 1")
}

macro_rules! float_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            type Ctx = ();

            fn from_ratio(num: i64, den: i64, _: &()) -> Self {
                num as $t / den as $t
            }

            fn from_f64(x: f64, _: &()) -> Result<Self> {
                Ok(x as $t)
            }

            fn is_zero(&self) -> bool {
                *self == 0.0
            }

            fn sqrt(&self) -> Result<Self> {
                if *self < 0.0 {
                    Err(Error::domain(format!("square root of negative value {self}")))
                } else {
                    Ok(<$t>::sqrt(*self))
                }
            }

            fn pi(_: &()) -> Result<Self> {
                Ok(<$t as num_traits::FloatConst>::PI())
            }

            fn odd_log_kernel(w: &Self, _: &()) -> Result<Self> {
                let w = *w;
                if !(w < 1.0) {
                    Err(kernel_domain())
                } else if w == 0.0 {
                    Ok(2.0)
                } else if w > 0.0 {
                    let u = w.sqrt();
                    Ok(2.0 * u.atanh() / u)
                } else {
                    let v = (-w).sqrt();
                    Ok(2.0 * v.atan() / v)
                }
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn render(&self) -> String {
                format!("{:e}", self)
            }
        }
    };
}

float_coefficient!(f32);
float_coefficient!(f64);

impl Coefficient for BigRational {
    type Ctx = ();

    fn from_ratio(num: i64, den: i64, _: &()) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64, _: &()) -> Result<Self> {
        BigRational::from_float(x).ok_or_else(|| Error::domain(format!("{x} is not finite")))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::domain("square root of negative rational"));
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Ok(BigRational::new(n, d))
        } else {
            Err(Error::domain(format!("{self} is not the square of a rational")))
        }
    }

    fn pi(_: &()) -> Result<Self> {
        Err(Error::domain("pi is not rational"))
    }

    fn odd_log_kernel(w: &Self, _: &()) -> Result<Self> {
        if Zero::is_zero(w) {
            Ok(BigRational::from_integer(BigInt::from(2)))
        } else {
            Err(Error::domain("odd-log kernel is rational only at w = 0"))
        }
    }

    fn to_f64(&self) -> f64 {
        // Scale to avoid overflow when numerator and denominator are huge.
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.denom().bits().saturating_sub(60) as usize;
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Decimal working precision, in significant digits.
pub type Digits = usize;

impl Coefficient for DBig {
    type Ctx = Digits;

    fn from_ratio(num: i64, den: i64, digits: &Digits) -> Self {
        let n = DBig::from(num).with_precision(*digits).value();
        let d = DBig::from(den).with_precision(*digits).value();
        n / d
    }

    fn from_f64(x: f64, digits: &Digits) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("{x} is not finite")));
        }
        let d = DBig::from_str(&format!("{x:e}")).map_err(|e| Error::domain(e.to_string()))?;
        Ok(d.with_precision(*digits).value())
    }

    fn is_zero(&self) -> bool {
        *self == DBig::ZERO
    }

    fn sqrt(&self) -> Result<Self> {
        if *self < DBig::ZERO {
            Err(Error::domain("square root of negative value"))
        } else if *self == DBig::ZERO {
            Ok(self.clone())
        } else {
            Ok(DBig::sqrt(self))
        }
    }

    fn pi(digits: &Digits) -> Result<Self> {
        Ok(DBig::pi(*digits))
    }

    fn odd_log_kernel(w: &Self, digits: &Digits) -> Result<Self> {
        let one = Self::one(digits);
        let two = Self::from_ratio(2, 1, digits);
        if *w >= one {
            Err(kernel_domain())
        } else if *w == DBig::ZERO {
            Ok(two)
        } else if *w > DBig::ZERO {
            let u = DBig::sqrt(w);
            Ok(two * u.atanh() / u)
        } else {
            let v = DBig::sqrt(&(-w.clone()));
            Ok(two * v.atan() / v)
        }
    }

    fn to_f64(&self) -> f64 {
        DBig::to_f64(self).value()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}
