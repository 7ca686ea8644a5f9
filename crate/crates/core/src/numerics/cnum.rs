use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Float;

/// A complex number whose parts are MPFR floats at a common precision.
#[derive(Clone, PartialEq)]
pub struct CNum {
    re: Float,
    im: Float,
}

impl CNum {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert!(re.is_finite() && im.is_finite(), "non-finite CNum");
        CNum { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        CNum::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_i64(prec: u32, re: i64, im: i64) -> Self {
        CNum::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        CNum::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> CNum {
        CNum::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> CNum {
        CNum::new(
            Float::with_val(self.im.prec(), -&self.im),
            self.re.clone(),
        )
    }

    /// `|z|^2`
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    /// `|z|`
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, k: &Float) -> CNum {
        let p = self.prec();
        CNum::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_i64(&self, k: i64) -> CNum {
        let p = self.prec();
        CNum::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i32) -> CNum {
        CNum::new(self.re.clone() << k, self.im.clone() << k)
    }

    /// Exact division by `2^k`.
    pub fn shr(&self, k: i32) -> CNum {
        CNum::new(self.re.clone() >> k, self.im.clone() >> k)
    }

    pub fn square(&self) -> CNum {
        self * self
    }

    pub fn recip(&self) -> CNum {
        let p = self.prec();
        let n = self.norm_sqr();
        CNum::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    /// `|self - other|`
    pub fn dist(&self, other: &CNum) -> Float {
        (self - other).abs()
    }

    /// Real part of `self * conj(other)`.
    pub fn dot(&self, other: &CNum) -> Float {
        let p = self.prec().max(other.prec());
        let mut d = Float::with_val(p, &self.re * &other.re);
        d += Float::with_val(p, &self.im * &other.im);
        d
    }

    /// Imaginary part of `conj(self) * other`; positive when `other / self`
    /// lies in the upper half plane.
    pub fn cross(&self, other: &CNum) -> Float {
        let p = self.prec().max(other.prec());
        let mut d = Float::with_val(p, &self.re * &other.im);
        d -= Float::with_val(p, &self.im * &other.re);
        d
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for CNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CNum({} {:+}i)",
            self.re.to_string_radix(10, Some(24)),
            self.im.to_f64()
        )
    }
}

impl fmt::Display for CNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&super::format_cnum(self, digits as u32))
    }
}

impl<'a> Add<&'a CNum> for &'a CNum {
    type Output = CNum;
    fn add(self, rhs: &'a CNum) -> CNum {
        let p = self.prec().max(rhs.prec());
        CNum::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a CNum> for &'a CNum {
    type Output = CNum;
    fn sub(self, rhs: &'a CNum) -> CNum {
        let p = self.prec().max(rhs.prec());
        CNum::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a CNum> for &'a CNum {
    type Output = CNum;
    fn mul(self, rhs: &'a CNum) -> CNum {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        CNum::new(re, im)
    }
}

impl<'a> Div<&'a CNum> for &'a CNum {
    type Output = CNum;
    fn div(self, rhs: &'a CNum) -> CNum {
        let p = self.prec().max(rhs.prec());
        let n = rhs.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        re /= &n;
        im /= &n;
        CNum::new(re, im)
    }
}

impl Neg for &CNum {
    type Output = CNum;
    fn neg(self) -> CNum {
        CNum::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }
}

impl Neg for CNum {
    type Output = CNum;
    fn neg(self) -> CNum {
        CNum::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CNum> for CNum {
            type Output = CNum;
            fn $m(self, rhs: CNum) -> CNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CNum> for CNum {
            type Output = CNum;
            fn $m(self, rhs: &'a CNum) -> CNum {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CNum> for &'a CNum {
            type Output = CNum;
            fn $m(self, rhs: CNum) -> CNum {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
