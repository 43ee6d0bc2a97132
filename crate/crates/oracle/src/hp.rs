//! Fixed-point arbitrary-precision real and complex numbers.
//!
//! A value is stored as an integer scaled by 2^-FRAC_BITS. Only the handful of
//! operations the Mie oracle needs are provided.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const FRAC_BITS: usize = 640;

#[derive(Clone, Debug, PartialEq)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    /// Exact conversion of a finite f64.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let m = BigInt::from(mant) * sign;
        let shift = FRAC_BITS as i64 + e;
        if shift >= 0 {
            Fixed(m << shift as usize)
        } else {
            Fixed(m >> (-shift) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        // keep 128 significant bits before handing over to f64
        let bits = self.0.bits() as i64;
        let drop = (bits - 128).max(0);
        let top = (&self.0 >> drop as usize).to_f64().unwrap();
        top * 2f64.powi((drop - FRAC_BITS as i64) as i32)
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    /// True when |self| is below 2^-bits.
    pub fn is_below(&self, bits: usize) -> bool {
        (self.0.bits() as i64) < FRAC_BITS as i64 - bits as i64
    }

    pub fn div_int(&self, d: i64) -> Self {
        Fixed(&self.0 / d)
    }

    pub fn mul_int(&self, d: i64) -> Self {
        Fixed(&self.0 * d)
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }
}

impl Div for &Fixed {
    type Output = Fixed;
    fn div(self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn new(re: Fixed, im: Fixed) -> Self {
        CFixed { re, im }
    }

    pub fn zero() -> Self {
        CFixed::new(Fixed::zero(), Fixed::zero())
    }

    pub fn real(re: Fixed) -> Self {
        CFixed::new(re, Fixed::zero())
    }

    pub fn from_c64(z: Complex64) -> Self {
        CFixed::new(Fixed::from_f64(z.re), Fixed::from_f64(z.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_below(&self, bits: usize) -> bool {
        self.re.is_below(bits) && self.im.is_below(bits)
    }

    pub fn div_int(&self, d: i64) -> Self {
        CFixed::new(self.re.div_int(d), self.im.div_int(d))
    }

    pub fn mul_int(&self, d: i64) -> Self {
        CFixed::new(self.re.mul_int(d), self.im.mul_int(d))
    }

    pub fn norm_sqr(&self) -> Fixed {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

impl Add for &CFixed {
    type Output = CFixed;
    fn add(self, o: &CFixed) -> CFixed {
        CFixed::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &CFixed {
    type Output = CFixed;
    fn sub(self, o: &CFixed) -> CFixed {
        CFixed::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &CFixed {
    type Output = CFixed;
    fn mul(self, o: &CFixed) -> CFixed {
        CFixed::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Div for &CFixed {
    type Output = CFixed;
    fn div(self, o: &CFixed) -> CFixed {
        let d = o.norm_sqr();
        let num = CFixed::new(
            &(&self.re * &o.re) + &(&self.im * &o.im),
            &(&self.im * &o.re) - &(&self.re * &o.im),
        );
        CFixed::new(&num.re / &d, &num.im / &d)
    }
}

impl Neg for &CFixed {
    type Output = CFixed;
    fn neg(self) -> CFixed {
        CFixed::new(-&self.re, -&self.im)
    }
}

/// sin and cos of a real argument by Taylor series.
pub fn sin_cos(x: &Fixed) -> (Fixed, Fixed) {
    let x2 = x * x;
    let mut sin = x.clone();
    let mut cos = Fixed::from_int(1);
    let mut ts = x.clone();
    let mut tc = Fixed::from_int(1);
    let mut k: i64 = 1;
    loop {
        ts = (&ts * &x2).div_int((2 * k) * (2 * k + 1));
        tc = (&tc * &x2).div_int((2 * k - 1) * (2 * k));
        if k % 2 == 1 {
            sin = &sin - &ts;
            cos = &cos - &tc;
        } else {
            sin = &sin + &ts;
            cos = &cos + &tc;
        }
        if ts.is_below(FRAC_BITS - 8) && tc.is_below(FRAC_BITS - 8) && k > 4 {
            break;
        }
        k += 1;
    }
    (sin, cos)
}
