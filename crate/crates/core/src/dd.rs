//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s
//! carrying roughly 106 bits of significand.
//!
//! Only used as an extended working precision, so the transcendental
//! functions target accuracy on the moderate arguments the crate needs
//! (|x| up to a few hundred for `exp`, a few turns for the trigonometric
//! functions) rather than full IEEE-style edge-case coverage.

use num_traits::{Float, FloatConst, Num, NumCast, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    /// Normalizes an arbitrary pair so that `|lo| ≤ ulp(hi)/2`.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    pub const fn c(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi: h, lo: l }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DoubleDouble { hi: self.hi * s, lo: self.lo * s }
    }

    fn exp_impl(self) -> Self {
        if self.hi > 709.7 {
            return Self::infinity();
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::one();
        }
        // x = k ln2 + r; expm1 of r / 2^10 is squared back up as e(e + 2)
        let ln2 = Self::LN_2();
        let k = (self.hi / ln2.hi).round();
        let r = self - ln2.mul_f64(k);
        let s = r.ldexp(-10);
        let mut term = s;
        let mut e = s;
        for n in 2..=12 {
            term = term * s / Self::c(n as f64);
            e += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let two = Self::c(2.0);
        for _ in 0..10 {
            e = e * (e + two);
        }
        let sum = e + Self::one();
        sum.ldexp(k as i32)
    }

    fn ln_impl(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::neg_infinity() } else { Self::nan() };
        }
        if self.hi.is_infinite() {
            return self;
        }
        // Newton on exp(y) = x
        let mut y = Self::c(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp_impl() - Self::one();
        }
        y
    }

    /// Taylor series of sin and cos for |x| ≤ π/4.
    fn sin_cos_small(x: Self) -> (Self, Self) {
        let x2 = x * x;
        let mut sin = x;
        let mut cos = Self::one();
        let mut term_s = x;
        let mut term_c = Self::one();
        for n in 1..=16 {
            let k = 2.0 * n as f64;
            term_s = -term_s * x2 / Self::c(k * (k + 1.0));
            term_c = -term_c * x2 / Self::c((k - 1.0) * k);
            sin += term_s;
            cos += term_c;
            if term_c.hi.abs() < 1e-34 && term_s.hi.abs() < 1e-34 {
                break;
            }
        }
        (sin, cos)
    }

    fn sin_cos_impl(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            return (Self::nan(), Self::nan());
        }
        // reduce modulo π/2 using a three-part π/2
        const PIO2: [f64; 3] = [1.5707963267948966, 6.123233995736766e-17, -1.4973849048591698e-33];
        let q = (self.hi / PIO2[0]).round();
        let r = self - Self::from_parts(PIO2[0], PIO2[1]).mul_f64(q) - Self::c(PIO2[2] * q);
        let (s, c) = Self::sin_cos_small(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn sqrt_impl(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::zero() } else { Self::nan() };
        }
        let y = self.hi.sqrt();
        let (p, e) = two_prod(y, y);
        let residual = (self - Self::new(p, e)).hi;
        Self::new(y, residual / (2.0 * y))
    }

    fn newton_inverse<F, D>(target: Self, start: f64, f: F, df: D) -> Self
    where
        F: Fn(Self) -> Self,
        D: Fn(Self) -> Self,
    {
        let mut y = Self::c(start);
        for _ in 0..3 {
            let d = df(y);
            if d.hi == 0.0 || !d.hi.is_finite() {
                break;
            }
            y = y - (f(y) - target) / d;
        }
        y
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::c(x)
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&(self.hi + self.lo), f)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        if !s.is_finite() {
            return Self::c(s);
        }
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (h, l) = quick_two_sum(s, e + f);
        DoubleDouble { hi: h, lo: l }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        if !p.is_finite() {
            return Self::c(p);
        }
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        DoubleDouble { hi: h, lo: l }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Self::c(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Self::from_parts(h, l) + Self::c(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - b * (self / b).trunc()
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::c(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::c(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::c)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        (self.hi + self.lo).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        (self.hi + self.lo).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(Self::c)
    }
}

macro_rules! dd_const {
    ($($name:ident = ($hi:expr, $lo:expr)),* $(,)?) => {
        impl FloatConst for DoubleDouble {
            $(fn $name() -> Self { DoubleDouble::from_parts($hi, $lo) })*
        }
    };
}

dd_const! {
    E = (2.718281828459045, 1.4456468917292502e-16),
    FRAC_1_PI = (0.3183098861837907, -1.9678676675182486e-17),
    FRAC_1_SQRT_2 = (0.7071067811865476, -4.833646656726457e-17),
    FRAC_2_PI = (0.6366197723675814, -3.935735335036497e-17),
    FRAC_2_SQRT_PI = (1.1283791670955126, 1.533545961316588e-17),
    FRAC_PI_2 = (1.5707963267948966, 6.123233995736766e-17),
    FRAC_PI_3 = (1.0471975511965979, -1.072081766451091e-16),
    FRAC_PI_4 = (0.7853981633974483, 3.061616997868383e-17),
    FRAC_PI_6 = (0.5235987755982989, -5.360408832255455e-17),
    FRAC_PI_8 = (0.39269908169872414, 1.5308084989341915e-17),
    LN_10 = (2.302585092994046, -2.1707562233822494e-16),
    LN_2 = (0.6931471805599453, 2.3190468138462996e-17),
    LOG10_E = (0.4342944819032518, 1.098319650216765e-17),
    LOG2_E = (1.4426950408889634, 2.0355273740931033e-17),
    PI = (3.141592653589793, 1.2246467991473532e-16),
    SQRT_2 = (1.4142135623730951, -9.667293313452913e-17),
    TAU = (6.283185307179586, 2.4492935982947064e-16),
    LOG10_2 = (0.3010299956639812, -2.8037281277851704e-18),
    LOG2_10 = (3.321928094887362, 1.661617516973592e-16),
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        Self::c(f64::NAN)
    }
    fn infinity() -> Self {
        Self::c(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Self::c(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Self::c(-0.0)
    }
    fn min_value() -> Self {
        Self::c(f64::MIN)
    }
    fn min_positive_value() -> Self {
        // smallest value whose low word is still a normal number
        Self::c(f64::MIN_POSITIVE * 2f64.powi(53))
    }
    fn epsilon() -> Self {
        Self::c(2f64.powi(-104))
    }
    fn max_value() -> Self {
        Self::c(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let h = self.hi.floor();
        if h == self.hi {
            Self::new(h, self.lo.floor())
        } else {
            Self::c(h)
        }
    }
    fn ceil(self) -> Self {
        -(-self).floor()
    }
    fn round(self) -> Self {
        let half = Self::c(0.5);
        if self.hi >= 0.0 {
            (self + half).floor()
        } else {
            (self - half).ceil()
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Self::c(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        (n * self.ln()).exp()
    }
    fn sqrt(self) -> Self {
        self.sqrt_impl()
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn exp2(self) -> Self {
        (self * Self::LN_2()).exp()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / Self::LN_2()
    }
    fn log10(self) -> Self {
        self.ln() / Self::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Self::zero()
        }
    }
    fn cbrt(self) -> Self {
        if self.hi == 0.0 {
            return self;
        }
        let mut y = Self::c(self.hi.cbrt());
        for _ in 0..2 {
            y = y - (y * y * y - self) / (Self::c(3.0) * y * y);
        }
        y
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos_impl().0
    }
    fn cos(self) -> Self {
        self.sin_cos_impl().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos_impl();
        s / c
    }
    fn asin(self) -> Self {
        Self::newton_inverse(self, self.hi.asin(), |y| y.sin(), |y| y.cos())
    }
    fn acos(self) -> Self {
        Self::FRAC_PI_2() - self.asin()
    }
    fn atan(self) -> Self {
        Self::newton_inverse(self, self.hi.atan(), |y| y.tan(), |y| {
            let c = y.cos();
            (c * c).recip()
        })
    }
    fn atan2(self, other: Self) -> Self {
        if other.hi == 0.0 && self.hi == 0.0 {
            return Self::c(self.hi.atan2(other.hi));
        }
        let start = self.hi.atan2(other.hi);
        // refine θ so that (cos θ, sin θ) ∥ (other, self)
        let r = self.hypot(other);
        let (y, x) = (self / r, other / r);
        let mut theta = Self::c(start);
        for _ in 0..2 {
            let (s, c) = theta.sin_cos_impl();
            theta += y * c - x * s;
        }
        theta
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            let mut term = self;
            let mut sum = self;
            for n in 2..=30 {
                term = term * self / Self::c(n as f64);
                sum += term;
                if term.hi.abs() < 1e-34 * sum.hi.abs() {
                    break;
                }
            }
            sum
        } else {
            self.exp() - Self::one()
        }
    }
    fn ln_1p(self) -> Self {
        if self.hi.abs() < 0.5 {
            Self::newton_inverse(self, self.hi.ln_1p(), |y| y.exp_m1(), |y| y.exp())
        } else {
            (self + Self::one()).ln()
        }
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let e = self.exp_m1();
            // sinh x = (e^x - 1)(e^x + 1) / (2 e^x)
            e * (e + Self::c(2.0)) / ((e + Self::one()) * Self::c(2.0))
        } else {
            let e = self.exp();
            (e - e.recip()) / Self::c(2.0)
        }
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) / Self::c(2.0)
    }
    fn tanh(self) -> Self {
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        Self::newton_inverse(self, self.hi.asinh(), |y| y.sinh(), |y| y.cosh())
    }
    fn acosh(self) -> Self {
        Self::newton_inverse(self, self.hi.acosh(), |y| y.cosh(), |y| y.sinh())
    }
    fn atanh(self) -> Self {
        ((Self::one() + self) / (Self::one() - self)).ln() / Self::c(2.0)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
    fn to_degrees(self) -> Self {
        self * Self::c(180.0) / Self::PI()
    }
    fn to_radians(self) -> Self {
        self * Self::PI() / Self::c(180.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(hi: f64, lo: f64) -> DoubleDouble {
        DoubleDouble::from_parts(hi, lo)
    }

    fn assert_close(got: DoubleDouble, want: DoubleDouble, rel: f64) {
        let err = ((got - want) / want).abs().hi();
        assert!(err < rel, "got {:?}, want {:?}, rel err {err:e}", got, want);
    }

    // reference pairs from 50-digit arithmetic
    #[test]
    fn arithmetic_is_double_double_accurate() {
        let third = DoubleDouble::one() / DoubleDouble::c(3.0);
        assert_close(third, dd(0.3333333333333333, 1.850371707708594e-17), 1e-31);
        let s = DoubleDouble::c(2.0).sqrt();
        assert_close(s, DoubleDouble::SQRT_2(), 1e-31);
        assert_close(s * s, DoubleDouble::c(2.0), 1e-31);
    }

    #[test]
    fn transcendentals_match_reference() {
        assert_close(DoubleDouble::c(3.0).exp(), dd(20.085536923187668, -1.8275625525512857e-16), 1e-30);
        assert_close(DoubleDouble::c(1.0).exp(), DoubleDouble::E(), 1e-30);
        assert_close(DoubleDouble::c(1.0).cosh(), dd(1.5430806348152437, 6.606796775006833e-17), 1e-30);
        assert_close(DoubleDouble::c(12.0).cosh(), dd(81377.39571257407, -4.2045279280626504e-12), 1e-30);
        assert_close(DoubleDouble::c(2.0).ln(), DoubleDouble::LN_2(), 1e-30);
        assert_close(DoubleDouble::c(6.0).sin(), dd(-0.27941549819892586, -1.2659979684764697e-17), 1e-29);
        assert_close(DoubleDouble::c(0.5).sin(), dd(0.479425538604203, -5.103969860556013e-18), 1e-30);
        assert_close(DoubleDouble::FRAC_PI_4().tan(), DoubleDouble::one(), 1e-30);
        assert_close(DoubleDouble::one().atan() * DoubleDouble::c(4.0), DoubleDouble::PI(), 1e-30);
    }

    #[test]
    fn inverse_functions_round_trip() {
        for x in [0.01, 0.3, 1.7, 5.0] {
            let x = DoubleDouble::c(x);
            assert_close(x.sinh().asinh(), x, 1e-29);
            assert_close(x.exp().ln(), x, 1e-29);
            assert_close(x.exp_m1().ln_1p(), x, 1e-29);
        }
        let y = DoubleDouble::c(-0.7);
        assert_close(y.sin().asin(), y, 1e-29);
        assert_close(DoubleDouble::c(1.0).atan2(DoubleDouble::c(-1.0)), DoubleDouble::PI() * DoubleDouble::c(0.75), 1e-30);
    }

    #[test]
    fn rounding_and_ordering() {
        let x = DoubleDouble::new(3.0, -1e-20);
        assert_eq!(x.floor(), DoubleDouble::c(2.0));
        assert_eq!(x.ceil(), DoubleDouble::c(3.0));
        assert_eq!(x.round(), DoubleDouble::c(3.0));
        assert!(x < DoubleDouble::c(3.0));
        assert_eq!(DoubleDouble::c(-2.5).trunc(), DoubleDouble::c(-2.0));
        assert_eq!(DoubleDouble::c(2.0).powi(-2), DoubleDouble::c(0.25));
    }
}
