//! Coefficient fields: exact rationals and fixed-precision complex numbers.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, Ordering};

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// Default working precision of numeric mode, in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

static PREC_BITS: AtomicU32 = AtomicU32::new(digits_to_bits(DEFAULT_DIGITS));

pub const fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) ~ 3.3219; 32 guard bits
    (digits * 33220).div_ceil(10000) + 32
}

/// Sets the process-wide precision used when numeric values are created.
pub fn set_numeric_digits(digits: u32) {
    PREC_BITS.store(digits_to_bits(digits.max(10)), Ordering::Relaxed);
}

pub fn numeric_bits() -> u32 {
    PREC_BITS.load(Ordering::Relaxed)
}

/// A field of coefficients. Everything generic in the crate runs over either
/// [`Q`] (exact) or [`C`] (numeric).
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
    + Sum
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn abs_f64(&self) -> f64;
    fn is_exact() -> bool;
    /// `exp(2 pi i / m)`, when the field contains it.
    fn root_of_unity(m: u32) -> Option<Self>;
    fn to_rational(&self) -> Option<Rational>;
    fn to_c(&self) -> C;
    /// Converts a complex value; `None` for the exact field.
    fn from_c(c: &C) -> Option<Self>;
    /// Zero test at the field's working tolerance relative to `scale`.
    fn near_zero(&self, scale: f64) -> bool;

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::from((n, d)))
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn powi(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r *= self;
        }
        r
    }
}

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub Rational);

/// Complex number at the numeric working precision.
#[derive(Clone, PartialEq)]
pub struct C(pub Complex);

impl Q {
    pub fn new(n: i64, d: i64) -> Q {
        Q(Rational::from((n, d)))
    }
    pub fn int(v: impl Into<Integer>) -> Q {
        Q(Rational::from(v.into()))
    }
    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }
    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }
    pub fn pow(&self, e: i32) -> Q {
        Q(Rational::from((&self.0).pow(e)))
    }
    /// Parses `"n"`, `"n/d"` or a terminating decimal like `"0.25"`.
    pub fn parse(s: &str) -> Option<Q> {
        let s = s.trim();
        if let Ok(r) = s.parse::<Rational>() {
            return Some(Q(r));
        }
        parse_decimal(s).map(Q)
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: Integer = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp).parse().ok()?;
    let scale = exp - fp.len() as i32;
    let ten = Rational::from(10);
    let mut r = Rational::from(digits) * Rational::from((&ten).pow(scale));
    if neg {
        r = -r;
    }
    Some(r)
}

impl C {
    pub fn new(re: f64, im: f64) -> C {
        C(Complex::with_val(numeric_bits(), (re, im)))
    }
    pub fn from_complex(c: Complex) -> C {
        C(c)
    }
    pub fn prec(&self) -> u32 {
        self.0.prec().0
    }
    pub fn re(&self) -> &Float {
        self.0.real()
    }
    pub fn im(&self) -> &Float {
        self.0.imag()
    }
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }
    pub fn sqrt(&self) -> C {
        C(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }
    pub fn i() -> C {
        C(Complex::with_val(numeric_bits(), (0, 1)))
    }
    /// Relative distance `|a-b| / max(|a|,|b|,tiny)`.
    pub fn rel_dist(&self, other: &C) -> f64 {
        let d = (self.clone() - other).abs_f64();
        let s = self.abs_f64().max(other.abs_f64());
        if s == 0.0 { d } else { d / s }
    }
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = self.0.real().to_string_radix(10, Some(digits));
        if self.0.imag().is_zero() {
            re
        } else {
            let im = self.0.imag().to_string_radix(10, Some(digits));
            format!("{re}{}{im}i", if self.0.imag().is_sign_negative() { "" } else { "+" })
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Debug for C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(20))
    }
}
impl fmt::Display for C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(30))
    }
}

macro_rules! binops {
    ($T:ident, $tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr for $T {
            type Output = $T;
            fn $m(mut self, rhs: $T) -> $T {
                self.$am(&rhs);
                self
            }
        }
        impl<'a> $tr<&'a $T> for $T {
            type Output = $T;
            fn $m(mut self, rhs: &'a $T) -> $T {
                self.$am(rhs);
                self
            }
        }
        impl<'a> $tr<&'a $T> for &'a $T {
            type Output = $T;
            fn $m(self, rhs: &'a $T) -> $T {
                let mut r = self.clone();
                r.$am(rhs);
                r
            }
        }
        impl $atr for $T {
            fn $am(&mut self, rhs: $T) {
                self.$am(&rhs);
            }
        }
    };
}

impl<'a> AddAssign<&'a Q> for Q {
    fn add_assign(&mut self, rhs: &'a Q) {
        self.0 += &rhs.0;
    }
}
impl<'a> SubAssign<&'a Q> for Q {
    fn sub_assign(&mut self, rhs: &'a Q) {
        self.0 -= &rhs.0;
    }
}
impl<'a> MulAssign<&'a Q> for Q {
    fn mul_assign(&mut self, rhs: &'a Q) {
        self.0 *= &rhs.0;
    }
}
impl<'a> DivAssign<&'a Q> for Q {
    fn div_assign(&mut self, rhs: &'a Q) {
        assert!(rhs.0 != 0, "rational division by zero");
        self.0 /= &rhs.0;
    }
}
binops!(Q, Add, add, AddAssign, add_assign, +);
binops!(Q, Sub, sub, SubAssign, sub_assign, -);
binops!(Q, Mul, mul, MulAssign, mul_assign, *);
binops!(Q, Div, div, DivAssign, div_assign, /);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}
impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        let mut s = Q::zero();
        for x in iter {
            s += &x;
        }
        s
    }
}

fn cprec(a: &Complex, b: &Complex) -> u32 {
    a.prec().0.min(b.prec().0)
}

impl<'a> AddAssign<&'a C> for C {
    fn add_assign(&mut self, rhs: &'a C) {
        self.0 += &rhs.0;
    }
}
impl<'a> SubAssign<&'a C> for C {
    fn sub_assign(&mut self, rhs: &'a C) {
        self.0 -= &rhs.0;
    }
}
impl<'a> MulAssign<&'a C> for C {
    fn mul_assign(&mut self, rhs: &'a C) {
        self.0 *= &rhs.0;
    }
}
impl<'a> DivAssign<&'a C> for C {
    fn div_assign(&mut self, rhs: &'a C) {
        self.0 /= &rhs.0;
    }
}
binops!(C, Add, add, AddAssign, add_assign, +);
binops!(C, Sub, sub, SubAssign, sub_assign, -);
binops!(C, Mul, mul, MulAssign, mul_assign, *);
binops!(C, Div, div, DivAssign, div_assign, /);

impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        C(-self.0)
    }
}
impl Sum for C {
    fn sum<I: Iterator<Item = C>>(iter: I) -> C {
        let mut s = C::zero();
        for x in iter {
            s += &x;
        }
        s
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Q(Rational::new())
    }
    fn one() -> Self {
        Q(Rational::from(1))
    }
    fn from_i64(v: i64) -> Self {
        Q(Rational::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        Q(q.clone())
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.0 == 0 || b.0 == 0 {
            return;
        }
        self.0 += Rational::from(&a.0 * &b.0);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Q(Rational::from(&self.0 * &other.0))
    }
    fn add_ref(&self, other: &Self) -> Self {
        Q(Rational::from(&self.0 + &other.0))
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Q(Rational::from(&self.0 - &other.0))
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        Q(Rational::from(self.0.recip_ref()))
    }
    fn abs_f64(&self) -> f64 {
        self.0.to_f64().abs()
    }
    fn is_exact() -> bool {
        true
    }
    fn root_of_unity(m: u32) -> Option<Self> {
        match m {
            1 => Some(Q::one()),
            2 => Some(Q::from_i64(-1)),
            _ => None,
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.0.clone())
    }
    fn to_c(&self) -> C {
        C(Complex::with_val(numeric_bits(), &self.0))
    }
    fn from_c(_: &C) -> Option<Self> {
        None
    }
    fn near_zero(&self, _scale: f64) -> bool {
        self.0 == 0
    }
}

impl Scalar for C {
    fn zero() -> Self {
        C(Complex::new(numeric_bits()))
    }
    fn one() -> Self {
        C(Complex::with_val(numeric_bits(), 1))
    }
    fn from_i64(v: i64) -> Self {
        C(Complex::with_val(numeric_bits(), v))
    }
    fn from_rational(q: &Rational) -> Self {
        C(Complex::with_val(numeric_bits(), q))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = cprec(&a.0, &b.0);
        self.0 += Complex::with_val(p, &a.0 * &b.0);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        C(Complex::with_val(cprec(&self.0, &other.0), &self.0 * &other.0))
    }
    fn add_ref(&self, other: &Self) -> Self {
        C(Complex::with_val(cprec(&self.0, &other.0), &self.0 + &other.0))
    }
    fn sub_ref(&self, other: &Self) -> Self {
        C(Complex::with_val(cprec(&self.0, &other.0), &self.0 - &other.0))
    }
    fn inv(&self) -> Self {
        C(Complex::with_val(self.prec(), self.0.recip_ref()))
    }
    fn abs_f64(&self) -> f64 {
        Float::with_val(64, self.0.abs_ref()).to_f64()
    }
    fn is_exact() -> bool {
        false
    }
    fn root_of_unity(m: u32) -> Option<Self> {
        let p = numeric_bits();
        let pi = Float::with_val(p, rug::float::Constant::Pi);
        let ang = Float::with_val(p, 2 * pi / m);
        let c = Complex::with_val(p, (Float::with_val(p, ang.cos_ref()), Float::with_val(p, ang.sin_ref())));
        Some(C(c))
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn to_c(&self) -> C {
        self.clone()
    }
    fn from_c(c: &C) -> Option<Self> {
        Some(c.clone())
    }
    fn near_zero(&self, scale: f64) -> bool {
        let eps = 2f64.powi(-(self.prec() as i32 - 40));
        self.abs_f64() <= eps * scale.max(1.0)
    }
}

/// Binomial coefficient as a rational.
pub fn binom(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::new();
    }
    Rational::from(Integer::from(Integer::binomial_u(n as u32, k as u32)))
}

/// Rational reconstruction of a float by continued fractions with bounded
/// denominator.
pub fn approx_rational(x: &Float, max_den: u64) -> Option<Rational> {
    let mut r = Rational::from_f64(x.to_f64())?;
    if let Some(exact) = x.to_rational() {
        r = exact;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (Integer::from(0), Integer::from(1), Integer::from(1), Integer::from(0));
    let mut rem = r;
    for _ in 0..64 {
        let a = Integer::from(rem.floor_ref());
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = rem - Rational::from(a);
        if frac == 0 {
            break;
        }
        rem = frac.recip();
    }
    if q1 == 0 {
        return None;
    }
    Some(Rational::from((p1, q1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Q::parse("3/4"), Some(Q::new(3, 4)));
        assert_eq!(Q::parse("-2"), Some(Q::from_i64(-2)));
        assert_eq!(Q::parse("0.125"), Some(Q::new(1, 8)));
        assert_eq!(Q::parse("1.5e2"), Some(Q::from_i64(150)));
        assert_eq!(Q::parse("x"), None);
    }

    #[test]
    fn complex_roots_of_unity() {
        let w = C::root_of_unity(3).unwrap();
        let w3 = w.powi(3);
        assert!((w3 - C::one()).near_zero(1.0));
    }

    #[test]
    fn continued_fraction() {
        let f = Float::with_val(200, 1) / 3u32;
        assert_eq!(approx_rational(&f, 1000), Some(Rational::from((1, 3))));
    }
}
