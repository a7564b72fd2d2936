use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::Val;
use crate::error::Error as PadicError;

thread_local! {
    static POWERS: RefCell<HashMap<(u64, u32), Rc<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^k` as a big integer, memoized per thread.
pub fn prime_power(p: u64, k: u32) -> Rc<BigUint> {
    POWERS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some(v) = cache.get(&(p, k)) {
            return v.clone();
        }
        let v = Rc::new(BigUint::from(p).pow(k));
        if cache.len() > 4096 {
            cache.clear();
        }
        cache.insert((p, k), v.clone());
        v
    })
}

/// Splits `x = p^v * u` with `p ∤ u`; `x` must be nonzero.
fn split_p(p: u64, x: &BigUint) -> (u32, BigUint) {
    debug_assert!(!x.is_zero());
    if p == 2 {
        let v = x.trailing_zeros().unwrap_or(0) as u32;
        return (v, x >> v);
    }
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut u = x.clone();
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

/// A p-adic number known to bounded precision.
///
/// The represented value is `mantissa / p^den`, where the mantissa is only
/// known modulo `p^prec`. Hence the value itself is known modulo
/// `p^(prec - den)`, its *absolute precision*. Nonzero values are kept in
/// canonical form: when `den > 0` the mantissa is a unit. Zero carries only
/// its absolute precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    prec: u32,
    den: u32,
    mant: BigUint,
}

impl PadicScalar {
    fn canonical(p: u64, prec: u32, den: u32, mant: BigUint) -> Self {
        let modulus = prime_power(p, prec);
        let mut mant = if mant >= *modulus { mant % &*modulus } else { mant };
        let (mut prec, mut den) = (prec, den);
        if mant.is_zero() {
            return if prec >= den {
                PadicScalar { p, prec: prec - den, den: 0, mant }
            } else {
                PadicScalar { p, prec: 0, den: den - prec, mant }
            };
        }
        if den > 0 {
            let (v, u) = split_p(p, &mant);
            let c = v.min(den);
            if c > 0 {
                mant = if c == v { u } else { mant / &*prime_power(p, c) };
                den -= c;
                prec -= c;
            }
        }
        PadicScalar { p, prec, den, mant }
    }

    /// An exact integer embedded at precision `prec`.
    pub fn from_int(p: u64, prec: u32, x: impl Into<BigInt>) -> Self {
        let x: BigInt = x.into();
        let modulus = BigInt::from_biguint(Sign::Plus, (*prime_power(p, prec)).clone());
        let r = x.mod_floor(&modulus);
        Self::canonical(p, prec, 0, r.to_biguint().expect("nonnegative"))
    }

    pub fn from_i64(p: u64, prec: u32, x: i64) -> Self {
        Self::from_int(p, prec, x)
    }

    /// `x / p^den` with `x` an exact integer; the mantissa is kept to `prec` digits.
    pub fn from_parts(p: u64, prec: u32, den: u32, x: impl Into<BigInt>) -> Result<Self, PadicError> {
        if den > prec {
            return Err(PadicError::NoSignificantDigits { den, prec });
        }
        let x: BigInt = x.into();
        let modulus = BigInt::from_biguint(Sign::Plus, (*prime_power(p, prec)).clone());
        let r = x.mod_floor(&modulus).to_biguint().expect("nonnegative");
        Ok(Self::canonical(p, prec, den, r))
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicScalar { p, prec, den: 0, mant: BigUint::zero() }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_i64(p, prec, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Number of mantissa digits `N`.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Denominator exponent `m`.
    pub fn den_exp(&self) -> u32 {
        self.den
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mant
    }

    /// The value is known modulo `p^abs_precision()`.
    pub fn abs_precision(&self) -> i64 {
        self.prec as i64 - self.den as i64
    }

    /// True if the mantissa is zero, i.e. the value is zero to its precision.
    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 0
    }

    pub fn valuation(&self) -> Val {
        if self.mant.is_zero() {
            Val::AtLeast(self.abs_precision())
        } else {
            let (v, _) = split_p(self.p, &self.mant);
            Val::Exact(v as i64 - self.den as i64)
        }
    }

    /// Valuation of the mantissa, or `prec` when the mantissa is zero.
    fn mant_val(&self) -> u32 {
        if self.mant.is_zero() {
            self.prec
        } else {
            split_p(self.p, &self.mant).0
        }
    }

    fn check_prime(&self, other: &Self) -> Result<(), PadicError> {
        if self.p != other.p {
            Err(PadicError::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let p = self.p;
        let den = self.den.max(other.den);
        let abs = self.abs_precision().min(other.abs_precision());
        let prec = (abs + den as i64) as u32;
        let a = &self.mant * &*prime_power(p, den - self.den);
        let b = &other.mant * &*prime_power(p, den - other.den);
        Ok(Self::canonical(p, prec, den, a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let p = self.p;
        let prec = (self.prec + other.mant_val())
            .min(other.prec + self.mant_val())
            .min(self.prec.max(other.prec));
        let den = self.den + other.den;
        Ok(Self::canonical(p, prec, den, &self.mant * &other.mant))
    }

    fn neg_ref(&self) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        let modulus = prime_power(self.p, self.prec);
        PadicScalar { p: self.p, prec: self.prec, den: self.den, mant: &*modulus - &self.mant }
    }

    /// Multiplicative inverse; the denominator exponent grows by `v_p(self)`.
    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.mant.is_zero() {
            return Err(PadicError::NotInvertibleToPrecision);
        }
        let p = self.p;
        if self.den > 0 {
            // unit mantissa
            let modulus = prime_power(p, self.prec);
            let u = self.mant.modinv(&modulus).expect("unit mantissa");
            let prec = self.prec + self.den;
            let mant = u * &*prime_power(p, self.den);
            return Ok(Self::canonical(p, prec, 0, mant));
        }
        let (v, u) = split_p(p, &self.mant);
        let prec = self.prec - v;
        let modulus = prime_power(p, prec);
        let inv = if prec == 0 {
            BigUint::zero()
        } else {
            u.modinv(&modulus).expect("unit")
        };
        Ok(Self::canonical(p, prec, v, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, PadicError> {
        self.try_mul(&other.inv()?)
    }

    /// Multiplies by `p^k` exactly (k may be negative).
    pub fn shift(&self, k: i64) -> Self {
        if k >= 0 {
            let k = k as u32;
            if self.den >= k {
                Self::canonical(self.p, self.prec, self.den - k, self.mant.clone())
            } else {
                let extra = k - self.den;
                let mant = &self.mant * &*prime_power(self.p, extra);
                Self::canonical(self.p, self.prec + extra, 0, mant)
            }
        } else {
            Self::canonical(self.p, self.prec, self.den + (-k) as u32, self.mant.clone())
        }
    }

    /// Drops digits so that the value is known modulo at most `p^abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        let prec = (abs + self.den as i64).max(0) as u32;
        if self.mant.is_zero() && prec == 0 {
            let den = (self.den as i64 - abs) as u32;
            return PadicScalar { p: self.p, prec: 0, den, mant: BigUint::zero() };
        }
        Self::canonical(self.p, prec, self.den, self.mant.clone())
    }

    /// Integral value as the balanced representative in `(-p^N/2, p^N/2]`.
    pub fn to_balanced_int(&self) -> Option<BigInt> {
        if self.den > 0 {
            return None;
        }
        let modulus = prime_power(self.p, self.prec);
        let m = BigInt::from_biguint(Sign::Plus, self.mant.clone());
        let half = BigInt::from_biguint(Sign::Plus, (*modulus).clone() >> 1u32);
        if m > half {
            Some(m - BigInt::from_biguint(Sign::Plus, (*modulus).clone()))
        } else {
            Some(m)
        }
    }

    /// Residue modulo `p^k` of an integral value; `None` if not integral or
    /// not known to `k` digits.
    pub fn residue_u64(&self, k: u32, modulus: u64) -> Option<u64> {
        if self.den > 0 || (self.prec < k && !(self.mant.is_zero() && self.abs_precision() >= k as i64)) {
            return None;
        }
        (&self.mant % BigUint::from(modulus)).to_u64()
    }

    /// True when `self - other` is zero to the combined precision.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = BigInt::from_biguint(Sign::Plus, self.mant.clone());
        let shown = if self.den == 0 {
            self.to_balanced_int().unwrap_or(m)
        } else {
            m
        };
        if self.den > 0 {
            write!(f, "{}^-{} * {} + O({}^{})", self.p, self.den, shown, self.p, self.abs_precision())
        } else {
            write!(f, "{} + O({}^{})", shown, self.p, self.abs_precision())
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a PadicScalar> for &'a PadicScalar {
            type Output = PadicScalar;
            /// Panics on mismatched primes.
            fn $method(self, rhs: &'a PadicScalar) -> PadicScalar {
                self.$inner(rhs).expect("prime mismatch")
            }
        }
        impl $tr<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                self.$inner(&rhs).expect("prime mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// Helper used by parsers: exact rational `x / p^den`, validated.
pub(crate) fn scalar_from_signed(p: u64, prec: u32, x: &BigInt, den: u32) -> Result<PadicScalar, PadicError> {
    if den == 0 {
        Ok(PadicScalar::from_int(p, prec, x.clone()))
    } else {
        // cancel explicit powers of p first so small mantissas stay representable
        let mut x = x.clone();
        let mut den = den;
        let pb = BigInt::from(p);
        while den > 0 && !x.is_zero() && (&x % &pb).is_zero() {
            x /= &pb;
            den -= 1;
        }
        PadicScalar::from_parts(p, prec + den, den, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u64, n: u32, x: i64) -> PadicScalar {
        PadicScalar::from_i64(p, n, x)
    }

    #[test]
    fn integer_addition_embeds() {
        assert_eq!(s(2, 8, 3) + s(2, 8, 5), s(2, 8, 8));
        let x = s(3, 5, 17);
        assert_eq!(&x + &PadicScalar::zero(3, 5), x);
    }

    #[test]
    fn halves_sum_to_one() {
        let h = PadicScalar::from_parts(2, 8, 1, 1).unwrap();
        let sum = &h + &h;
        assert_eq!(sum.valuation(), Val::Exact(0));
        assert_eq!(sum.to_balanced_int(), Some(BigInt::from(1)));
        assert_eq!(sum.den_exp(), 0);
        // cancelling a p costs one digit
        assert_eq!(sum.abs_precision(), 7);
    }

    #[test]
    fn inverse_of_unit() {
        let inv = s(5, 6, 2).inv().unwrap();
        let prod = &inv * &s(5, 6, 2);
        assert!(prod.approx_eq(&s(5, 6, 1)));
        let r = inv.mantissa().clone();
        assert_eq!((r * 2u32) % BigUint::from(15625u32), BigUint::from(1u32));
    }

    #[test]
    fn inverse_of_p_has_denominator() {
        let inv = s(3, 4, 3).inv().unwrap();
        assert_eq!(inv.den_exp(), 1);
        assert_eq!(inv.mantissa(), &BigUint::from(1u32));
        assert_eq!(inv.valuation(), Val::Exact(-1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(PadicScalar::zero(2, 4).inv(), Err(PadicError::NotInvertibleToPrecision));
    }

    #[test]
    fn valuations() {
        assert_eq!(s(2, 10, 12).valuation(), Val::Exact(2));
        let x = PadicScalar::from_parts(3, 10, 2, 1).unwrap();
        assert_eq!(x.valuation(), Val::Exact(-2));
        assert_eq!(s(2, 5, 32).valuation(), Val::AtLeast(5));
    }

    #[test]
    fn prime_mismatch() {
        assert_eq!(s(2, 4, 1).try_add(&s(3, 4, 1)), Err(PadicError::PrimeMismatch(2, 3)));
    }

    #[test]
    fn denominators_beyond_precision_rejected() {
        assert!(PadicScalar::from_parts(2, 3, 4, 1).is_err());
    }

    #[test]
    fn shift_roundtrip() {
        let x = s(7, 10, 12);
        assert!(x.shift(3).shift(-3).approx_eq(&x));
        assert_eq!(x.shift(-2).valuation(), Val::Exact(-2));
    }
}
