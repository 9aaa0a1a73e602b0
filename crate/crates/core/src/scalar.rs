//! Exact arithmetic in the quadratic field Q(v) with v^2 = q, q prime.
//!
//! Every coefficient in the workbench is a [`SqrtScalar`]. Since q is prime,
//! `{1, v}` is a Q-basis and equality is componentwise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `a + b*v` with `v^2 = q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtScalar {
    a: Rational,
    b: Rational,
    q: u64,
}

impl SqrtScalar {
    pub fn new(a: Rational, b: Rational, q: u64) -> Self {
        SqrtScalar { a, b, q }
    }

    pub fn zero(q: u64) -> Self {
        Self::new(Rational::zero(), Rational::zero(), q)
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(1, q)
    }

    pub fn from_int(n: i64, q: u64) -> Self {
        Self::new(Rational::from_integer(BigInt::from(n)), Rational::zero(), q)
    }

    pub fn from_bigint(n: BigInt, q: u64) -> Self {
        Self::new(Rational::from_integer(n), Rational::zero(), q)
    }

    pub fn from_rational(r: Rational, q: u64) -> Self {
        Self::new(r, Rational::zero(), q)
    }

    /// The generator `v` itself.
    pub fn v(q: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), q)
    }

    /// `v^n` for any integer n: `q^(n/2)` for even n, `q^((n-1)/2) * v` for odd n.
    pub fn vpow(n: i64, q: u64) -> Self {
        let half = n.div_euclid(2);
        let odd = n.rem_euclid(2) == 1;
        let qq = Rational::from_integer(BigInt::from(q));
        let base = if half >= 0 {
            num_traits::pow(qq, half as usize)
        } else {
            num_traits::pow(qq.recip(), (-half) as usize)
        };
        if odd {
            Self::new(Rational::zero(), base, q)
        } else {
            Self::new(base, Rational::zero(), q)
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn v_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The value as a rational, if the v-part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch { left: self.q, right: other.q });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, self.q))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.a - &other.a, &self.b - &other.b, self.q))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let qq = Rational::from_integer(BigInt::from(self.q));
        let a = &self.a * &other.a + &self.b * &other.b * qq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(a, b, self.q))
    }

    /// Division through the conjugate: `(a+bv)^{-1} = (a-bv)/(a^2-qb^2)`.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let qq = Rational::from_integer(BigInt::from(self.q));
        let norm = &self.a * &self.a - &self.b * &self.b * qq;
        // q prime, so v is irrational and the norm of a nonzero element is nonzero.
        debug_assert!(!norm.is_zero());
        Ok(Self::new(&self.a / &norm, -&self.b / &norm, self.q))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self::new(&self.a * r, &self.b * r, self.q)
    }
}

impl Add for &SqrtScalar {
    type Output = SqrtScalar;
    fn add(self, rhs: &SqrtScalar) -> SqrtScalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &SqrtScalar {
    type Output = SqrtScalar;
    fn sub(self, rhs: &SqrtScalar) -> SqrtScalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &SqrtScalar {
    type Output = SqrtScalar;
    fn mul(self, rhs: &SqrtScalar) -> SqrtScalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Div for &SqrtScalar {
    type Output = SqrtScalar;
    fn div(self, rhs: &SqrtScalar) -> SqrtScalar {
        self.checked_div(rhs).expect("scalar division failed")
    }
}

impl Neg for &SqrtScalar {
    type Output = SqrtScalar;
    fn neg(self) -> SqrtScalar {
        SqrtScalar::new(-&self.a, -&self.b, self.q)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SqrtScalar {
            type Output = SqrtScalar;
            fn $m(self, rhs: SqrtScalar) -> SqrtScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for SqrtScalar {
    type Output = SqrtScalar;
    fn neg(self) -> SqrtScalar {
        -&self
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `v`-term rendering for a rational coefficient `b`, e.g. `v`, `-v`, `3/2*v`.
fn fmt_v_term(b: &Rational) -> String {
    if b.is_one() {
        "v".to_string()
    } else if (-b).is_one() {
        "-v".to_string()
    } else {
        format!("{}*v", fmt_rational(b))
    }
}

impl fmt::Display for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => write!(f, "{}", fmt_v_term(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}", fmt_rational(&self.a), fmt_v_term(&-&self.b))
                } else {
                    write!(f, "{} + {}", fmt_rational(&self.a), fmt_v_term(&self.b))
                }
            }
        }
    }
}

impl fmt::Debug for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [q={}]", self, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(a: i64, b: i64, q: u64) -> SqrtScalar {
        SqrtScalar::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()), q)
    }

    #[test]
    fn conjugate_product() {
        // (1 + v)(1 - v) = 1 - q
        assert_eq!(&s(1, 1, 2) * &s(1, -1, 2), SqrtScalar::from_int(-1, 2));
    }

    #[test]
    fn v_squared_is_q() {
        assert_eq!(&SqrtScalar::v(2) * &SqrtScalar::v(2), SqrtScalar::from_int(2, 2));
        assert_eq!(SqrtScalar::vpow(2, 3), SqrtScalar::from_int(3, 3));
        assert_eq!(SqrtScalar::vpow(0, 5), SqrtScalar::one(5));
    }

    #[test]
    fn inverse_of_v() {
        let inv = SqrtScalar::vpow(-1, 2);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(inv, SqrtScalar::new(Rational::zero(), half, 2));
        assert!((&inv * &SqrtScalar::v(2)).is_one());
    }

    #[test]
    fn additive_identity() {
        let x = s(3, -7, 5);
        assert_eq!(&x + &SqrtScalar::zero(5), x);
    }

    #[test]
    fn errors() {
        assert_eq!(s(1, 0, 2).checked_div(&SqrtScalar::zero(2)), Err(Error::DivisionByZero));
        assert!(matches!(s(1, 0, 2).checked_add(&s(1, 0, 3)), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn rendering() {
        assert_eq!(s(0, 0, 2).to_string(), "0");
        assert_eq!(s(0, 1, 2).to_string(), "v");
        assert_eq!(s(1, -2, 2).to_string(), "1 - 2*v");
        let r = SqrtScalar::from_rational(Rational::new((-3).into(), 4.into()), 3);
        assert_eq!(r.to_string(), "-3/4");
    }

    fn arb(q: u64) -> impl Strategy<Value = SqrtScalar> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(move |(an, ad, bn, bd)| {
            SqrtScalar::new(
                Rational::new(an.into(), ad.into()),
                Rational::new(bn.into(), bd.into()),
                q,
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb(3), y in arb(3), z in arb(3)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn vpow_is_a_homomorphism(m in -12i64..12, n in -12i64..12, qi in 0usize..3) {
            let q = [2u64, 3, 5][qi];
            prop_assert_eq!(&SqrtScalar::vpow(m, q) * &SqrtScalar::vpow(n, q), SqrtScalar::vpow(m + n, q));
        }
    }
}
