//! Exact coefficient fields.
//!
//! Two concrete fields are provided: prime fields `F_p` (with `p` fixed at
//! compile time, default 32003) and the rationals. All engine code is
//! generic over [`Field`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Which coefficient field a computation ran over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Prime(u32),
    Rational,
}

impl Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Prime(p) => write!(f, "F{p}"),
            FieldTag::Rational => write!(f, "QQ"),
        }
    }
}

pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn tag() -> FieldTag;
    /// A uniformly random nonzero element from a small range.
    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// Whether the printed form needs a leading minus sign.
    fn is_negative_repr(&self) -> bool {
        false
    }
}

/// Element of the prime field with `P` elements, stored in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

pub type F32003 = Fp<32003>;

impl<const P: u32> Fp<P> {
    pub const MODULUS: u32 = P;

    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u64;
        let mut acc = 1u64;
        let p = P as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc as u32)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<const P: u32> Display for Fp<P> {
    /// Symmetric representative, so `-1` prints as `-1` rather than `P-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > P / 2 {
            write!(f, "-{}", P - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<const P: u32> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn from_bigint(n: &BigInt) -> Self {
        let p = BigInt::from(P);
        let r = ((n % &p) + &p) % &p;
        Fp(r.to_u32().expect("residue fits in u32"))
    }
    fn tag() -> FieldTag {
        FieldTag::Prime(P)
    }
    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(1..P))
    }
    fn is_negative_repr(&self) -> bool {
        self.0 > P / 2
    }
}

/// Arbitrary-precision rational, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Rational(self.0 + o.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Rational(self.0 - o.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Rational(self.0 * o.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_bigint(n: &BigInt) -> Self {
        Rational(BigRational::from_integer(n.clone()))
    }
    fn tag() -> FieldTag {
        FieldTag::Rational
    }
    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v = rng.gen_range(-9i64..=9);
        if v == 0 {
            v = 1;
        }
        Rational::from_i64(v)
    }
    fn is_negative_repr(&self) -> bool {
        self.0.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn axioms<K: Field>(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let a = K::sample_nonzero(&mut rng);
            let b = K::sample_nonzero(&mut rng);
            let c = K::sample_nonzero(&mut rng);
            assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c.clone()
            );
            assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            assert!((a.clone() * a.inv().unwrap()).is_one());
            assert!((a.clone() + (-a.clone())).is_zero());
            assert_eq!(a.clone() - b.clone(), a.clone() + (-b.clone()));
        }
        assert!(K::zero().inv().is_none());
    }

    #[test]
    fn prime_field_axioms() {
        axioms::<F32003>(7);
        axioms::<Fp<7>>(8);
    }

    #[test]
    fn rational_axioms() {
        axioms::<Rational>(9);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(F32003::new(-1).value(), 32002);
        assert_eq!(F32003::new(32003 * 5 + 2).value(), 2);
        assert_eq!(format!("{}", F32003::new(-3)), "-3");
        let r = Rational::new(6, -4);
        assert_eq!(format!("{r}"), "-3/2");
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(F32003::from_bigint(&BigInt::from(-32004)), F32003::new(-1));
    }
}
