//! Exact scalar fields: arbitrary-precision rationals and prime fields `GF(p)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact field usable as the coefficient ring of every form and matrix in the crate.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// `None` when the denominator vanishes in the field.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        Self::from_bigint(den).inv().map(|d| Self::from_bigint(num) * d)
    }

    fn inv(&self) -> Option<Self>;

    /// 0 for the rationals.
    fn characteristic() -> u64;

    fn spec() -> FieldSpec {
        match Self::characteristic() {
            0 => FieldSpec::Rational,
            p => FieldSpec::Prime(p),
        }
    }

    /// Signed numerator and positive denominator used for printing.
    /// Prime-field elements print as their representative in `(-p/2, p/2]`.
    fn to_fraction(&self) -> (BigInt, BigInt);
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn characteristic() -> u64 {
        0
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Element of the prime field `GF(P)`, stored as its canonical residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const VALID: () = assert!(is_prime(P) && P < (1 << 62), "modulus must be a prime below 2^62");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > P / 2 {
            write!(f, "-{}", P - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in GF(p)")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Self::new(1)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64) as u64;
        Self::new(r)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Self::new(r.to_u64().expect("residue fits in u64"))
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn characteristic() -> u64 {
        P
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        let v = if self.0 > P / 2 {
            -BigInt::from(P - self.0)
        } else {
            BigInt::from(self.0)
        };
        (v, BigInt::one())
    }
}

/// Writes a field element as `n` or `n/m`.
pub fn format_scalar<F: Field>(c: &F) -> String {
    let (n, d) = c.to_fraction();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{}/{}", n, d)
    }
}

pub(crate) fn is_negative<F: Field>(c: &F) -> bool {
    c.to_fraction().0.is_negative()
}

/// Runtime choice of coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

/// Primes for which a prime field is compiled in.
pub const SUPPORTED_PRIMES: &[u64] = &[
    2, 3, 5, 7, 11, 13, 101, 1009, 10007, 32003, 65521, 1000003, 2147483647,
];

impl FieldSpec {
    pub const DEFAULT_PRIME: FieldSpec = FieldSpec::Prime(32003);

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            FieldSpec::Rational => Ok(self),
            FieldSpec::Prime(p) if !is_prime(p) => {
                Err(Error::UnsupportedField(format!("{p} is not prime")))
            }
            FieldSpec::Prime(p) if !SUPPORTED_PRIMES.contains(&p) => {
                Err(Error::UnsupportedField(format!(
                    "prime {p} is not compiled in; available: {SUPPORTED_PRIMES:?}"
                )))
            }
            _ => Ok(self),
        }
    }

    /// Runs `task` monomorphized at the field this spec names.
    pub fn dispatch<T: FieldTask>(self, task: T) -> Result<T::Output> {
        macro_rules! primes {
            ($p:expr, $($q:literal),*) => {
                match $p {
                    $($q => Ok(task.run::<Fp<$q>>()),)*
                    _ => Err(Error::UnsupportedField(format!(
                        "prime {} is not compiled in; available: {:?}", $p, SUPPORTED_PRIMES
                    ))),
                }
            };
        }
        match self.validate()? {
            FieldSpec::Rational => Ok(task.run::<BigRational>()),
            FieldSpec::Prime(p) => primes!(
                p, 2, 3, 5, 7, 11, 13, 101, 1009, 10007, 32003, 65521, 1000003, 2147483647
            ),
        }
    }
}

/// A computation generic over the coefficient field, selected at runtime by [`FieldSpec::dispatch`].
pub trait FieldTask {
    type Output;
    fn run<F: Field>(self) -> Self::Output;
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        let p = s
            .strip_prefix("prime:")
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::parse(0, format!("expected `rational` or `prime:<p>`, got `{s}`")))?;
        FieldSpec::Prime(p).validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn prime_field_arithmetic() {
        let a = F7::from_i64(3);
        let b = F7::from_i64(-2);
        assert_eq!(a + b, F7::from_i64(1));
        assert_eq!(a * b, F7::from_i64(1));
        assert_eq!(a.inv().unwrap() * a, F7::one());
        assert_eq!(F7::zero().inv(), None);
        assert_eq!(b.to_string(), "-2");
        assert_eq!(F7::from_bigint(&BigInt::from(-15)), F7::from_i64(6));
    }

    #[test]
    fn rational_fraction_round_trip() {
        let q = BigRational::from_fraction(&BigInt::from(-3), &BigInt::from(6)).unwrap();
        assert_eq!(format_scalar(&q), "-1/2");
        assert_eq!(F7::from_fraction(&BigInt::from(1), &BigInt::from(7)), None);
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("prime:32003".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(32003));
        assert!("prime:32004".parse::<FieldSpec>().is_err());
        assert!("prime:17".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
    }

    struct Char;
    impl FieldTask for Char {
        type Output = u64;
        fn run<F: Field>(self) -> u64 {
            F::characteristic()
        }
    }

    #[test]
    fn dispatch_selects_field() {
        assert_eq!(FieldSpec::Prime(101).dispatch(Char).unwrap(), 101);
        assert_eq!(FieldSpec::Rational.dispatch(Char).unwrap(), 0);
    }
}
