//! Exact field elements: arbitrary-precision rationals and residues modulo a prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest modulus accepted for prime fields (10^6, so both default primes qualify).
pub const MIN_PRIME: u64 = 1_000_000;

/// The two default certification primes.
pub const DEFAULT_PRIMES: (u64, u64) = (1_000_003, 1_000_033);

/// Field over which a computation runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Prime field `F_p`; `p` must be prime and at least [`MIN_PRIME`].
    pub fn prime(p: u64) -> Result<Self> {
        if p < MIN_PRIME {
            return Err(Error::InvalidField(format!(
                "modulus {p} is below {MIN_PRIME}"
            )));
        }
        if p >= 1 << 62 {
            return Err(Error::InvalidField(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn is_rational(self) -> bool {
        matches!(self, FieldSpec::Rational)
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "mod:{p}"),
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
        if let Some(p) = s.strip_prefix("mod:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad modulus in {s:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidField(format!(
            "expected \"rational\" or \"mod:<p>\", got {s:?}"
        )))
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

/// Deterministic primality test by trial division; only used on moduli below 2^62.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= p {
        if p % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Maps a rational number into `F_p`. Fails when the denominator vanishes mod `p`.
pub(crate) fn rational_mod(v: &BigRational, p: u64) -> Result<u64> {
    let num = bigint_mod(v.numer(), p);
    let den = bigint_mod(v.denom(), p);
    if den == 0 {
        return Err(Error::NotRepresentable {
            value: v.to_string(),
            field: FieldSpec::Prime(p),
        });
    }
    Ok(mul_mod(num, inv_mod(den, p), p))
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator; residues
/// are always reduced modulo their prime. Arithmetic between elements of
/// different fields is an error (`checked_*`) or a panic (operators).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_rational(field: FieldSpec, v: &BigRational) -> Result<Scalar> {
        match field {
            FieldSpec::Rational => Ok(Scalar::Rational(v.clone())),
            FieldSpec::Prime(p) => Ok(Scalar::Residue {
                value: rational_mod(v, p)?,
                modulus: p,
            }),
        }
    }

    /// `num/den` in the given field.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        Scalar::from_rational(field, &r)
    }

    /// Parses `"num"` or `"num/den"`; for prime fields the value is reduced mod p.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar {s:?}"));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
        };
        Scalar::from_rational(field, &r)
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// True for rationals with denominator one; residues count as integers.
    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_integer(),
            Scalar::Residue { .. } => true,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    /// Re-expresses this element in `target`. Rationals map into any prime
    /// field whose modulus does not divide the denominator.
    pub fn to_field(&self, target: FieldSpec) -> Result<Scalar> {
        match (self, target) {
            (Scalar::Rational(r), _) => Scalar::from_rational(target, r),
            (Scalar::Residue { modulus, .. }, FieldSpec::Prime(p)) if *modulus == p => {
                Ok(self.clone())
            }
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: target,
            }),
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// `self += k * x`, the hot operation of every contraction.
    pub fn add_mul_assign(&mut self, k: &Scalar, x: &Scalar) {
        match (&mut *self, k, x) {
            (Scalar::Rational(acc), Scalar::Rational(k), Scalar::Rational(x)) => {
                *acc += k * x;
            }
            (
                Scalar::Residue { value, modulus },
                Scalar::Residue { value: k, modulus: pk },
                Scalar::Residue { value: x, modulus: px },
            ) if modulus == pk && modulus == px => {
                let p = *modulus as u128;
                *value = ((*value as u128 + (*k as u128 * *x as u128) % p) % p) as u64;
            }
            _ => panic!(
                "field mismatch in add_mul_assign: {} / {} / {}",
                self.field(),
                k.field(),
                x.field()
            ),
        }
    }

    /// Scales by a small integer.
    pub fn scale_i64(&self, k: i64) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r * BigInt::from(k)),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mul_mod(
                    *value,
                    (k as i128).rem_euclid(*modulus as i128) as u64,
                    *modulus,
                ),
                modulus: *modulus,
            },
        }
    }

    /// Sign of a rational value (-1, 0, 1); residues report 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Residue { value, .. } => i32::from(*value != 0),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = FieldSpec::Rational;
        let a = Scalar::from_ratio(q, 6, -4).unwrap();
        let r = a.as_rational().unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(a.to_string(), "-3/2");
    }

    #[test]
    fn residues_stay_reduced() {
        let f = FieldSpec::prime(1_000_003).unwrap();
        let a = Scalar::from_i64(f, -1);
        assert_eq!(a, Scalar::Residue { value: 1_000_002, modulus: 1_000_003 });
        let half = Scalar::from_ratio(f, 1, 2).unwrap();
        assert!((&half + &half).is_one());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Scalar::one(FieldSpec::Rational);
        let b = Scalar::one(FieldSpec::Prime(1_000_003));
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch { .. })));
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!(
            "mod:1000033".parse::<FieldSpec>().unwrap(),
            FieldSpec::Prime(1_000_033)
        );
        assert!("mod:1000001".parse::<FieldSpec>().is_err());
        assert!("mod:65537".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn default_primes_are_prime() {
        assert!(is_prime(DEFAULT_PRIMES.0));
        assert!(is_prime(DEFAULT_PRIMES.1));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let q = FieldSpec::Rational;
        for s in ["0", "-1", "7/3", "-12/5"] {
            assert_eq!(Scalar::parse(q, s).unwrap().to_string(), s);
        }
        assert!(Scalar::parse(q, "1/0").is_err());
        assert!(Scalar::parse(q, "x").is_err());
    }

    #[test]
    fn denominators_divisible_by_p_are_rejected() {
        let p = 1_000_003;
        let r = BigRational::new(BigInt::from(1), BigInt::from(p));
        assert!(Scalar::from_rational(FieldSpec::Prime(p), &r).is_err());
    }
}
