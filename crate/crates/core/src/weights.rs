//! Dominant weights of SL2 and the arithmetic the recursion is built on.
//!
//! A dominant weight is a nonnegative integer. Everything here is pure: base-`p`
//! digit splits (Steinberg's tensor product factorization), the linkage
//! congruences mod `2p`, Frobenius twists, and the shift operator `λ ∥ n`.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid weight {0:?}: expected a nonnegative decimal integer")]
    Parse(String),
    #[error("shift precondition violated: {0}")]
    PreconditionViolation(String),
}

/// The characteristic of the ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    /// Validates primality by trial division.
    pub fn new(value: u64) -> Result<Self, WeightError> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(WeightError::NotPrime(value))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// `2p`, the modulus of the linkage classes.
    pub fn linkage_modulus(self) -> u64 {
        2 * self.0
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl TryFrom<u64> for Prime {
    type Error = WeightError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Prime::new(value)
    }
}

impl FromStr for Prime {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value: u64 = s
            .trim()
            .parse()
            .map_err(|_| WeightError::Parse(s.to_string()))?;
        Prime::new(value)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0)
    }
}

/// A dominant weight, i.e. a nonnegative integer of unbounded size.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(BigUint);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `self mod m` for a machine-sized modulus.
    pub fn rem_u64(&self, m: u64) -> u64 {
        (&self.0 % m)
            .to_u64()
            .expect("remainder is below a u64 modulus")
    }

    pub fn checked_sub(&self, rhs: u64) -> Option<Weight> {
        let rhs = BigUint::from(rhs);
        if self.0 >= rhs {
            Some(Weight(&self.0 - rhs))
        } else {
            None
        }
    }

    /// Exact division by `p`, or `None` when `p` does not divide `self`.
    pub fn checked_div_exact(&self, p: Prime) -> Option<Weight> {
        let (quotient, digit) = self.0.div_rem(&BigUint::from(p.value()));
        digit.is_zero().then_some(Weight(quotient))
    }
}

impl From<u64> for Weight {
    fn from(value: u64) -> Self {
        Weight(BigUint::from(value))
    }
}

impl From<BigUint> for Weight {
    fn from(value: BigUint) -> Self {
        Weight(value)
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(WeightError::Parse(s.to_string()));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Weight)
            .ok_or_else(|| WeightError::Parse(s.to_string()))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add<u64> for &Weight {
    type Output = Weight;

    fn add(self, rhs: u64) -> Weight {
        Weight(&self.0 + rhs)
    }
}

impl Add<u64> for Weight {
    type Output = Weight;

    fn add(self, rhs: u64) -> Weight {
        Weight(self.0 + rhs)
    }
}

impl Mul<u64> for &Weight {
    type Output = Weight;

    fn mul(self, rhs: u64) -> Weight {
        Weight(&self.0 * rhs)
    }
}

/// `λ = p·λ′ + λ₀` with `0 ≤ λ₀ < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSplit {
    pub quotient: Weight,
    pub digit: u64,
}

pub fn decompose(lambda: &Weight, p: Prime) -> DigitSplit {
    let (quotient, digit) = lambda.0.div_rem(&BigUint::from(p.value()));
    DigitSplit {
        quotient: Weight(quotient),
        digit: digit.to_u64().expect("digit is below p"),
    }
}

/// Base-`p` digits, least significant first. Empty for zero.
pub fn padic_digits(lambda: &Weight, p: Prime) -> Vec<u64> {
    let mut digits = Vec::new();
    let mut rest = lambda.clone();
    while !rest.is_zero() {
        let split = decompose(&rest, p);
        digits.push(split.digit);
        rest = split.quotient;
    }
    digits
}

/// Residue classes of weights linked to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueClass {
    /// `λ ≡ 0 (mod 2p)`
    Zero,
    /// `λ ≡ −2 (mod 2p)`
    MinusTwo,
}

pub fn residue_class(lambda: &Weight, p: Prime) -> Option<ResidueClass> {
    let m = p.linkage_modulus();
    let rem = lambda.rem_u64(m);
    if rem == 0 {
        Some(ResidueClass::Zero)
    } else if rem == m - 2 {
        Some(ResidueClass::MinusTwo)
    } else {
        None
    }
}

/// Linkage: `λ + r ≡ −2 (mod 2p)` or `λ ≡ r (mod 2p)`.
pub fn is_linked(lambda: &Weight, r: &Weight, p: Prime) -> bool {
    let m = p.linkage_modulus();
    let a = lambda.rem_u64(m);
    let b = r.rem_u64(m);
    a == b || (a + b + 2).is_multiple_of(m)
}

pub fn linked_to_zero(lambda: &Weight, p: Prime) -> bool {
    residue_class(lambda, p).is_some()
}

/// The shift `λ ∥ n`, sending a weight linked to zero one Frobenius layer up.
///
/// Zero falls in the `λ ≡ 0` class. `n` is not capped here.
pub fn shift(lambda: &Weight, n: u64, p: Prime) -> Result<Weight, WeightError> {
    let class = residue_class(lambda, p).ok_or_else(|| {
        WeightError::PreconditionViolation(format!(
            "{lambda} is not linked to zero mod {}",
            2 * p.value()
        ))
    })?;
    let inner = match class {
        ResidueClass::Zero => lambda + n,
        ResidueClass::MinusTwo => lambda.checked_sub(n).ok_or_else(|| {
            WeightError::PreconditionViolation(format!("{lambda} - {n} is negative"))
        })?,
    };
    let base = &inner * p.value();
    Ok(if n % 2 == 1 {
        base + (p.value() - 2)
    } else {
        base
    })
}

pub fn frobenius_twist(lambda: &Weight, p: Prime, d: u32) -> Weight {
    Weight(&lambda.0 * BigUint::from(p.value()).pow(d))
}

/// `p^d` as a weight.
pub fn prime_power(p: Prime, d: u32) -> Weight {
    frobenius_twist(&Weight(BigUint::one()), p, d)
}
