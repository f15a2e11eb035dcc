//! Exact and log-space combinatorial primitives.
//!
//! Multiplicities are carried in two forms: an unbounded integer
//! ([`ExactNat`]) when exact equality matters, and a natural logarithm
//! ([`LogValue`]) once the integers grow to thousands of digits.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `n` whose factorial is evaluated as an exact product before
/// taking the logarithm. `20!` is the largest factorial that fits in a `u64`.
const EXACT_FACTORIAL_CUTOFF: u64 = 20;

/// Arbitrary-precision nonnegative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactNat(BigUint);

impl ExactNat {
    pub fn zero() -> Self {
        ExactNat(BigUint::zero())
    }

    pub fn one() -> Self {
        ExactNat(BigUint::one())
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

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Natural logarithm, accurate to about one ulp of the result.
    /// Returns `-inf` for zero.
    pub fn ln(&self) -> f64 {
        let bits = self.0.bits();
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        let shift = bits.saturating_sub(64);
        let top = (&self.0 >> shift).to_u64().expect("top 64 bits fit in u64");
        (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl From<u64> for ExactNat {
    fn from(v: u64) -> Self {
        ExactNat(BigUint::from(v))
    }
}

impl From<BigUint> for ExactNat {
    fn from(v: BigUint) -> Self {
        ExactNat(v)
    }
}

impl fmt::Display for ExactNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for ExactNat {
    type Output = ExactNat;
    fn add(self, rhs: ExactNat) -> ExactNat {
        ExactNat(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a ExactNat> for &'a ExactNat {
    type Output = ExactNat;
    fn add(self, rhs: &ExactNat) -> ExactNat {
        ExactNat(&self.0 + &rhs.0)
    }
}

impl Mul for ExactNat {
    type Output = ExactNat;
    fn mul(self, rhs: ExactNat) -> ExactNat {
        ExactNat(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a ExactNat> for &'a ExactNat {
    type Output = ExactNat;
    fn mul(self, rhs: &ExactNat) -> ExactNat {
        ExactNat(&self.0 * &rhs.0)
    }
}

impl Sum for ExactNat {
    fn sum<I: Iterator<Item = ExactNat>>(iter: I) -> Self {
        iter.fold(ExactNat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactNat> for ExactNat {
    fn sum<I: Iterator<Item = &'a ExactNat>>(iter: I) -> Self {
        ExactNat(iter.fold(BigUint::zero(), |acc, x| acc + &x.0))
    }
}

impl Product for ExactNat {
    fn product<I: Iterator<Item = ExactNat>>(iter: I) -> Self {
        iter.fold(ExactNat::one(), |acc, x| acc * x)
    }
}

impl PartialEq<u64> for ExactNat {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

/// Natural logarithm of a positive quantity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub fn new(ln_value: f64) -> Self {
        LogValue(ln_value)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}

impl Add for LogValue {
    type Output = LogValue;
    /// Adding logs multiplies the underlying quantities.
    fn add(self, rhs: LogValue) -> LogValue {
        LogValue(self.0 + rhs.0)
    }
}

/// `n` choose `k`, exactly.
pub fn binomial(n: u64, k: u64) -> Result<ExactNat> {
    if k > n {
        return Err(Error::ChooseTooMany { n, k });
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc holds C(n - k + i, i) after step i, so every division is exact.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    Ok(ExactNat(acc))
}

/// `n!`, exactly.
pub fn factorial(n: u64) -> ExactNat {
    ExactNat((2..=n).fold(BigUint::one(), |acc, i| acc * i))
}

/// `ln(n!)`.
///
/// Below the cutoff the factorial is formed exactly in a `u64`; above it the
/// Stirling series is summed through the `n^-7` term, whose truncation error
/// at `n = 21` is already below `1e-15`.
pub fn ln_factorial(n: u64) -> LogValue {
    if n <= EXACT_FACTORIAL_CUTOFF {
        let f: u64 = (2..=n).product();
        return LogValue((f as f64).ln());
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    let half_ln_two_pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    LogValue(x * x.ln() - x + 0.5 * x.ln() + half_ln_two_pi + series)
}

/// `ln(n choose k)`.
pub fn ln_binomial(n: u64, k: u64) -> Result<LogValue> {
    if k > n {
        return Err(Error::ChooseTooMany { n, k });
    }
    if k == 0 || k == n {
        return Ok(LogValue(0.0));
    }
    Ok(LogValue(
        ln_factorial(n).get() - ln_factorial(k).get() - ln_factorial(n - k).get(),
    ))
}
