use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Arbitrary-precision non-negative integer.
pub type Nat = BigUint;

/// Reduced fraction with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

/// Builds `num/den` in normal form.
pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<ExactRational> {
    ExactRational::new(num, den)
}

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_nats(num: &Nat, den: &Nat) -> Result<Self> {
        Self::new(BigInt::from_biguint(Sign::Plus, num.clone()), BigInt::from_biguint(Sign::Plus, den.clone()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` fractional digits, rounding half to even.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let num = self.numer().abs() * &scale;
        let den = self.denom();
        let (mut q, r) = num.div_rem(den);
        let twice = &r * 2u32;
        if twice > *den || (twice == *den && q.is_odd()) {
            q += 1u32;
        }
        let sign = if self.0.is_negative() && !q.is_zero() { "-" } else { "" };
        let (int, frac) = q.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_op!(Add, add);
forward_op!(Sub, sub);
forward_op!(Mul, mul);

impl Div for ExactRational {
    type Output = ExactRational;
    /// Panics on a zero divisor, like integer division.
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.0.is_zero(), "division by zero rational");
        ExactRational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &'a ExactRational) -> ExactRational {
        assert!(!rhs.0.is_zero(), "division by zero rational");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        Self::integer(n)
    }
}

/// Ascending prime-power decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Multiplies the prime powers back out.
    pub fn product(&self) -> Nat {
        self.0.iter().fold(Nat::one(), |acc, &(p, a)| acc * Nat::from(p).pow(a))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Trial-division factorization under the default bound.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_with(n, &Limits::default())
}

pub fn factorize_with(n: u64, limits: &Limits) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    if n > limits.factor_bound {
        return Err(Error::Resource(format!("{n} exceeds the factorization bound {}", limits.factor_bound)));
    }
    let mut rest = n;
    let mut pairs = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut a = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                a += 1;
            }
            pairs.push((d, a));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization(pairs))
}

/// Small-integer convenience used by group code, where orders fit in `u64`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).map(|f| f.primes().collect()).unwrap_or_default()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Exponent of `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `Some((p, e))` when `n = p^e` with `e ≥ 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n).ok()?;
    match f.pairs() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(60).unwrap().pairs(), &[(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factorize(903).unwrap().pairs(), &[(3, 1), (7, 1), (43, 1)]);
        assert!(factorize(0).is_err());
        assert!(factorize(2_000_000_000_000).unwrap_err().is_resource());
    }

    #[test]
    fn rational_normal_form() {
        let r = rational(38, 86).unwrap();
        assert_eq!((r.numer().clone(), r.denom().clone()), (19.into(), 43.into()));
        assert_eq!(rational(7, 11).unwrap().to_string(), "7/11");
        assert_eq!(rational(-3, -7).unwrap(), rational(3, 7).unwrap());
        assert_eq!(rational(3, -7).unwrap().denom(), &BigInt::from(7));
        assert_eq!(rational(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn ordering_is_exact() {
        let a = rational(19, 43).unwrap();
        let b = rational(31, 77).unwrap();
        assert!(b < a);
        assert!(rational(391, 903).unwrap() < a);
        assert_eq!(rational(19 * 21, 43 * 21).unwrap(), a);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational(19, 43).unwrap().to_decimal(6), "0.441860");
        assert_eq!(rational(1, 8).unwrap().to_decimal(2), "0.12");
        assert_eq!(rational(3, 8).unwrap().to_decimal(2), "0.38");
        assert_eq!(rational(-1, 3).unwrap().to_decimal(3), "-0.333");
        assert_eq!(ExactRational::one().to_decimal(6), "1.000000");
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    proptest! {
        #[test]
        fn factorize_round_trips(n in 1u64..=1_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.product(), Nat::from(n));
            let ps: Vec<u64> = f.primes().collect();
            prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(ps.iter().all(|&p| is_prime(p)));
        }

        #[test]
        fn arithmetic_matches_cleared_denominators(
            a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000
        ) {
            let x = rational(a, b).unwrap();
            let y = rational(c, d).unwrap();
            prop_assert_eq!(&x + &y, rational(a * d + c * b, b * d).unwrap());
            prop_assert_eq!(&x - &y, rational(a * d - c * b, b * d).unwrap());
            prop_assert_eq!(&x * &y, rational(a * c, b * d).unwrap());
            prop_assert_eq!(x < y, a * d < c * b);
            prop_assert_eq!(x == y, a * d == c * b);
        }
    }
}
