//! Exact rational scalars with p-adic valuation.
//!
//! The base field is ℚ viewed inside ℚ_p for a fixed prime p; every scalar in
//! the crate is a [`Rat`] and never a float. The uniformiser is p itself.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Int = BigInt;
/// Arbitrary-precision rational. Normalised: positive denominator, coprime
/// numerator/denominator, zero stored as 0/1.
pub type Rat = num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for small integer constants.
pub fn rint(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// The p-adic valuation of a scalar: an integer, or +∞ exactly for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// True iff the valuation is ≥ n (so +∞ passes every bound).
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Trial-division primality test; p is a configuration value, always small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn int_vp(n: &Int, p: &Int) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let mut v = 0i64;
    let mut cur = n.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = q;
    }
}

/// p-adic valuation of a rational: vp(a/b) = vp(a) − vp(b), +∞ for zero.
///
/// Satisfies vp(xy) = vp(x) + vp(y) and vp(x + y) ≥ min(vp(x), vp(y)).
pub fn vp(q: &Rat, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let p = Int::from(p);
    let num = int_vp(q.numer(), &p).expect("nonzero numerator");
    let den = int_vp(q.denom(), &p).expect("nonzero denominator");
    Valuation::Finite(num - den)
}

/// Membership in ℤ_p ∩ ℚ: true iff vp(q) ≥ 0.
pub fn is_integral(q: &Rat, p: u64) -> bool {
    vp(q, p).at_least(0)
}

/// vp(c!) by Legendre's formula.
pub fn vp_factorial(c: u64, p: u64) -> u64 {
    let mut total = 0u64;
    let mut pow = p;
    while pow <= c {
        total += c / pow;
        match pow.checked_mul(p) {
            Some(next) => pow = next,
            None => break,
        }
    }
    total
}

/// p^k as a rational, for signed k.
pub fn p_power(p: u64, k: i64) -> Rat {
    let base = Int::from(p);
    if k >= 0 {
        Rat::from_integer(base.pow(k as u32))
    } else {
        Rat::new(Int::one(), base.pow((-k) as u32))
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// n! as a big integer.
pub fn factorial(n: u32) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

pub fn to_i64(v: &Int) -> i64 {
    v.to_i64().expect("valuation fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_basic() {
        assert_eq!(vp(&rint(12), 2), Valuation::Finite(2));
        assert_eq!(vp(&rint(0), 5), Valuation::Infinite);
        assert_eq!(vp(&rat(3, 4), 2), Valuation::Finite(-2));
    }

    #[test]
    fn integrality() {
        assert!(is_integral(&rat(7, 3), 2));
        assert!(!is_integral(&rat(1, 2), 2));
        assert!(is_integral(&rint(0), 3));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(vp_factorial(2, 2), 1);
        assert_eq!(vp_factorial(2, 5), 0);
        assert_eq!(vp_factorial(10, 2), 8);
        assert_eq!(vp_factorial(6, 3), 2);
    }

    #[test]
    fn valuation_order() {
        assert!(Valuation::Infinite > Valuation::Finite(1000));
        assert_eq!(
            Valuation::Finite(1) + Valuation::Infinite,
            Valuation::Infinite
        );
    }

    #[test]
    fn rational_strings_round_trip() {
        // "a/b" or "a" is the wire format everywhere.
        let q = rat(-3, 4);
        assert_eq!(q.to_string(), "-3/4");
        assert_eq!(q.to_string().parse::<Rat>().unwrap(), q);
        assert_eq!(rint(5).to_string(), "5");
    }
}
