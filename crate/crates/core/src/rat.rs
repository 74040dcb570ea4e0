//! Arbitrary-precision rationals and small helpers shared across the crate.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The exact scalar type used everywhere: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// True if the (reduced) denominator of `x` is a power of `p`, with
/// `p^0 = 1` allowed.
pub fn has_p_power_denominator(x: &Rat, p: u64) -> bool {
    let mut d = x.denom().clone();
    if d.is_negative() {
        d = -d;
    }
    let p = BigInt::from(p);
    while d > BigInt::one() {
        if (&d % &p).is_zero() {
            d /= &p;
        } else {
            return false;
        }
    }
    true
}

/// Exact `x / p^k`.
pub fn div_p_pow(x: &Rat, p: u64, k: u32) -> Rat {
    let mut scale = BigInt::one();
    let p = BigInt::from(p);
    for _ in 0..k {
        scale *= &p;
    }
    x / Rat::from_integer(scale)
}

/// Exact `x * p^k`.
pub fn mul_p_pow(x: &Rat, p: u64, k: u32) -> Rat {
    let mut scale = BigInt::one();
    let p = BigInt::from(p);
    for _ in 0..k {
        scale *= &p;
    }
    x * Rat::from_integer(scale)
}

/// Renders `x` as `"a"` or `"a/b"`, the exact form used by serializers.
pub fn to_fraction_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = x.numer().to_string();
        s.push('/');
        s.push_str(&x.denom().to_string());
        s
    }
}

/// Parses `"a"` or `"a/b"` (ASCII, optional leading `-`). Returns `None`
/// on malformed input or zero denominator.
pub fn parse_fraction(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_power_denominators() {
        assert!(has_p_power_denominator(&rat(3, 8), 2));
        assert!(has_p_power_denominator(&rat(5, 1), 2));
        assert!(has_p_power_denominator(&rat(-1, 27), 3));
        assert!(!has_p_power_denominator(&rat(1, 6), 2));
        assert!(!has_p_power_denominator(&rat(1, 10), 5));
    }

    #[test]
    fn fraction_round_trip() {
        for s in ["3/4", "-7/8", "5", "0", "-12"] {
            let x = parse_fraction(s).unwrap();
            assert_eq!(to_fraction_string(&x), s);
        }
        assert_eq!(parse_fraction("2/4").unwrap(), rat(1, 2));
        assert!(parse_fraction("1/0").is_none());
        assert!(parse_fraction("a/b").is_none());
    }
}
