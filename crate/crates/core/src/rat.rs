//! Exact rational arithmetic. Every bound and LP value in this crate is a
//! [`Rat`]; floating point is never used for anything that ends up in a result.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator by `num`.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rint<T: Into<i64>>(n: T) -> Rat {
    Rat::from_integer(BigInt::from(n.into()))
}

/// Rational from a numerator/denominator pair. Panics on zero denominator.
pub fn rfrac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rzero() -> Rat {
    Rat::zero()
}

pub fn rone() -> Rat {
    Rat::one()
}

/// True iff `r` is 0, 1/2 or 1.
pub fn is_half_integral(r: &Rat) -> bool {
    r.is_zero() || r.is_one() || *r == rfrac(1, 2)
}

/// Parses "3", "-3", "3/4" or a plain decimal like "2.75" into an exact value.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = num::pow::pow(BigInt::from(10), frac.len());
        let frac_num: BigInt = frac.parse().ok()?;
        let abs = Rat::from_integer(int.abs()) + Rat::new(frac_num, scale);
        return Some(if neg { -abs } else { abs });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Least common multiple of two positive integers.
pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    num::integer::lcm(a.clone(), b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("5/2").unwrap(), rfrac(5, 2));
        assert_eq!(parse_rat("-7").unwrap(), rint(-7));
        assert_eq!(parse_rat("2.75").unwrap(), rfrac(11, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), rfrac(-1, 2));
        assert_eq!(parse_rat(".5"), Some(rfrac(1, 2)));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("abc").is_none());
    }

    #[test]
    fn half_integrality() {
        assert!(is_half_integral(&rzero()));
        assert!(is_half_integral(&rfrac(2, 4)));
        assert!(is_half_integral(&rone()));
        assert!(!is_half_integral(&rfrac(1, 3)));
    }

    #[test]
    fn display_is_num_slash_den() {
        assert_eq!(rfrac(5, 2).to_string(), "5/2");
        assert_eq!(rfrac(4, 2).to_string(), "2");
    }
}
