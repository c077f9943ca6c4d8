//! Small helpers around arbitrary-precision rationals.
//!
//! `num_rational::BigRational` already normalizes to lowest terms with a
//! positive denominator on construction, which is exactly the canonical
//! representation used throughout this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"a"` when the denominator is 1, else `"a/b"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
        Some((num, den)) => {
            let n = num.trim().parse::<BigInt>().ok()?;
            let d = den.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// v_p of a nonzero integer; `None` for zero.
pub fn int_p_valuation(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut cur = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, &p);
        if r.is_zero() {
            v += 1;
            cur = q;
        } else {
            return Some(v);
        }
    }
}

/// v_p of a nonzero rational (may be negative); `None` for zero.
pub fn rat_p_valuation(x: &Rat, p: u64) -> Option<i64> {
    let vn = int_p_valuation(x.numer(), p)?;
    let vd = int_p_valuation(x.denom(), p).expect("denominator is nonzero");
    Some(vn as i64 - vd as i64)
}

/// True when the denominator is 1.
pub fn is_integral(x: &Rat) -> bool {
    x.denom().is_one()
}

/// True when p does not divide the (reduced) denominator.
pub fn is_p_integral(x: &Rat, p: u64) -> bool {
    match rat_p_valuation(x, p) {
        None => true,
        Some(v) => v >= 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-7", "3/4", "-22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // non-canonical input normalizes
        assert_eq!(format_rat(&parse_rat("4/8").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rat(&parse_rat("9/3").unwrap()), "3");
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn p_valuations() {
        assert_eq!(int_p_valuation(&BigInt::from(12), 2), Some(2));
        assert_eq!(int_p_valuation(&BigInt::from(12), 3), Some(1));
        assert_eq!(int_p_valuation(&BigInt::from(-8), 2), Some(3));
        assert_eq!(int_p_valuation(&BigInt::from(0), 2), None);
        assert_eq!(rat_p_valuation(&rat(4, 9), 3), Some(-2));
        assert_eq!(rat_p_valuation(&rat(18, 5), 3), Some(2));
        assert!(is_p_integral(&rat(1, 2), 3));
        assert!(!is_p_integral(&rat(1, 6), 3));
    }
}
