//! Exact rationals as used in every interface: `"p/q"` strings, never floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad(s))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(t.parse::<BigInt>().map_err(|_| bad(s))?),
    };
    Ok(parsed)
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("not a rational: {s:?}"))
}

/// Reduced `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn from_ints(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && r <= &Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("2/4").unwrap(), from_ints(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), from_ints(3, 1));
        assert_eq!(parse_rational("-1/3").unwrap(), from_ints(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(format_rational(&from_ints(10, 20)), "1/2");
        assert_eq!(format_rational(&from_ints(4, 2)), "2");
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    proptest! {
        #[test]
        fn format_then_parse_is_identity(p in -10_000i64..10_000, q in 1i64..10_000) {
            let r = from_ints(p, q);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}
