//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

/// Scalar type used everywhere outside the matrix lab: arbitrary-precision rationals.
pub type Rat = BigRational;

/// Builds a rational from an integer pair. Panics on zero denominator; test/fixture helper.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses the canonical text form: either `"p"` or `"p/q"` with decimal integers.
///
/// Rejects zero denominators instead of panicking like `Ratio::new` would.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    let (numer, denom) = match s.split_once('/') {
        None => (s, "1"),
        Some((n, d)) => (n, d),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| RatParseError::BadInteger(s.to_string()))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| RatParseError::BadInteger(s.to_string()))?;
    if denom.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(numer, denom))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    BadInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Canonical rendering: reduced form, `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Squares a rational.
pub fn square(r: &Rat) -> Rat {
    r * r
}

/// Raises a rational to a nonnegative integer power.
pub fn pow(r: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = r.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// True when strictly positive.
pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Serde adapter: rationals serialize as canonical strings.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction_forms() {
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("10/81").unwrap(), rat(10, 81));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat(" 2/4 ").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(matches!(
            parse_rat("1/0"),
            Err(RatParseError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_rat(""), Err(RatParseError::Empty)));
        assert!(matches!(parse_rat("a/b"), Err(RatParseError::BadInteger(_))));
        assert!(matches!(parse_rat("1.5"), Err(RatParseError::BadInteger(_))));
    }

    #[test]
    fn formats_reduced_canonical_form() {
        assert_eq!(format_rat(&rat(4, 1)), "4");
        assert_eq!(format_rat(&rat(10, 81)), "10/81");
        assert_eq!(format_rat(&rat(2, 4)), "1/2");
        assert_eq!(format_rat(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let r = rat(3, 7);
        let mut expect = rat_int(1);
        for n in 0..8u32 {
            assert_eq!(pow(&r, n), expect);
            expect *= &r;
        }
    }
}
