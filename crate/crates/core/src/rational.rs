//! Exact ratios of dimensions, serialized as `"p/q"` strings.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

/// `a / b` for dimension counts; `b` must be nonzero.
pub fn ratio(a: usize, b: usize) -> Rational {
    Rational::new(a as u64, b as u64)
}

/// Always renders as `p/q`, including integers (`1/1`).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q`, an integer, or a finite decimal such as `0.1`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("`{s}` is not a nonnegative rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let num: u64 = frac.parse().map_err(|_| bad())?;
        let whole = int.checked_mul(den).and_then(|v| v.checked_add(num)).ok_or_else(bad)?;
        return Ok(Rational::new(whole, den));
    }
    Ok(Rational::from_integer(s.parse().map_err(|_| bad())?))
}

/// Lossy conversion for display only.
pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `|a - b|` for rationals over unsigned integers.
pub fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

pub(crate) mod serde_ratio {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_ratio_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_ratio).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_ratio_opt {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_ratio).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_ratio(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_strings() {
        assert_eq!(parse_ratio("1/10").unwrap(), Rational::new(1, 10));
        assert_eq!(parse_ratio("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_ratio("3").unwrap(), Rational::from_integer(3));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("-1").is_err());
        assert_eq!(format_ratio(&Rational::new(42, 40)), "21/20");
        assert_eq!(format_ratio(&Rational::from_integer(1)), "1/1");
    }
}
