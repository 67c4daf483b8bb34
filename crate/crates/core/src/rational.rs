//! Exact rational helpers and the `"p/q"` text form used in every artifact.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for payoffs, weights and bundles.
pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Formats `r` as `"p"` when integral, `"p/q"` otherwise.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"0.5"`.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) || fraction.len() > 15 {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(fraction.len() as u32);
        let frac_part: i64 = fraction.parse().map_err(|_| bad())?;
        let magnitude = Rational::from_integer(whole.abs()) + Rational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    text.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// `r * n` is a non-negative integer.
pub fn on_grid(r: &Rational, n: i64) -> bool {
    !r.is_negative() && (*r * n).is_integer()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    r.is_zero() || r.is_positive()
}

pub(crate) mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items.iter().map(|t| parse(t).map_err(serde::de::Error::custom)).collect()
    }
}
