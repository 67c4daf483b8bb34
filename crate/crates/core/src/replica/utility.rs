//! Exact ordinal comparison of commodity bundles under the shared utility.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A bundle of the two commodities.
pub type Bundle = [Rational; 2];

/// The utility shared by every participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Utility {
    /// CES with exponent 1/2: `u(a) = (√a₁ + √a₂)²`.
    CesHalf,
}

impl Utility {
    /// From the config fields `utility` and `rho`.
    pub fn from_config(name: &str, rho: &str) -> Result<Self> {
        if name != "ces" {
            return Err(Error::invalid(format!("unknown utility {name:?} (expected \"ces\")")));
        }
        let rho = rational::parse(rho)?;
        if rho != Rational::new(1, 2) {
            return Err(Error::unsupported(format!(
                "CES exponent {} has no exact comparison; only 1/2 is supported",
                rational::format(&rho)
            )));
        }
        Ok(Utility::CesHalf)
    }

    pub fn rho(self) -> Rational {
        match self {
            Utility::CesHalf => Rational::new(1, 2),
        }
    }

    /// Compares bundles given in integer units of a common denominator.
    pub fn compare_units(self, a: [i64; 2], b: [i64; 2]) -> Ordering {
        match self {
            Utility::CesHalf => {
                // a₁ + a₂ + 2√(a₁a₂) against b₁ + b₂ + 2√(b₁b₂)
                let d = (a[0] + a[1]) as i128 - (b[0] + b[1]) as i128;
                cmp_radicals(d, a[0] as i128 * a[1] as i128, b[0] as i128 * b[1] as i128)
            }
        }
    }

    /// Exact comparison of rational bundles. Negative entries are an error.
    pub fn compare(self, a: &Bundle, b: &Bundle) -> Result<Ordering> {
        if let Some(e) = a.iter().chain(b).find(|e| e.is_negative()) {
            return Err(Error::invalid(format!("bundle entry {} is negative", rational::format(e))));
        }
        let den = a.iter().chain(b).fold(1i64, |l, e| l.lcm(e.denom()));
        let units = |x: &Bundle| [(x[0] * den).to_integer(), (x[1] * den).to_integer()];
        Ok(self.compare_units(units(a), units(b)))
    }

    /// `u(a)` as a float, for reports only.
    pub fn value(self, a: &Bundle) -> f64 {
        let f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
        match self {
            Utility::CesHalf => (f(&a[0]).sqrt() + f(&a[1]).sqrt()).powi(2),
        }
    }
}

/// Sign of `d + 2√m − 2√n` for `m, n ≥ 0`.
fn cmp_radicals(d: i128, m: i128, n: i128) -> Ordering {
    // A = d + 2√m; A < 0 forces the whole expression below 0
    let a_negative = d < 0 && d * d > 4 * m;
    if a_negative {
        return Ordering::Less;
    }
    // A ≥ 0: compare A² = d² + 4m + 4d√m with 4n
    sign_sum(d * d + 4 * m - 4 * n, 4 * d, m)
}

/// Sign of `e + f√m`, `m ≥ 0`.
fn sign_sum(e: i128, f: i128, m: i128) -> Ordering {
    let f = if m == 0 { 0 } else { f };
    match (e.cmp(&0), f.cmp(&0)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (s, t) if s == t => s,
        // opposite signs: compare e² with f²m
        (s, _) => match (e * e).cmp(&(f * f * m)) {
            Ordering::Greater => s,
            Ordering::Less => s.reverse(),
            Ordering::Equal => Ordering::Equal,
        },
    }
}

/// Parses a bundle from two rational strings.
pub fn parse_bundle(a: &str, b: &str) -> Result<Bundle> {
    Ok([rational::parse(a)?, rational::parse(b)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(a: (i64, i64), c: (i64, i64)) -> Bundle {
        [Rational::new(a.0, a.1), Rational::new(c.0, c.1)]
    }

    #[test]
    fn examples() {
        let u = Utility::CesHalf;
        assert_eq!(u.compare(&b((1, 2), (1, 2)), &b((1, 1), (0, 1))).unwrap(), Ordering::Greater);
        assert_eq!(u.compare(&b((1, 4), (1, 4)), &b((1, 1), (0, 1))).unwrap(), Ordering::Equal);
        assert_eq!(u.compare(&b((1, 3), (2, 7)), &b((1, 3), (2, 7))).unwrap(), Ordering::Equal);
        assert!(u.compare(&b((-1, 2), (1, 2)), &b((1, 1), (0, 1))).is_err());
    }

    #[test]
    fn config() {
        assert_eq!(Utility::from_config("ces", "1/2").unwrap(), Utility::CesHalf);
        assert_eq!(Utility::from_config("ces", "0.5").unwrap(), Utility::CesHalf);
        assert!(matches!(Utility::from_config("ces", "1/3"), Err(Error::Unsupported(_))));
        assert!(matches!(Utility::from_config("leontief", "1/2"), Err(Error::InvalidInput(_))));
    }

    /// `u` in units with a wide float margin, exact ties resolved by the
    /// squared form `(√a₁+√a₂)² = (√b₁+√b₂)²`.
    fn float_order(a: [i64; 2], c: [i64; 2]) -> Option<Ordering> {
        let f = |x: [i64; 2]| ((x[0] as f64).sqrt() + (x[1] as f64).sqrt()).powi(2);
        let (ua, uc) = (f(a), f(c));
        if (ua - uc).abs() > 1e-9 * (1.0 + ua.abs()) {
            ua.partial_cmp(&uc)
        } else {
            None
        }
    }

    proptest! {
        #[test]
        fn agrees_with_floats_away_from_ties(a0 in 0i64..400, a1 in 0i64..400, c0 in 0i64..400, c1 in 0i64..400) {
            let u = Utility::CesHalf;
            if let Some(o) = float_order([a0, a1], [c0, c1]) {
                prop_assert_eq!(u.compare_units([a0, a1], [c0, c1]), o);
            }
        }

        #[test]
        fn total_order(a in (0i64..16, 0i64..16), c in (0i64..16, 0i64..16), e in (0i64..16, 0i64..16)) {
            let u = Utility::CesHalf;
            let (a, c, e) = ([a.0, a.1], [c.0, c.1], [e.0, e.1]);
            prop_assert_eq!(u.compare_units(a, c), u.compare_units(c, a).reverse());
            if u.compare_units(a, c) != Ordering::Greater && u.compare_units(c, e) != Ordering::Greater {
                prop_assert_ne!(u.compare_units(a, e), Ordering::Greater);
            }
        }

        #[test]
        fn scaling_invariance(a0 in 0i64..50, a1 in 0i64..50, c0 in 0i64..50, c1 in 0i64..50, k in 1i64..9) {
            let u = Utility::CesHalf;
            prop_assert_eq!(u.compare_units([a0, a1], [c0, c1]), u.compare_units([k * a0, k * a1], [k * c0, k * c1]));
        }
    }

    #[test]
    fn exact_ties() {
        let u = Utility::CesHalf;
        // (√1 + √9)² = 16 = (√4 + √4)² = (√16 + 0)²
        assert_eq!(u.compare_units([1, 9], [4, 4]), Ordering::Equal);
        assert_eq!(u.compare_units([16, 0], [4, 4]), Ordering::Equal);
        assert_eq!(u.compare_units([2, 8], [0, 18]), Ordering::Equal);
        assert_eq!(u.compare_units([2, 8], [0, 17]), Ordering::Greater);
    }
}
