//! Coalitions as bitsets over players `1..=n`.
//!
//! The canonical order used everywhere (enumeration, formulas, reports) is by
//! cardinality first, then lexicographic on the ascending member list.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Player identifier, 1-based.
pub type Player = usize;

/// Largest supported player count (one bit per player).
pub const MAX_PLAYERS: usize = 64;

/// A nonempty set of players, stored as a bitmask (bit `i - 1` for player `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition(u64);

impl Coalition {
    /// Builds a coalition from a raw mask. Returns an error for the empty mask.
    pub fn from_mask(mask: u64) -> Result<Self> {
        if mask == 0 {
            return Err(Error::invalid("coalitions must be nonempty"));
        }
        Ok(Coalition(mask))
    }

    pub fn from_players<I: IntoIterator<Item = Player>>(players: I) -> Result<Self> {
        let mut mask = 0u64;
        for p in players {
            if p == 0 || p > MAX_PLAYERS {
                return Err(Error::invalid(format!("player id {p} out of range 1..={MAX_PLAYERS}")));
            }
            mask |= 1 << (p - 1);
        }
        Self::from_mask(mask)
    }

    pub fn singleton(p: Player) -> Self {
        assert!(p >= 1 && p <= MAX_PLAYERS, "player id {p} out of range");
        Coalition(1 << (p - 1))
    }

    /// The grand coalition `{1, ..., n}`.
    pub fn grand(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS, "player count {n} out of range");
        Coalition(full_mask(n))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, p: Player) -> bool {
        p >= 1 && p <= MAX_PLAYERS && self.0 & (1 << (p - 1)) != 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Every member lies in `1..=n`.
    pub fn within(self, n: usize) -> bool {
        self.0 & !full_mask(n) == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    /// Members in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Key in the game-file format: comma-joined ascending ids, e.g. `"1,3"`.
    pub fn key(self) -> String {
        let ids: Vec<String> = self.members().map(|p| p.to_string()).collect();
        ids.join(",")
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = Player;

    fn next(&mut self) -> Option<Player> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Members {}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // same size: the set owning the lowest differing player comes first
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if self.0 & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for Coalition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut players = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let p: Player = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad player id {part:?} in coalition {s:?}")))?;
            players.push(p);
        }
        Coalition::from_players(players)
    }
}

impl serde::Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

impl<'de> serde::Deserialize<'de> for Coalition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// All nonempty coalitions of `{1..n}` in canonical order.
pub fn all_coalitions(n: usize) -> Vec<Coalition> {
    assert!(n >= 1 && n < 32, "coalition enumeration supports 1..=31 players");
    let mut all: Vec<Coalition> = (1..(1u64 << n)).map(Coalition).collect();
    all.sort();
    all
}

/// Coalitions of `{1..n}` containing `p`, canonical order.
pub fn coalitions_containing(n: usize, p: Player) -> Vec<Coalition> {
    all_coalitions(n).into_iter().filter(|c| c.contains(p)).collect()
}

/// Parses the CLI family syntax: coalitions separated by `;`, members by `,`.
/// The empty string is the empty family.
pub fn parse_family(text: &str) -> Result<Vec<Coalition>> {
    let mut family: Vec<Coalition> = Vec::new();
    for part in text.split(';') {
        if part.trim().is_empty() {
            continue;
        }
        family.push(part.parse()?);
    }
    family.sort();
    family.dedup();
    Ok(family)
}

pub fn format_family(family: &[Coalition]) -> String {
    let keys: Vec<String> = family.iter().map(|c| c.key()).collect();
    keys.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_order_three_players() {
        let keys: Vec<String> = all_coalitions(3).iter().map(|c| c.key()).collect();
        assert_eq!(keys, ["1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]);
    }

    #[test]
    fn parse_and_key() {
        let c: Coalition = "3, 1".parse().unwrap();
        assert_eq!(c.key(), "1,3");
        assert!(c.contains(1) && c.contains(3) && !c.contains(2));
        assert!("".parse::<Coalition>().is_err());
        assert!("0".parse::<Coalition>().is_err());
    }

    #[test]
    fn family_syntax() {
        let fam = parse_family("1,2;1;1,2").unwrap();
        assert_eq!(format_family(&fam), "1;1,2");
        assert!(parse_family("").unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn order_matches_size_then_member_lists(a in 1u64..1024, b in 1u64..1024) {
            let (x, y) = (Coalition::from_mask(a).unwrap(), Coalition::from_mask(b).unwrap());
            let reference = x.len().cmp(&y.len()).then_with(|| x.members().cmp(y.members()));
            prop_assert_eq!(x.cmp(&y), reference);
        }

        #[test]
        fn order_is_total_and_consistent(a in 1u64..(1 << 10), b in 1u64..(1 << 10)) {
            let (a, b) = (Coalition(a), Coalition(b));
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
            let parsed: Coalition = a.key().parse().unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
