use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::rational::{self, Rational};

/// An exact rational vector, cheap to clone.
///
/// Atoms of the logic carry points: a payoff vector for TU games, or a
/// flattened allocation (two coordinates per participant) for economies.
#[derive(Clone)]
pub struct Point(Arc<[Rational]>);

impl Point {
    pub fn new(entries: Vec<Rational>) -> Self {
        Point(entries.into())
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        Point(entries.iter().map(|&e| Rational::from_integer(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    /// Entry for player `p` (1-based).
    pub fn get(&self, p: usize) -> Rational {
        self.0[p - 1]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::format).collect()
    }
}

/// Exact comparison of reduced fractions without division.
fn cmp_entry(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (*a.numer() as i128 * *b.denom() as i128).cmp(&(*b.numer() as i128 * *a.denom() as i128))
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match cmp_entry(a, b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        // entries are kept in lowest terms, so equal values are equal pairs
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.len() == other.0.len()
                && self.0.iter().zip(other.0.iter()).all(|(a, b)| a.numer() == b.numer() && a.denom() == b.denom()))
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.len().hash(state);
        for e in self.0.iter() {
            e.numer().hash(state);
            e.denom().hash(state);
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<Rational>> for Point {
    fn from(v: Vec<Rational>) -> Self {
        Point::new(v)
    }
}
