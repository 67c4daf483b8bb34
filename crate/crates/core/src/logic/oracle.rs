use std::cmp::Ordering;

use crate::coalition::{Coalition, Player};
use crate::point::Point;

/// The numeric comparison ability assumed of every player: it decides the
/// non-logical axioms.
///
/// `compare(y, x, p)` orders member `p`'s position at `y` against `x`.
/// Implementations must be pure.
pub trait ComparisonOracle: Sync {
    fn compare(&self, left: &Point, right: &Point, member: Player) -> Ordering;

    /// `point` has a coordinate block for `member`.
    fn covers(&self, point: &Point, member: Player) -> bool {
        member >= 1 && member <= point.len()
    }

    /// `left_p ≥ right_p` for every `p ∈ within`.
    fn weakly_above(&self, left: &Point, right: &Point, within: Coalition) -> bool {
        within.members().all(|p| self.compare(left, right, p) != Ordering::Less)
    }

    /// `left_p < right_p` for some `p ∈ within`.
    fn somewhere_below(&self, left: &Point, right: &Point, within: Coalition) -> bool {
        within.members().any(|p| self.compare(left, right, p) == Ordering::Less)
    }
}

/// Payoff comparison on TU-game grid vectors: coordinate `p` against coordinate `p`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridOracle;

impl ComparisonOracle for GridOracle {
    fn compare(&self, left: &Point, right: &Point, member: Player) -> Ordering {
        left.get(member).cmp(&right.get(member))
    }
}

impl<T: ComparisonOracle + ?Sized> ComparisonOracle for &T {
    fn compare(&self, left: &Point, right: &Point, member: Player) -> Ordering {
        (**self).compare(left, right, member)
    }

    fn covers(&self, point: &Point, member: Player) -> bool {
        (**self).covers(point, member)
    }
}
