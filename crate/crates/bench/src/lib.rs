//! Fixtures shared by the benchmarks.

use epicore::replica::{EdgeworthEconomy, ReplicaEconomy, Utility};
use epicore::TUGame;

/// `v({1}) = v({2}) = 10`, `v({1,2}) = 30`.
pub fn two_player() -> TUGame {
    TUGame::from_fn(2, None, |s| match s.mask() {
        1 | 2 => 10,
        _ => 30,
    })
    .expect("valid game")
}

/// Two-player game with values `(v1, v2, v12)`.
pub fn small_game(v1: i64, v2: i64, v12: i64) -> TUGame {
    TUGame::from_fn(2, None, |s| match s.mask() {
        1 => v1,
        2 => v2,
        _ => v12,
    })
    .expect("valid game")
}

pub fn edgeworth(k: usize, d: i64) -> ReplicaEconomy {
    ReplicaEconomy::new(EdgeworthEconomy::new(Utility::CesHalf, d).expect("positive denominator"), k)
        .expect("supported replica count")
}
