//! TU games with integer coalition values, grid payoff vectors, the core and
//! domination.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{all_coalitions, Coalition, Player};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rational::{self, Rational};

/// Largest player count accepted by [`TUGame`]; all `2^n - 1` values are stored.
pub const MAX_GAME_PLAYERS: usize = 16;

/// A transferable-utility game `(N, v)` with `v(S)` a non-negative integer
/// for every nonempty coalition, plus the payoff bound `M` of the logic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TUGame {
    n: usize,
    /// Indexed by coalition mask; slot 0 (the empty coalition) is always 0.
    values: Vec<i64>,
    bound: i64,
}

impl TUGame {
    /// Builds a game from a total characteristic function.
    ///
    /// `bound` defaults to `2 * max_S v(S) + 1`.
    pub fn new(n: usize, values: &BTreeMap<Coalition, i64>, bound: Option<i64>) -> Result<Self> {
        if n == 0 || n > MAX_GAME_PLAYERS {
            return Err(Error::invalid(format!("player count {n} outside 1..={MAX_GAME_PLAYERS}")));
        }
        for c in values.keys() {
            if !c.within(n) {
                return Err(Error::invalid(format!("coalition {} mentions a player outside 1..={n}", c.key())));
            }
        }
        let mut table = vec![0i64; 1 << n];
        for c in all_coalitions(n) {
            let v = *values
                .get(&c)
                .ok_or_else(|| Error::invalid(format!("missing value for coalition {}", c.key())))?;
            if v < 0 {
                return Err(Error::invalid(format!("negative value {v} for coalition {}", c.key())));
            }
            table[c.mask() as usize] = v;
        }
        let max = table.iter().copied().max().unwrap_or(0);
        let bound = bound.unwrap_or(2 * max + 1);
        if bound <= max {
            return Err(Error::invalid(format!("payoff bound {bound} must exceed every coalition value (max {max})")));
        }
        Ok(TUGame { n, values: table, bound })
    }

    /// Builds a game from a function of the coalition.
    pub fn from_fn(n: usize, bound: Option<i64>, mut v: impl FnMut(Coalition) -> i64) -> Result<Self> {
        if n == 0 || n > MAX_GAME_PLAYERS {
            return Err(Error::invalid(format!("player count {n} outside 1..={MAX_GAME_PLAYERS}")));
        }
        let values: BTreeMap<Coalition, i64> = all_coalitions(n).into_iter().map(|c| (c, v(c))).collect();
        Self::new(n, &values, bound)
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: Coalition) -> i64 {
        self.values[s.mask() as usize]
    }

    /// The payoff bound `M`.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn coalitions(&self) -> Vec<Coalition> {
        all_coalitions(self.n)
    }

    pub fn with_bound(&self, bound: i64) -> Result<Self> {
        let max = self.values.iter().copied().max().unwrap_or(0);
        if bound <= max {
            return Err(Error::invalid(format!("payoff bound {bound} must exceed every coalition value (max {max})")));
        }
        Ok(TUGame { bound, ..self.clone() })
    }

    /// Validates a payoff vector against this game's grid and bound.
    pub fn payoff(&self, entries: Vec<Rational>) -> Result<PayoffVector> {
        if entries.len() != self.n {
            return Err(Error::invalid(format!(
                "payoff vector has {} entries, game has {} players",
                entries.len(),
                self.n
            )));
        }
        let n = self.n as i64;
        for (i, e) in entries.iter().enumerate() {
            if !rational::on_grid(e, n) {
                return Err(Error::invalid(format!(
                    "entry {} = {} is not a non-negative multiple of 1/{n}",
                    i + 1,
                    rational::format(e)
                )));
            }
            if *e > Rational::from_integer(self.bound) {
                return Err(Error::invalid(format!(
                    "entry {} = {} exceeds the payoff bound {}",
                    i + 1,
                    rational::format(e),
                    self.bound
                )));
            }
        }
        Ok(PayoffVector(Point::new(entries)))
    }

    pub fn integer_payoff(&self, entries: &[i64]) -> Result<PayoffVector> {
        self.payoff(entries.iter().map(|&e| Rational::from_integer(e)).collect())
    }

    /// Parses a game file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_game()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GameFile::from(self)).expect("game file serializes")
    }
}

impl fmt::Debug for TUGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for c in self.coalitions() {
            m.entry(&c.key(), &self.value(c));
        }
        m.finish()?;
        write!(f, " (M = {})", self.bound)
    }
}

/// On-disk game description: `{"players": n, "bound": M?, "v": {"1": 10, "1,2": 30}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    pub v: BTreeMap<String, i64>,
}

impl GameFile {
    pub fn into_game(self) -> Result<TUGame> {
        let mut values = BTreeMap::new();
        for (key, value) in &self.v {
            let c: Coalition = key.parse()?;
            if c.key() != *key {
                return Err(Error::Parse(format!(
                    "coalition key {key:?} must list ascending ids without spaces ({:?})",
                    c.key()
                )));
            }
            values.insert(c, *value);
        }
        TUGame::new(self.players, &values, self.bound)
    }
}

impl From<&TUGame> for GameFile {
    fn from(g: &TUGame) -> Self {
        GameFile {
            players: g.n,
            bound: Some(g.bound),
            v: g.coalitions().into_iter().map(|c| (c.key(), g.value(c))).collect(),
        }
    }
}

/// A payoff vector on the `1/n` grid within `[0, M]`, validated by
/// [`TUGame::payoff`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PayoffVector(Point);

impl PayoffVector {
    pub fn point(&self) -> &Point {
        &self.0
    }

    pub fn entries(&self) -> &[Rational] {
        self.0.entries()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, p: Player) -> Rational {
        self.0.get(p)
    }

    pub fn total(&self) -> Rational {
        self.entries().iter().sum()
    }

    pub fn sum_over(&self, s: Coalition) -> Rational {
        s.members().map(|p| self.get(p)).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integer())
    }

    /// Parses `"9,21"` (entries may be `p/q`) against a game.
    pub fn parse(game: &TUGame, text: &str) -> Result<Self> {
        let entries = text.split(',').map(rational::parse).collect::<Result<Vec<_>>>()?;
        game.payoff(entries)
    }
}

impl fmt::Debug for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl Serialize for PayoffVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serde_rational_vec::serialize(self.entries(), s)
    }
}

fn check_dimension(game: &TUGame, x: &PayoffVector) -> Result<()> {
    if x.len() != game.players() {
        return Err(Error::invalid(format!(
            "payoff vector has {} entries, game has {} players",
            x.len(),
            game.players()
        )));
    }
    Ok(())
}

/// `x ∈ C(G)`: `Σ_N x = v(N)` and `Σ_S x ≥ v(S)` for every coalition.
pub fn core_membership(game: &TUGame, x: &PayoffVector) -> Result<bool> {
    check_dimension(game, x)?;
    if x.total() != Rational::from_integer(game.value(game.grand())) {
        return Ok(false);
    }
    Ok(game
        .coalitions()
        .into_iter()
        .all(|s| x.sum_over(s) >= Rational::from_integer(game.value(s))))
}

/// All integer core vectors, in lexicographic order.
pub fn enumerate_integer_core(game: &TUGame) -> Vec<PayoffVector> {
    let total = game.value(game.grand());
    let coalitions = game.coalitions();
    let mut out = Vec::new();
    for_each_composition(game.players(), total, |entries| {
        let ok = coalitions
            .iter()
            .all(|&s| s.members().map(|p| entries[p - 1]).sum::<i64>() >= game.value(s));
        if ok {
            out.push(game.integer_payoff(entries).expect("core vectors lie on the grid"));
        }
    });
    out
}

/// `y dom_S x`: `y_i ≥ x_i` on `S` with at least one strict. Feasibility of
/// `y` for `S` is a separate check.
pub fn dominates(y: &PayoffVector, x: &PayoffVector, s: Coalition) -> bool {
    let mut strict = false;
    for p in s.members() {
        let (a, b) = (y.get(p), x.get(p));
        if a < b {
            return false;
        }
        strict |= a > b;
    }
    strict
}

/// Constructive blocking for integer `x` with `Σx ≤ v(N)`.
///
/// Returns the first coalition (canonical order) with `Σ_S x < v(S)` and the
/// vector `y_i = x_i + (v(S) - Σ_S x)/n` on `S`, `0` elsewhere.
pub fn blocking_witness(game: &TUGame, x: &PayoffVector) -> Result<Option<(Coalition, PayoffVector)>> {
    check_dimension(game, x)?;
    if !x.is_integral() {
        return Err(Error::invalid(format!("blocking witness needs an integer payoff vector, got {x}")));
    }
    let grand = Rational::from_integer(game.value(game.grand()));
    if x.total() > grand {
        return Err(Error::invalid(format!("payoff vector {x} exceeds v(N) = {grand}")));
    }
    let n = game.players() as i64;
    for s in game.coalitions() {
        let deficit = Rational::from_integer(game.value(s)) - x.sum_over(s);
        if deficit > Rational::from_integer(0) {
            let share = deficit / n;
            let entries = (1..=game.players())
                .map(|p| if s.contains(p) { x.get(p) + share } else { Rational::from_integer(0) })
                .collect();
            let y = game.payoff(entries)?;
            return Ok(Some((s, y)));
        }
    }
    Ok(None)
}

/// Calls `f` on every non-negative integer vector of length `n` summing to `total`,
/// in lexicographic order.
pub fn for_each_composition(n: usize, total: i64, mut f: impl FnMut(&[i64])) {
    fn go(buf: &mut Vec<i64>, n: usize, left: i64, f: &mut dyn FnMut(&[i64])) {
        if buf.len() + 1 == n {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=left {
            buf.push(v);
            go(buf, n, left - v, f);
            buf.pop();
        }
    }
    if n == 0 || total < 0 {
        return;
    }
    let mut buf = Vec::with_capacity(n);
    go(&mut buf, n, total, &mut f);
}

/// Integer vectors with `Σx ≤ v(N)`, lexicographic order: the domain of the
/// acceptance sweeps.
pub fn integer_sweep(game: &TUGame) -> Vec<PayoffVector> {
    grid_sweep_scaled(game, 1)
}

/// Grid vectors (multiples of `1/n`) with `Σx ≤ v(N)`, lexicographic order.
pub fn grid_sweep(game: &TUGame) -> Vec<PayoffVector> {
    grid_sweep_scaled(game, game.players() as i64)
}

fn grid_sweep_scaled(game: &TUGame, scale: i64) -> Vec<PayoffVector> {
    let n = game.players();
    let cap = game.value(game.grand()) * scale;
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    fn go(buf: &mut Vec<i64>, n: usize, left: i64, scale: i64, game: &TUGame, out: &mut Vec<PayoffVector>) {
        if buf.len() == n {
            let entries = buf.iter().map(|&e| Rational::new(e, scale)).collect();
            out.push(game.payoff(entries).expect("sweep stays below v(N) < M"));
            return;
        }
        for v in 0..=left {
            buf.push(v);
            go(buf, n, left - v, scale, game, out);
            buf.pop();
        }
    }
    go(&mut buf, n, cap, scale, game, &mut out);
    out
}
