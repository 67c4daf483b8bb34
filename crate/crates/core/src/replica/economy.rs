//! Edgeworth economies, their replicas, allocations and economy domination.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, Player};
use crate::error::{Error, Result};
use crate::logic::ComparisonOracle;
use crate::point::Point;
use crate::rational::{self, Rational};

use super::utility::{Bundle, Utility};

/// Two participant types with endowments `e₁ = (1, 0)`, `e₂ = (0, 1)`, a
/// shared utility and the grid denominator `D` for bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeworthEconomy {
    pub utility: Utility,
    pub denominator: i64,
}

impl EdgeworthEconomy {
    pub fn new(utility: Utility, denominator: i64) -> Result<Self> {
        if denominator < 1 {
            return Err(Error::invalid(format!("grid denominator must be positive, got {denominator}")));
        }
        Ok(EdgeworthEconomy { utility, denominator })
    }

    pub fn endowment(t: usize) -> Bundle {
        match t {
            1 => [Rational::from_integer(1), Rational::zero()],
            2 => [Rational::zero(), Rational::from_integer(1)],
            _ => panic!("participant types are 1 and 2, got {t}"),
        }
    }
}

/// The JSON economy config:
/// `{"utility": "ces", "rho": "1/2", "grid_denominator": 8, "replicas": 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyConfig {
    pub utility: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub rho: Rational,
    pub grid_denominator: i64,
    #[serde(default = "one")]
    pub replicas: usize,
}

fn one() -> usize {
    1
}

impl EconomyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The replica economy described, with `replicas` overridden by `k`.
    pub fn economy(&self, k: Option<usize>) -> Result<ReplicaEconomy> {
        let utility = Utility::from_config(&self.utility, &rational::format(&self.rho))?;
        let base = EdgeworthEconomy::new(utility, self.grid_denominator)?;
        ReplicaEconomy::new(base, k.unwrap_or(self.replicas))
    }
}

/// A participant `(type, copy)` of a replica economy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Participant {
    pub kind: usize,
    pub copy: usize,
}

impl fmt::Display for Participant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.kind, self.copy)
    }
}

/// Largest supported replica count (participants are coalition bits).
pub const MAX_REPLICAS: usize = 16;

/// The `k`-fold replica: participants `(i, t)`, `i ∈ {1, 2}`, `t ∈ 1..=k`.
///
/// As coalition members, `(i, t)` is player `(i − 1)·k + t`: all type-1
/// participants first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReplicaEconomy {
    pub base: EdgeworthEconomy,
    pub k: usize,
}

impl ReplicaEconomy {
    pub fn new(base: EdgeworthEconomy, k: usize) -> Result<Self> {
        if k == 0 || k > MAX_REPLICAS {
            return Err(Error::invalid(format!("replica count must lie in 1..={MAX_REPLICAS}, got {k}")));
        }
        Ok(ReplicaEconomy { base, k })
    }

    pub fn participants(&self) -> usize {
        2 * self.k
    }

    pub fn denominator(&self) -> i64 {
        self.base.denominator
    }

    pub fn utility(&self) -> Utility {
        self.base.utility
    }

    pub fn participant(&self, p: Player) -> Participant {
        assert!(p >= 1 && p <= self.participants(), "participant {p} out of range");
        Participant {
            kind: (p - 1) / self.k + 1,
            copy: (p - 1) % self.k + 1,
        }
    }

    pub fn player(&self, who: Participant) -> Player {
        (who.kind - 1) * self.k + who.copy
    }

    pub fn everyone(&self) -> Coalition {
        Coalition::grand(self.participants())
    }

    /// Number of type-1 and type-2 members.
    pub fn type_counts(&self, s: Coalition) -> [usize; 2] {
        let ones = s.members().filter(|&p| p <= self.k).count();
        [ones, s.len() - ones]
    }

    /// `Σ_{σ ∈ S} e_σ`
    pub fn endowment_of(&self, s: Coalition) -> Bundle {
        let [a, b] = self.type_counts(s);
        [Rational::from_integer(a as i64), Rational::from_integer(b as i64)]
    }

    /// Members of `s` written as participants.
    pub fn describe(&self, s: Coalition) -> String {
        let parts: Vec<String> = s.members().map(|p| self.participant(p).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// One bundle per participant, in player order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation(pub Vec<Bundle>);

impl Allocation {
    pub fn bundles(&self) -> &[Bundle] {
        &self.0
    }

    pub fn bundle(&self, p: Player) -> &Bundle {
        &self.0[p - 1]
    }

    pub fn sum_over(&self, s: Coalition) -> Bundle {
        let mut t = [Rational::zero(), Rational::zero()];
        for p in s.members() {
            t[0] += self.0[p - 1][0];
            t[1] += self.0[p - 1][1];
        }
        t
    }

    /// As a point of `At₁`: participant `p` owns entries `2p − 1` and `2p`.
    pub fn to_point(&self) -> Point {
        Point::new(self.0.iter().flat_map(|b| b.iter().copied()).collect())
    }

    pub fn from_point(point: &Point) -> Result<Self> {
        if point.len() % 2 != 0 {
            return Err(Error::invalid("an allocation point has two entries per participant"));
        }
        Ok(Allocation(point.entries().chunks(2).map(|c| [c[0], c[1]]).collect()))
    }

    /// Every bundle is a non-negative multiple of `1/D`.
    pub fn on_grid(&self, d: i64) -> bool {
        self.0.iter().flatten().all(|e| rational::on_grid(e, d))
    }

    /// Same bundle for all copies of each type.
    pub fn equal_treatment(&self, k: usize) -> bool {
        self.0.chunks(k).all(|c| c.iter().all(|b| *b == c[0]))
    }

    pub fn to_strings(&self) -> Vec<[String; 2]> {
        self.0.iter().map(|b| [rational::format(&b[0]), rational::format(&b[1])]).collect()
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_strings().iter().map(|[a, b]| format!("({a},{b})")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for Allocation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Allocation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| super::utility::parse_bundle(a, b))
            .collect::<Result<Vec<_>>>()
            .map(Allocation)
            .map_err(serde::de::Error::custom)
    }
}

fn check_allocation(econ: &ReplicaEconomy, x: &Allocation) -> Result<()> {
    if x.0.len() != econ.participants() {
        return Err(Error::invalid(format!(
            "allocation has {} bundles, the economy has {} participants",
            x.0.len(),
            econ.participants()
        )));
    }
    Ok(())
}

/// `Σ_{σ∈S} y_σ = Σ_{σ∈S} e_σ`
pub fn feasible_for(econ: &ReplicaEconomy, y: &Allocation, s: Coalition) -> bool {
    y.sum_over(s) == econ.endowment_of(s)
}

/// `y dom_S x`: `y` redistributes the endowment of `S` within `S`, no member
/// of `S` is worse off and one is strictly better off.
pub fn econ_dominates(econ: &ReplicaEconomy, y: &Allocation, x: &Allocation, s: Coalition) -> Result<bool> {
    check_allocation(econ, y)?;
    check_allocation(econ, x)?;
    if !s.within(econ.participants()) {
        return Err(Error::invalid(format!("coalition {{{s}}} is not a set of participants")));
    }
    if !feasible_for(econ, y, s) {
        return Err(Error::invalid(format!("y does not redistribute the endowment of {}", econ.describe(s))));
    }
    let mut strict = false;
    for p in s.members() {
        match econ.utility().compare(y.bundle(p), x.bundle(p))? {
            Ordering::Less => return Ok(false),
            Ordering::Greater => strict = true,
            Ordering::Equal => {}
        }
    }
    Ok(strict)
}

/// The coalitions whose blocking power is not subsumed by others, grouped:
/// (1) singletons, (2) pairs `{(1,n),(2,m)}`, (3) for `n = 2..=k` the sets
/// `{(1,1..n),(2,1..n−1)}` and `{(1,1..n−1),(2,1..n)}`, (4) everyone.
pub fn effective_groups(k: usize) -> [Vec<Coalition>; 4] {
    assert!(k >= 1 && k <= MAX_REPLICAS, "replica count {k} out of range");
    let p = |kind: usize, copy: usize| (kind - 1) * k + copy;
    let set = |ps: Vec<usize>| Coalition::from_players(ps).expect("nonempty");
    let singles = (1..=2).flat_map(|i| (1..=k).map(move |n| (i, n))).map(|(i, n)| set(vec![p(i, n)])).collect();
    let pairs = (1..=k)
        .flat_map(|n| (1..=k).map(move |m| (n, m)))
        .map(|(n, m)| set(vec![p(1, n), p(2, m)]))
        .collect();
    let mut near = Vec::new();
    for n in 2..=k {
        near.push(set((1..=n).map(|t| p(1, t)).chain((1..n).map(|t| p(2, t))).collect()));
        near.push(set((1..n).map(|t| p(1, t)).chain((1..=n).map(|t| p(2, t))).collect()));
    }
    let all = vec![Coalition::grand(2 * k)];
    let sorted = |mut v: Vec<Coalition>| {
        v.sort();
        v
    };
    [sorted(singles), sorted(pairs), sorted(near), all]
}

/// All effective coalitions, deduplicated, canonical order.
pub fn effective_coalitions(k: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = effective_groups(k).into_iter().flatten().collect();
    all.sort();
    all.dedup();
    all
}

/// `(count, average)`: the number of effective coalitions of the `k`-fold
/// replica and the number per participant, `count / 2k`. For `k ≥ 2` the
/// count is `k² + 4k − 1`; for `k = 1` the pair and the whole set coincide
/// and the count is 3.
pub fn knowledge_growth(k: usize) -> (usize, Rational) {
    let count = effective_coalitions(k).len();
    (count, Rational::new(count as i64, 2 * k as i64))
}

/// The TU game of an economy is only referred to, not computed.
pub fn derived_game(econ: &EdgeworthEconomy) -> String {
    let _ = econ;
    "v(S) = max { Σ_{i∈S} u_i(x_i) : Σ_{i∈S} x_i = Σ_{i∈S} e_i } \
     (not computed: allocations are compared directly)"
        .to_string()
}

/// Utility comparison on allocation points: member `p` compares its bundle
/// (entries `2p − 1`, `2p`) under the shared utility.
#[derive(Debug, Clone, Copy)]
pub struct UtilityOracle(pub Utility);

impl ComparisonOracle for UtilityOracle {
    fn compare(&self, left: &Point, right: &Point, member: Player) -> Ordering {
        let bundle = |pt: &Point| [pt.get(2 * member - 1), pt.get(2 * member)];
        self.0
            .compare(&bundle(left), &bundle(right))
            .expect("allocation points have non-negative entries")
    }

    fn covers(&self, point: &Point, member: Player) -> bool {
        member >= 1 && 2 * member <= point.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn econ(k: usize, d: i64) -> ReplicaEconomy {
        ReplicaEconomy::new(EdgeworthEconomy::new(Utility::CesHalf, d).unwrap(), k).unwrap()
    }

    fn alloc(v: &[(i64, i64)], d: i64) -> Allocation {
        Allocation(v.iter().map(|&(a, b)| [Rational::new(a, d), Rational::new(b, d)]).collect())
    }

    #[test]
    fn domination_examples() {
        let e1 = econ(1, 2);
        let endow = alloc(&[(2, 0), (0, 2)], 2);
        let split = alloc(&[(1, 1), (1, 1)], 2);
        assert!(econ_dominates(&e1, &split, &endow, e1.everyone()).unwrap());
        assert!(!econ_dominates(&e1, &split, &split, e1.everyone()).unwrap());
        let bad = alloc(&[(2, 2), (1, 1)], 2);
        assert!(econ_dominates(&e1, &bad, &endow, e1.everyone()).is_err());

        // equal-treatment violation blocked by the midpoint on {(1,1),(2,1)}
        let e2 = econ(2, 8);
        let x = alloc(&[(2, 2), (6, 6), (7, 7), (1, 1)], 8);
        let mid = alloc(&[(4, 4), (0, 0), (0, 0), (4, 4)], 8);
        let worse_off = Coalition::from_players([1, 4]).unwrap();
        assert!(econ_dominates(&e2, &mid, &x, worse_off).unwrap());
        let better_off = Coalition::from_players([1, 3]).unwrap();
        let other = alloc(&[(4, 4), (0, 0), (4, 4), (0, 0)], 8);
        assert!(!econ_dominates(&e2, &other, &x, better_off).unwrap());
    }

    #[test]
    fn effective_lists() {
        let e1 = effective_coalitions(1);
        assert_eq!(e1.len(), 3);
        for k in 2..=8 {
            assert_eq!(effective_coalitions(k).len(), k * k + 4 * k - 1);
        }
        assert_eq!(knowledge_growth(2), (11, Rational::new(11, 4)));
        assert_eq!(knowledge_growth(3), (20, Rational::new(10, 3)));
        let e = econ(2, 8);
        let names: Vec<String> = effective_groups(2)[2].iter().map(|&s| e.describe(s)).collect();
        assert_eq!(names, ["{(1,1),(1,2),(2,1)}", "{(1,1),(2,1),(2,2)}"]);
    }

    #[test]
    fn config_round_trip() {
        let c = EconomyConfig::from_json(r#"{"utility":"ces","rho":"1/2","grid_denominator":8,"replicas":2}"#).unwrap();
        assert_eq!(c.economy(None).unwrap(), econ(2, 8));
        assert_eq!(c.economy(Some(3)).unwrap().k, 3);
        assert_eq!(EconomyConfig::from_json(&c.to_json()).unwrap(), c);
        assert!(EconomyConfig::from_json(r#"{"utility":"ces","rho":"1/2"}"#).is_err());
    }

    #[test]
    fn participants_and_points() {
        let e = econ(3, 4);
        assert_eq!(e.participant(4), Participant { kind: 2, copy: 1 });
        assert_eq!(e.player(Participant { kind: 1, copy: 3 }), 3);
        let x = alloc(&[(1, 0), (2, 3)], 4);
        assert_eq!(Allocation::from_point(&x.to_point()).unwrap(), x);
        let oracle = UtilityOracle(Utility::CesHalf);
        let y = alloc(&[(0, 1), (2, 3)], 4);
        assert_eq!(oracle.compare(&x.to_point(), &y.to_point(), 1), Ordering::Equal);
        assert!(oracle.covers(&x.to_point(), 2) && !oracle.covers(&x.to_point(), 3));
    }
}
