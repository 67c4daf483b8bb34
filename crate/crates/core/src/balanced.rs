//! Balanced families of coalitions, the Bondareva-Shapley test and the
//! balanced-knowledge sufficient condition for a nonempty core.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coalition::{all_coalitions, Coalition};
use crate::error::{Error, Result};
use crate::game::TUGame;
use crate::knowledge::{unanimous_acceptance_set, KnowledgeProfile};
use crate::lp::{self, Constraint, Relation, Q};
use crate::rational::{self, Rational};

/// Largest player count for balanced-family enumeration.
pub const MAX_BALANCED_PLAYERS: usize = 4;

/// A balanced family with weights: `Σ_{S ∋ i} λ_S = 1` for every player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedFamily {
    pub family: Vec<Coalition>,
    #[serde(serialize_with = "rational::serde_rational_vec::serialize")]
    pub weights: Vec<Rational>,
}

impl BalancedFamily {
    /// The weights sum to one at every player of `1..=n`, exactly.
    pub fn is_valid(&self, n: usize) -> bool {
        self.family.len() == self.weights.len()
            && self.weights.iter().all(|w| !w.is_negative() && *w <= Rational::one())
            && (1..=n).all(|i| {
                let sum: Rational = self.family.iter().zip(&self.weights).filter(|(s, _)| s.contains(i)).map(|(_, w)| *w).sum();
                sum == Rational::one()
            })
    }

    /// `Σ_S λ_S v(S)`
    pub fn weighted_value(&self, game: &TUGame) -> Rational {
        self.family
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| *w * Rational::from_integer(game.value(*s)))
            .sum()
    }
}

fn indicator(n: usize, s: Coalition) -> Vec<Q> {
    (1..=n).map(|i| if s.contains(i) { Q::one() } else { Q::zero() }).collect()
}

/// Some exact balancing weights in `[0, 1]` for `family`, or `None`.
pub fn is_balanced(n: usize, family: &[Coalition]) -> Result<Option<BalancedFamily>> {
    if let Some(s) = family.iter().find(|s| !s.within(n)) {
        return Err(Error::invalid(format!("coalition {{{s}}} is not a coalition of 1..={n}")));
    }
    let mut family = family.to_vec();
    family.sort();
    family.dedup();
    if family.is_empty() {
        return Ok(None);
    }
    let rows: Vec<Constraint> = (1..=n)
        .map(|i| {
            let coeffs = family.iter().map(|s| if s.contains(i) { Q::one() } else { Q::zero() }).collect();
            Constraint::new(coeffs, Relation::Eq, Q::one())
        })
        .collect();
    let Some(weights) = lp::feasible_point(family.len(), &rows, false) else { return Ok(None) };
    let weights = weights.iter().map(|w| lp::narrow(w).expect("weights lie in [0, 1]")).collect();
    Ok(Some(BalancedFamily { family, weights }))
}

fn family_of(keys: &[&str]) -> Vec<Coalition> {
    keys.iter().map(|k| k.parse().expect("valid coalition literal")).collect()
}

/// Minimal balanced families of `1..=n` (balanced, with no balanced proper
/// subfamily), canonical order, each with its unique weights.
///
/// For `n ≤ 3` these are the partitions plus, for `n = 3`, the three pairs;
/// for `n = 4` they are enumerated by [`enumerate_minimal_balanced`].
pub fn minimal_balanced_families(n: usize) -> Result<Vec<BalancedFamily>> {
    let families: Vec<Vec<Coalition>> = match n {
        1 => vec![family_of(&["1"])],
        2 => vec![family_of(&["1", "2"]), family_of(&["1,2"])],
        3 => vec![
            family_of(&["1", "2", "3"]),
            family_of(&["1", "2,3"]),
            family_of(&["2", "1,3"]),
            family_of(&["3", "1,2"]),
            family_of(&["1,2", "1,3", "2,3"]),
            family_of(&["1,2,3"]),
        ],
        4 => return enumerate_minimal_balanced(n),
        _ => {
            return Err(Error::unsupported(format!(
                "minimal balanced families are available for n <= {MAX_BALANCED_PLAYERS}, got {n}"
            )))
        }
    };
    let mut out: Vec<BalancedFamily> = families
        .into_iter()
        .map(|f| {
            let cols: Vec<Vec<Q>> = f.iter().map(|&s| indicator(n, s)).collect();
            let w = lp::unique_combination(&cols, &vec![Q::one(); n]).expect("hard-coded families are minimal balanced");
            let mut pairs: Vec<(Coalition, Rational)> = f.into_iter().zip(w.iter().map(|q| lp::narrow(q).expect("small weights"))).collect();
            pairs.sort();
            let (family, weights) = pairs.into_iter().unzip();
            BalancedFamily { family, weights }
        })
        .collect();
    out.sort_by(|a, b| a.family.cmp(&b.family));
    Ok(out)
}

/// Minimal balanced families as the supports of the vertices of
/// `{λ ≥ 0 : Σ_S λ_S 1_S = 1_N}`: families of at most `n` coalitions with
/// linearly independent indicator vectors and strictly positive weights.
pub fn enumerate_minimal_balanced(n: usize) -> Result<Vec<BalancedFamily>> {
    if n == 0 || n > MAX_BALANCED_PLAYERS {
        return Err(Error::unsupported(format!(
            "minimal balanced families are available for n <= {MAX_BALANCED_PLAYERS}, got {n}"
        )));
    }
    let coalitions = all_coalitions(n);
    let ones = vec![Q::one(); n];
    let mut out = Vec::new();
    let mut chosen: Vec<Coalition> = Vec::new();
    fn go(
        start: usize,
        n: usize,
        coalitions: &[Coalition],
        ones: &[Q],
        chosen: &mut Vec<Coalition>,
        out: &mut Vec<BalancedFamily>,
    ) {
        if !chosen.is_empty() {
            let cols: Vec<Vec<Q>> = chosen.iter().map(|&s| indicator(n, s)).collect();
            if lp::column_rank(&cols) < chosen.len() {
                return;
            }
            if let Some(w) = lp::unique_combination(&cols, ones) {
                if w.iter().all(Q::is_positive) {
                    out.push(BalancedFamily {
                        family: chosen.clone(),
                        weights: w.iter().map(|q| lp::narrow(q).expect("small weights")).collect(),
                    });
                }
            }
        }
        if chosen.len() == n {
            return;
        }
        for k in start..coalitions.len() {
            chosen.push(coalitions[k]);
            go(k + 1, n, coalitions, ones, chosen, out);
            chosen.pop();
        }
    }
    go(0, n, &coalitions, &ones, &mut chosen, &mut out);
    out.sort_by(|a, b| a.family.cmp(&b.family));
    Ok(out)
}

/// `Σ_S λ_S v(S) ≤ v(N)` for every minimal balanced family.
pub fn bondareva_shapley_nonempty(game: &TUGame) -> Result<bool> {
    Ok(bondareva_shapley_violation(game)?.is_none())
}

/// The first minimal balanced family with `Σ_S λ_S v(S) > v(N)`.
pub fn bondareva_shapley_violation(game: &TUGame) -> Result<Option<BalancedFamily>> {
    let grand = Rational::from_integer(game.value(game.grand()));
    Ok(minimal_balanced_families(game.players())?
        .into_iter()
        .find(|b| b.weighted_value(game) > grand))
}

/// A real core vector, from the exact feasibility problem
/// `Σ_S x ≥ v(S)`, `Σ_N x = v(N)`.
pub fn core_point(game: &TUGame) -> Option<Vec<Rational>> {
    let n = game.players();
    let grand = game.grand();
    let rows: Vec<Constraint> = game
        .coalitions()
        .into_iter()
        .map(|s| {
            let rel = if s == grand { Relation::Eq } else { Relation::Ge };
            Constraint::new(indicator(n, s), rel, Q::from_integer(game.value(s) as i128))
        })
        .collect();
    let x = lp::feasible_point(n, &rows, true)?;
    Some(x.iter().map(|q| lp::narrow(q).expect("core vectors are bounded by v(N)")).collect())
}

/// How the coalitions of a balanced family are handed out as knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Assignment {
    /// Each coalition to its lowest-indexed member.
    Canonical,
    /// Every way of giving each coalition to one of its members (`n ≤ 3`).
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop51Report {
    /// Every minimal balanced family has an assignment with a nonempty
    /// unanimous integer acceptance set.
    pub hypothesis_holds: bool,
    /// Minimal balanced family for which no tried assignment works.
    pub failing_family: Option<Vec<Coalition>>,
    pub core_nonempty: bool,
}

impl Prop51Report {
    /// The hypothesis implies a nonempty core.
    pub fn implication_holds(&self) -> bool {
        !self.hypothesis_holds || self.core_nonempty
    }
}

/// Profiles `(𝕊_i)` whose union is `family`, each coalition known by exactly
/// one of its members. Knowing a coalition twice only shrinks the unanimous
/// set, so these suffice for the existential over `𝕂(ℬ)`.
fn assignments(n: usize, family: &[Coalition], mode: Assignment) -> Result<Vec<KnowledgeProfile>> {
    match mode {
        Assignment::Canonical => {
            let mut fams = vec![Vec::new(); n];
            for &s in family {
                let owner = s.members().next().expect("nonempty coalition");
                fams[owner - 1].push(s);
            }
            Ok(vec![KnowledgeProfile::new(fams)?])
        }
        Assignment::Exhaustive => {
            if n > 3 {
                return Err(Error::unsupported(format!("exhaustive assignment supports n <= 3, got {n}")));
            }
            let mut out = vec![vec![Vec::new(); n]];
            for &s in family {
                let mut next = Vec::new();
                for fams in &out {
                    for owner in s.members() {
                        let mut f: Vec<Vec<Coalition>> = fams.clone();
                        f[owner - 1].push(s);
                        next.push(f);
                    }
                }
                out = next;
            }
            out.into_iter().map(KnowledgeProfile::new).collect()
        }
    }
}

pub fn prop51_report(game: &TUGame, mode: Assignment) -> Result<Prop51Report> {
    let n = game.players();
    let mut failing_family = None;
    for b in minimal_balanced_families(n)? {
        let mut found = false;
        for profile in assignments(n, &b.family, mode)? {
            if !unanimous_acceptance_set(game, &profile)?.is_empty() {
                found = true;
                break;
            }
        }
        if !found {
            failing_family = Some(b.family);
            break;
        }
    }
    Ok(Prop51Report {
        hypothesis_holds: failing_family.is_none(),
        failing_family,
        core_nonempty: core_point(game).is_some(),
    })
}

/// Checks the implication "balanced knowledge with unanimous acceptance ⇒
/// nonempty core" on `game` with canonical assignments.
pub fn prop51_check(game: &TUGame) -> Result<bool> {
    Ok(prop51_report(game, Assignment::Canonical)?.implication_holds())
}

/// Weights keyed by coalition, for display.
pub fn weight_map(b: &BalancedFamily) -> BTreeMap<String, String> {
    b.family.iter().zip(&b.weights).map(|(s, w)| (s.key(), rational::format(w))).collect()
}
