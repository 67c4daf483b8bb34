//! Knowledge profiles `(𝕊_i)_i` and their relation to the core: unanimous
//! acceptance, core characterization, counterexamples for incomplete
//! profiles and the irrelevance of coalitions a player is not in.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::accept::{decide, normalize_family};
use crate::coalition::{all_coalitions, coalitions_containing, format_family, parse_family, Coalition, Player};
use crate::error::{Error, Result};
use crate::game::{core_membership, enumerate_integer_core, integer_sweep, PayoffVector, TUGame};

/// Per-player families of known coalitions; `families[i - 1]` is `𝕊_i`.
///
/// Families normally only hold coalitions containing their player. Others
/// are allowed (the irrelevance experiments need them) and reported by
/// [`KnowledgeProfile::hypothesis_violations`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct KnowledgeProfile {
    families: Vec<Vec<Coalition>>,
}

impl KnowledgeProfile {
    pub fn new(families: Vec<Vec<Coalition>>) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::invalid("a knowledge profile needs at least one player"));
        }
        let n = families.len();
        for (k, fam) in families.iter().enumerate() {
            if let Some(s) = fam.iter().find(|s| !s.within(n)) {
                return Err(Error::invalid(format!("family of player {} mentions {{{s}}} outside 1..={n}", k + 1)));
            }
        }
        Ok(KnowledgeProfile {
            families: families.iter().map(|f| normalize_family(f)).collect(),
        })
    }

    /// Everyone knows nothing.
    pub fn empty(n: usize) -> Self {
        KnowledgeProfile {
            families: vec![Vec::new(); n],
        }
    }

    /// `𝕊_i = {S : S ∋ i}` for every player.
    pub fn full(n: usize) -> Self {
        KnowledgeProfile {
            families: (1..=n).map(|i| coalitions_containing(n, i)).collect(),
        }
    }

    /// Parses one family per player in the `"1;1,2"` syntax.
    pub fn parse<S: AsRef<str>>(families: &[S]) -> Result<Self> {
        let fams = families.iter().map(|f| parse_family(f.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(fams)
    }

    pub fn players(&self) -> usize {
        self.families.len()
    }

    pub fn family(&self, i: Player) -> &[Coalition] {
        &self.families[i - 1]
    }

    pub fn families(&self) -> &[Vec<Coalition>] {
        &self.families
    }

    /// `∪_i 𝕊_i`
    pub fn union(&self) -> BTreeSet<Coalition> {
        self.families.iter().flatten().copied().collect()
    }

    /// Every coalition is known by somebody.
    pub fn is_covering(&self) -> bool {
        self.union().len() == (1usize << self.players()) - 1
    }

    /// First coalition (canonical order) nobody knows.
    pub fn first_unknown(&self) -> Option<Coalition> {
        let known = self.union();
        all_coalitions(self.players()).into_iter().find(|s| !known.contains(s))
    }

    /// Pairs `(i, S)` with `S ∈ 𝕊_i` but `i ∉ S`.
    pub fn hypothesis_violations(&self) -> Vec<(Player, Coalition)> {
        let mut out = Vec::new();
        for (k, fam) in self.families.iter().enumerate() {
            out.extend(fam.iter().filter(|s| !s.contains(k + 1)).map(|&s| (k + 1, s)));
        }
        out
    }
}

impl fmt::Debug for KnowledgeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.families.iter().map(|fam| format!("[{}]", format_family(fam))).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl TryFrom<Vec<String>> for KnowledgeProfile {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        KnowledgeProfile::parse(&v)
    }
}

impl From<KnowledgeProfile> for Vec<String> {
    fn from(p: KnowledgeProfile) -> Self {
        p.families.iter().map(|f| format_family(f)).collect()
    }
}

/// All profiles with `𝕊_i ⊆ {S : S ∋ i}`, player 1's family varying slowest.
/// `16^n` profiles for `n = 3`.
pub fn all_profiles(n: usize) -> Result<Vec<KnowledgeProfile>> {
    if n > 3 {
        return Err(Error::unsupported(format!("profile enumeration supports n <= 3, got {n}")));
    }
    let options: Vec<Vec<Vec<Coalition>>> = (1..=n).map(|i| subfamilies(&coalitions_containing(n, i))).collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for fam in opts {
                let mut p: Vec<Vec<Coalition>> = prefix.clone();
                p.push(fam.clone());
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(|families| KnowledgeProfile { families }).collect())
}

/// The covering profiles among [`all_profiles`].
pub fn covering_profiles(n: usize) -> Result<Vec<KnowledgeProfile>> {
    Ok(all_profiles(n)?.into_iter().filter(KnowledgeProfile::is_covering).collect())
}

/// Every subset of `items`, by bitmask order.
pub fn subfamilies(items: &[Coalition]) -> Vec<Vec<Coalition>> {
    (0..1u64 << items.len())
        .map(|m| (0..items.len()).filter(|k| m >> k & 1 == 1).map(|k| items[k]).collect())
        .collect()
}

fn check_players(game: &TUGame, profile: &KnowledgeProfile) -> Result<()> {
    if profile.players() != game.players() {
        return Err(Error::invalid(format!(
            "profile has {} families, game has {} players",
            profile.players(),
            game.players()
        )));
    }
    Ok(())
}

/// `x` is accepted by every player under `profile`.
pub fn unanimously_accepted(game: &TUGame, profile: &KnowledgeProfile, x: &PayoffVector) -> Result<bool> {
    check_players(game, profile)?;
    for i in 1..=game.players() {
        if !decide(game, i, profile.family(i), x)?.is_acceptable() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer `x` with `Σx ≤ v(N)` accepted by every player, lexicographic order.
pub fn unanimous_acceptance_set(game: &TUGame, profile: &KnowledgeProfile) -> Result<Vec<PayoffVector>> {
    check_players(game, profile)?;
    let mut out = Vec::new();
    for x in integer_sweep(game) {
        if unanimously_accepted(game, profile, &x)? {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub game: String,
    pub profile: KnowledgeProfile,
    pub characterizes_core: bool,
    /// Unanimously accepted vectors outside the core.
    pub violations: Vec<PayoffVector>,
    pub warnings: Vec<String>,
}

/// Compares the unanimous acceptance set with the integer core. Core vectors
/// are never rejected, so the two agree iff no vector outside the core is
/// unanimously accepted.
pub fn characterizes_core(game: &TUGame, profile: &KnowledgeProfile) -> Result<ProfileReport> {
    let accepted = unanimous_acceptance_set(game, profile)?;
    let core: BTreeSet<PayoffVector> = enumerate_integer_core(game).into_iter().collect();
    let violations: Vec<PayoffVector> = accepted.iter().filter(|x| !core.contains(x)).cloned().collect();
    debug_assert!(core.iter().all(|x| accepted.binary_search(x).is_ok()));
    let warnings = profile
        .hypothesis_violations()
        .into_iter()
        .map(|(i, s)| format!("player {i} knows {{{s}}} without belonging to it"))
        .collect();
    Ok(ProfileReport {
        game: game_id(game),
        profile: profile.clone(),
        characterizes_core: violations.is_empty(),
        violations,
        warnings,
    })
}

/// Short identifier of a game: its values in canonical coalition order.
pub fn game_id(game: &TUGame) -> String {
    let values: Vec<String> = game.coalitions().into_iter().map(|s| game.value(s).to_string()).collect();
    format!("n{}:{}", game.players(), values.join(","))
}

/// The game `v(N) = v(missing) = n`, `v = 0` elsewhere, and a vector outside
/// its core that every player accepts when nobody knows `missing`.
pub fn counterexample_game(n: usize, missing: Coalition) -> Result<(TUGame, PayoffVector)> {
    if n == 0 || !missing.within(n) {
        return Err(Error::invalid(format!("coalition {{{missing}}} is not a coalition of 1..={n}")));
    }
    let grand = Coalition::grand(n);
    let game = TUGame::from_fn(n, None, |s| if s == grand || s == missing { n as i64 } else { 0 })?;
    let x = if missing == grand { vec![0; n] } else { vec![1; n] };
    let x = game.integer_payoff(&x)?;
    debug_assert!(!core_membership(&game, &x)?);
    Ok((game, x))
}

/// Adding `t` (with `i ∉ t`) to `𝕊_i` changes no verdict of player `i` on
/// integer `x` with `Σx ≤ v(N)`.
pub fn irrelevance_invariance(game: &TUGame, i: Player, family: &[Coalition], t: Coalition) -> Result<bool> {
    if t.contains(i) {
        return Err(Error::invalid(format!("player {i} belongs to {{{t}}}")));
    }
    let family = normalize_family(family);
    if family.contains(&t) {
        return Err(Error::invalid(format!("{{{t}}} is already known to player {i}")));
    }
    let mut extended = family.clone();
    extended.push(t);
    for x in integer_sweep(game) {
        if decide(game, i, &family, &x)? != decide(game, i, &extended, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coalition {
        s.parse().unwrap()
    }

    fn g2() -> TUGame {
        TUGame::from_fn(2, None, |s| match s.mask() {
            1 => 10,
            2 => 10,
            _ => 30,
        })
        .unwrap()
    }

    #[test]
    fn g2_profiles() {
        let g = g2();
        let full = KnowledgeProfile::full(2);
        let accepted = unanimous_acceptance_set(&g, &full).unwrap();
        assert_eq!(accepted, enumerate_integer_core(&g));
        assert_eq!(accepted.len(), 11);
        let empty = unanimous_acceptance_set(&g, &KnowledgeProfile::empty(2)).unwrap();
        assert_eq!(empty.len(), integer_sweep(&g).len());
        let own = KnowledgeProfile::parse(&["1", "2"]).unwrap();
        let report = characterizes_core(&g, &own).unwrap();
        assert!(!report.characterizes_core);
        assert!(report.violations.contains(&g.integer_payoff(&[10, 10]).unwrap()));
        assert!(characterizes_core(&g, &full).unwrap().characterizes_core);
    }

    #[test]
    fn profile_counts() {
        assert_eq!(all_profiles(2).unwrap().len(), 16);
        assert_eq!(all_profiles(3).unwrap().len(), 4096);
        // {1,2} must be known by someone, singletons by their owner
        assert_eq!(covering_profiles(2).unwrap().len(), 3);
    }

    #[test]
    fn counterexamples() {
        let (g, x) = counterexample_game(3, c("1,2")).unwrap();
        assert_eq!(g.value(c("1,2")), 3);
        assert_eq!(g.value(c("1,2,3")), 3);
        assert_eq!(g.value(c("1,3")), 0);
        assert_eq!(x, g.integer_payoff(&[1, 1, 1]).unwrap());
        let (_, x) = counterexample_game(2, c("1,2")).unwrap();
        assert_eq!(x.entries(), g2().integer_payoff(&[0, 0]).unwrap().entries());
    }

    #[test]
    fn irrelevance_guards() {
        let g = g2();
        assert!(irrelevance_invariance(&g, 1, &[c("1")], c("2")).unwrap());
        assert!(irrelevance_invariance(&g, 1, &[], c("1,2")).is_err());
        assert!(irrelevance_invariance(&g, 1, &[c("2")], c("2")).is_err());
    }

    #[test]
    fn warnings_for_foreign_coalitions() {
        let p = KnowledgeProfile::parse(&["1;2", "2"]).unwrap();
        let r = characterizes_core(&g2(), &p).unwrap();
        assert_eq!(r.warnings.len(), 1);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1;2","2"]"#);
        let back: KnowledgeProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
