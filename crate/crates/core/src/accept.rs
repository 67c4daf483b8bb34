//! C-acceptability: the criterion `C_i(x)`, knowledge sets `Γ_i(𝕊_i)`, the
//! decision procedure and proof emission for both verdicts.
//!
//! `C_i(x^N) = ¬ ⋁_{S∋i} ⋁_{y^S ∈ At₁} (y^S ∧ y^S ≥_S x^N ∧ y^S >_i x^N)`.
//!
//! The proof templates are generic over a finite set of candidate atoms and a
//! comparison oracle, so the same code serves TU games (grid comparison) and
//! exchange economies (utility comparison).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::coalition::{Coalition, Player};
use crate::error::{Error, Result};
use crate::game::{PayoffVector, TUGame};
use crate::logic::{Atom, Cedent, ComparisonOracle, Formula, GridOracle, Meta, ProofTree, Rule, SharedSet, ThoughtSequent};
use crate::point::Point;
use crate::rational::Rational;

/// Largest `|At₁|` materialized for knowledge sets and criterion formulae.
pub const MAX_ATOMS: usize = 4_000_000;

/// Why an acceptable payoff vector is accepted: the case of the completeness
/// argument that applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AcceptCase {
    /// No `y^S` (`S ∋ i`) weakly dominates `x` on `S`.
    #[serde(rename = "case-1")]
    NothingComparable,
    /// Every weakly dominating `y^S` is negated in `Γ_i`.
    #[serde(rename = "case-2.1")]
    AllNegated,
    /// Some weakly dominating `y^S` is known, but none improves `i` strictly.
    #[serde(rename = "case-2.2")]
    NoStrictImprovement,
}

impl fmt::Display for AcceptCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcceptCase::NothingComparable => "case 1",
            AcceptCase::AllNegated => "case 2.1",
            AcceptCase::NoStrictImprovement => "case 2.2 (empty d)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Acceptable {
        case: AcceptCase,
    },
    Unacceptable {
        coalition: Coalition,
        witness: PayoffVector,
    },
}

impl Verdict {
    pub fn is_acceptable(&self) -> bool {
        matches!(self, Verdict::Acceptable { .. })
    }

    /// Same polarity and, for acceptance, the same case.
    pub fn agrees_with(&self, other: &Verdict) -> bool {
        match (self, other) {
            (Verdict::Acceptable { case: a }, Verdict::Acceptable { case: b }) => a == b,
            (Verdict::Unacceptable { .. }, Verdict::Unacceptable { .. }) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Acceptable { case } => write!(f, "acceptable ({case})"),
            Verdict::Unacceptable { coalition, witness } => {
                write!(f, "unacceptable: {witness}^{{{coalition}}} improves via {{{coalition}}}")
            }
        }
    }
}

/// Sorted, duplicate-free copy of a knowledge family.
pub fn normalize_family(family: &[Coalition]) -> Vec<Coalition> {
    let mut f = family.to_vec();
    f.sort();
    f.dedup();
    f
}

fn check_family(game: &TUGame, family: &[Coalition]) -> Result<()> {
    for s in family {
        if !s.within(game.players()) {
            return Err(Error::invalid(format!("coalition {} mentions a player outside the game", s.key())));
        }
    }
    Ok(())
}

fn check_query(game: &TUGame, i: Player, x: &PayoffVector) -> Result<()> {
    if i == 0 || i > game.players() {
        return Err(Error::invalid(format!("player {i} outside 1..={}", game.players())));
    }
    if x.len() != game.players() {
        return Err(Error::invalid(format!(
            "payoff vector has {} entries, game has {} players",
            x.len(),
            game.players()
        )));
    }
    Ok(())
}

/// Grid vectors of the game's `At₁`: multiples of `1/n` in `[0, M]^n`,
/// lexicographic order.
pub fn grid_points(game: &TUGame) -> Result<Vec<Point>> {
    let n = game.players();
    let steps = (game.bound() * n as i64 + 1) as usize;
    let count = steps
        .checked_pow(n as u32)
        .filter(|c| c.saturating_mul((1usize << n) - 1) <= MAX_ATOMS)
        .ok_or_else(|| Error::unsupported(format!("At1 for {n} players with bound {} is too large", game.bound())))?;
    let values: Vec<Rational> = (0..steps as i64).map(|k| Rational::new(k, n as i64)).collect();
    let mut out = Vec::with_capacity(count);
    let mut idx = vec![0usize; n];
    loop {
        out.push(Point::new(idx.iter().map(|&k| values[k]).collect()));
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < steps {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `y ∈ I(S)`: `Σ_S y ≤ v(S)`, with coordinates outside `S` fixed at 0.
pub fn in_knowledge_set(game: &TUGame, s: Coalition, y: &Point) -> bool {
    let mut sum = Rational::from_integer(0);
    for p in 1..=game.players() {
        if s.contains(p) {
            sum += y.get(p);
        } else if y.get(p) != Rational::from_integer(0) {
            return false;
        }
    }
    sum <= Rational::from_integer(game.value(s))
}

/// `I(S)` as atoms `y^S`, lexicographic in `y`.
pub fn knowledge_set(game: &TUGame, s: Coalition) -> Result<Vec<Atom>> {
    Ok(grid_points(game)?
        .into_iter()
        .filter(|y| in_knowledge_set(game, s, y))
        .map(|y| Atom::ach(y, s))
        .collect())
}

/// `Γ_i(𝕊_i)`: `y^S` for every `y^S ∈ ⋃_{S∈𝕊} I(S)`, `¬y^S` for every other
/// atom of `At₁`.
pub fn gamma(game: &TUGame, family: &[Coalition]) -> Result<BTreeSet<Formula>> {
    let logic = GameLogic::new(game)?;
    Ok(logic.gamma(family)?.as_ref().clone())
}

/// One disjunct `y^S ∧ y^S ≥_S x^U ∧ y^S >_i x^U` of the criterion.
pub fn improvement(i: Player, s: Coalition, y: &Point, x: &Point, x_tag: Coalition) -> Formula {
    Formula::and(vec![
        Formula::atom(Atom::ach(y.clone(), s)),
        Formula::atom(Atom::geq(y.clone(), s, s, x.clone(), x_tag)),
        Formula::strict(y.clone(), s, Coalition::singleton(i), x.clone(), x_tag),
    ])
}

/// The criterion `C_i(x^U)` over a finite list of candidate atoms `y^S`,
/// keeping the disjuncts aligned with their atoms.
#[derive(Clone)]
pub struct Criterion {
    pub agent: Player,
    pub target: Point,
    pub target_tag: Coalition,
    /// `(S, y)` per disjunct, in the disjunction's order.
    pub candidates: Vec<(Coalition, Point)>,
    /// `⋁(…)`; the criterion itself is its negation.
    pub disjunction: Formula,
    pub formula: Formula,
    /// Knowledge-independent refutations per disjunct, built on first use
    /// and shared by the proofs for different knowledge sets.
    refutations: Vec<[OnceLock<ProofTree>; 3]>,
}

impl Criterion {
    /// Candidates must contain the agent in their coalition and be distinct.
    pub fn new(agent: Player, target: Point, target_tag: Coalition, candidates: Vec<(Coalition, Point)>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::invalid("the criterion needs at least one candidate atom"));
        }
        if let Some((s, _)) = candidates.iter().find(|(s, _)| !s.contains(agent)) {
            return Err(Error::invalid(format!("candidate coalition {} does not contain player {agent}", s.key())));
        }
        let mut pairs: Vec<(Formula, (Coalition, Point))> = candidates
            .into_iter()
            .map(|(s, y)| (improvement(agent, s, &y, &target, target_tag), (s, y)))
            .collect();
        if !pairs.windows(2).all(|w| w[0].0 < w[1].0) {
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
            pairs.dedup_by(|a, b| a.0 == b.0);
        }
        let (disjuncts, candidates): (Vec<Formula>, Vec<(Coalition, Point)>) = pairs.into_iter().unzip();
        let disjunction = Formula::or(disjuncts);
        let formula = Formula::not(disjunction.clone());
        let refutations = (0..candidates.len()).map(|_| Default::default()).collect();
        Ok(Criterion {
            agent,
            target,
            target_tag,
            candidates,
            disjunction,
            formula,
            refutations,
        })
    }

    pub fn disjuncts(&self) -> &[Formula] {
        self.disjunction.members().expect("disjunction")
    }

    /// `¬C_i(x)`, with the double negation kept.
    pub fn negation(&self) -> Formula {
        Formula::not(self.formula.clone())
    }

    fn strict(&self, s: Coalition, y: &Point) -> Formula {
        Formula::strict(y.clone(), s, Coalition::singleton(self.agent), self.target.clone(), self.target_tag)
    }

    fn weak(&self, s: Coalition, y: &Point) -> Formula {
        Formula::atom(Atom::geq(y.clone(), s, s, self.target.clone(), self.target_tag))
    }
}

/// Per-game cache of the grid, so that knowledge sets and criteria for many
/// queries share their atoms.
pub struct GameLogic<'g> {
    game: &'g TUGame,
    grid: Vec<Point>,
}

impl<'g> GameLogic<'g> {
    pub fn new(game: &'g TUGame) -> Result<Self> {
        Ok(GameLogic {
            game,
            grid: grid_points(game)?,
        })
    }

    pub fn game(&self) -> &TUGame {
        self.game
    }

    pub fn grid(&self) -> &[Point] {
        &self.grid
    }

    /// Number of atoms in `At₁`.
    pub fn at1_len(&self) -> usize {
        self.grid.len() * ((1usize << self.game.players()) - 1)
    }

    pub fn gamma(&self, family: &[Coalition]) -> Result<SharedSet> {
        check_family(self.game, family)?;
        let family = normalize_family(family);
        let mut set = BTreeSet::new();
        for s in self.game.coalitions() {
            let known = family.binary_search(&s).is_ok();
            for y in &self.grid {
                let atom = Formula::atom(Atom::ach(y.clone(), s));
                if known && in_knowledge_set(self.game, s, y) {
                    set.insert(atom);
                } else {
                    set.insert(Formula::not(atom));
                }
            }
        }
        Ok(Arc::new(set))
    }

    pub fn criterion(&self, i: Player, x: &PayoffVector) -> Result<Criterion> {
        check_query(self.game, i, x)?;
        let mut candidates = Vec::new();
        for s in self.game.coalitions().into_iter().filter(|s| s.contains(i)) {
            for y in &self.grid {
                candidates.push((s, y.clone()));
            }
        }
        Criterion::new(i, x.point().clone(), self.game.grand(), candidates)
    }

    /// Verdict plus a proof of the matching root sequent.
    pub fn prove(&self, i: Player, family: &[Coalition], gamma: &SharedSet, x: &PayoffVector) -> Result<(Verdict, ProofTree)> {
        let criterion = self.criterion(i, x)?;
        self.prove_with(&criterion, family, gamma, x)
    }

    /// [`GameLogic::prove`] with a criterion already built for `(i, x)`.
    pub fn prove_with(&self, criterion: &Criterion, family: &[Coalition], gamma: &SharedSet, x: &PayoffVector) -> Result<(Verdict, ProofTree)> {
        if criterion.target != *x.point() {
            return Err(Error::invalid("criterion was built for a different payoff vector"));
        }
        let verdict = decide(self.game, criterion.agent, family, x)?;
        let proof = match &verdict {
            Verdict::Unacceptable { coalition, witness } => {
                prove_unacceptable(criterion, gamma, *coalition, witness.point(), &GridOracle)?
            }
            Verdict::Acceptable { .. } => {
                let family = normalize_family(family);
                let negated = |s: Coalition, y: &Point| family.binary_search(&s).is_err() || !in_knowledge_set(self.game, s, y);
                prove_acceptable_with(criterion, gamma, &negated, &GridOracle)?
            }
        };
        Ok((verdict, proof))
    }
}

/// `C_i(x^N)` for a game.
pub fn c_formula(game: &TUGame, i: Player, x: &PayoffVector) -> Result<Formula> {
    Ok(GameLogic::new(game)?.criterion(i, x)?.formula)
}

/// Decides `⊢ B_i[Γ_i(𝕊_i) → C_i(x)]` (acceptable) versus
/// `⊢ B_i[Γ_i(𝕊_i) → ¬C_i(x)]` (unacceptable).
///
/// `x` is unacceptable iff some known `S ∋ i` has `Σ_S x < v(S)`; the witness
/// for the first such `S` keeps `x` on `S ∖ {i}`, gives `i` the rest of
/// `v(S)` and is 0 off `S`.
pub fn decide(game: &TUGame, i: Player, family: &[Coalition], x: &PayoffVector) -> Result<Verdict> {
    check_query(game, i, x)?;
    check_family(game, family)?;
    let family = normalize_family(family);
    let mut any_known = false;
    for &s in family.iter().filter(|s| s.contains(i)) {
        let value = Rational::from_integer(game.value(s));
        let sum = x.sum_over(s);
        if sum < value {
            let entries = (1..=game.players())
                .map(|p| {
                    if p == i {
                        value - (sum - x.get(i))
                    } else if s.contains(p) {
                        x.get(p)
                    } else {
                        Rational::from_integer(0)
                    }
                })
                .collect();
            let witness = game.payoff(entries)?;
            return Ok(Verdict::Unacceptable { coalition: s, witness });
        }
        any_known |= sum <= value;
    }
    let case = if any_known {
        AcceptCase::NoStrictImprovement
    } else {
        AcceptCase::AllNegated
    };
    Ok(Verdict::Acceptable { case })
}

/// The case analysis of the completeness argument, run literally over `At₁`:
/// `D_i` = atoms `y^S` (`S ∋ i`) with `y ≥_S x`; `d_i` = those in `Γ_i`
/// with `y_i > x_i`. Slow; used to cross-check [`decide`].
pub fn decide_by_cases(logic: &GameLogic<'_>, i: Player, family: &[Coalition], x: &PayoffVector) -> Result<Verdict> {
    let game = logic.game();
    check_query(game, i, x)?;
    check_family(game, family)?;
    let family = normalize_family(family);
    let oracle = GridOracle;
    let mut d_nonempty_known = false;
    let mut d_exists = false;
    for s in game.coalitions().into_iter().filter(|s| s.contains(i)) {
        let known = family.binary_search(&s).is_ok();
        for y in logic.grid() {
            if !oracle.weakly_above(y, x.point(), s) {
                continue;
            }
            d_exists = true;
            if !(known && in_knowledge_set(game, s, y)) {
                continue;
            }
            d_nonempty_known = true;
            if y.get(i) > x.get(i) {
                let witness = game.payoff(y.entries().to_vec())?;
                return Ok(Verdict::Unacceptable { coalition: s, witness });
            }
        }
    }
    let case = if !d_exists {
        AcceptCase::NothingComparable
    } else if !d_nonempty_known {
        AcceptCase::AllNegated
    } else {
        AcceptCase::NoStrictImprovement
    };
    Ok(Verdict::Acceptable { case })
}

/// Proof of `B_i[Γ_i(𝕊_i) → C_i(x)]` or `B_i[Γ_i(𝕊_i) → ¬C_i(x)]` per
/// [`decide`].
pub fn emit_proof(game: &TUGame, i: Player, family: &[Coalition], x: &PayoffVector) -> Result<ProofTree> {
    let logic = GameLogic::new(game)?;
    let gamma = logic.gamma(family)?;
    Ok(logic.prove(i, family, &gamma, x)?.1)
}

fn seq(agent: Player, ante: Cedent, succ: Cedent) -> ThoughtSequent {
    ThoughtSequent::of(agent, ante, succ)
}

fn axiom(agent: Player, a: &Formula) -> ProofTree {
    ProofTree::leaf(seq(agent, Cedent::single(a.clone()), Cedent::single(a.clone())), Rule::LogicalAxiom)
}

fn nonlogical(agent: Player, a: Formula) -> ProofTree {
    ProofTree::leaf(seq(agent, Cedent::empty(), Cedent::single(a)), Rule::NonLogicalAxiom)
}

fn th(sequent: ThoughtSequent, premise: ProofTree) -> ProofTree {
    ProofTree::node(sequent, Rule::Th, Meta::none(), vec![premise])
}

/// Proof of `B_i[Γ → ¬C_i(x)]` from a known atom `y^S ∈ Γ` that weakly
/// dominates `x` on `S` and strictly improves `i`.
pub fn prove_unacceptable(
    c: &Criterion,
    gamma: &SharedSet,
    s: Coalition,
    y: &Point,
    oracle: &dyn ComparisonOracle,
) -> Result<ProofTree> {
    let i = c.agent;
    let ach = Formula::atom(Atom::ach(y.clone(), s));
    if !gamma.contains(&ach) {
        return Err(Error::invalid(format!("{ach:?} is not in the knowledge set")));
    }
    let me = Coalition::singleton(i);
    if !oracle.weakly_above(y, &c.target, s) || oracle.compare(y, &c.target, i) != std::cmp::Ordering::Greater {
        return Err(Error::invalid(format!("{y:?} does not improve on the target via {{{s}}}")));
    }
    let disjunct = improvement(i, s, y, &c.target, c.target_tag);
    if c.disjuncts().binary_search(&disjunct).is_err() {
        return Err(Error::invalid(format!("{ach:?} is not a candidate of the criterion")));
    }
    let weak = c.weak(s, y);
    let strict = c.strict(s, y);
    let single = |f: &Formula| Cedent::single(f.clone());
    let g = || Cedent::shared(gamma.clone());

    let weak_proof = th(seq(i, single(&ach), single(&weak)), nonlogical(i, weak.clone()));
    let up = Formula::atom(Atom::geq(y.clone(), s, me, c.target.clone(), c.target_tag));
    let down = Formula::not(Formula::atom(Atom::geq(c.target.clone(), c.target_tag, me, y.clone(), s)));
    let strict_members: Vec<ProofTree> = strict
        .members()
        .expect("conjunction")
        .iter()
        .map(|m| {
            debug_assert!(*m == up || *m == down);
            nonlogical(i, m.clone())
        })
        .collect();
    let strict_proof = th(
        seq(i, single(&ach), single(&strict)),
        ProofTree::node(seq(i, Cedent::empty(), single(&strict)), Rule::AndRight, Meta::principal(strict.clone()), strict_members),
    );
    let mut parts = Vec::with_capacity(3);
    for m in disjunct.members().expect("conjunction") {
        if *m == ach {
            parts.push(axiom(i, &ach));
        } else if *m == weak {
            parts.push(weak_proof.clone());
        } else {
            parts.push(strict_proof.clone());
        }
    }
    let conj = ProofTree::node(seq(i, single(&ach), single(&disjunct)), Rule::AndRight, Meta::principal(disjunct.clone()), parts);
    let lifted = th(seq(i, g(), single(&disjunct)), conj);
    let or = ProofTree::node(
        seq(i, g(), single(&c.disjunction)),
        Rule::OrRight,
        Meta::chosen(c.disjunction.clone(), disjunct.clone()),
        vec![lifted],
    );
    let neg = ProofTree::node(
        seq(i, Cedent::shared_with(gamma.clone(), [c.formula.clone()]), Cedent::empty()),
        Rule::NotLeft,
        Meta::principal(c.formula.clone()),
        vec![or],
    );
    let negation = c.negation();
    Ok(ProofTree::node(seq(i, g(), single(&negation)), Rule::NotRight, Meta::principal(negation), vec![neg]))
}

/// Proof of `B_i[Γ → C_i(x)]`: every disjunct `A` is refuted as
/// `B_i[A, Γ →]`, then (∨→) and (→¬). A disjunct for `y^S` is refuted by
/// `¬y^S ∈ Γ`, else by `x_i ≥ y_i` (strictness fails), else by `y ≱_S x`.
pub fn prove_acceptable(c: &Criterion, gamma: &SharedSet, oracle: &dyn ComparisonOracle) -> Result<ProofTree> {
    let negated = |s: Coalition, y: &Point| gamma.contains(&Formula::not(Formula::atom(Atom::ach(y.clone(), s))));
    prove_acceptable_with(c, gamma, &negated, oracle)
}

/// [`prove_acceptable`] with `negated(S, y)` answering `¬y^S ∈ Γ` without a
/// set lookup.
pub fn prove_acceptable_with(
    c: &Criterion,
    gamma: &SharedSet,
    negated: &dyn Fn(Coalition, &Point) -> bool,
    oracle: &dyn ComparisonOracle,
) -> Result<ProofTree> {
    let i = c.agent;
    let mut branches = Vec::with_capacity(c.candidates.len());
    for (k, (s, y)) in c.candidates.iter().enumerate() {
        branches.push(refute(c, gamma, k, negated(*s, y), oracle)?);
    }
    let or_ante = Cedent::shared_with(gamma.clone(), [c.disjunction.clone()]);
    let or = ProofTree::node(seq(i, or_ante, Cedent::empty()), Rule::OrLeft, Meta::principal(c.disjunction.clone()), branches);
    Ok(ProofTree::node(
        seq(i, Cedent::shared(gamma.clone()), Cedent::single(c.formula.clone())),
        Rule::NotRight,
        Meta::principal(c.formula.clone()),
        vec![or],
    ))
}

/// `B_i[A, Γ →]` for the `k`-th disjunct `A`.
///
/// The refutation of `A` alone (`B_i[y^S, ¬y^S →]`, `B_i[y^S >_i x →]` or
/// `B_i[y^S ≥_S x →]`) does not mention `Γ` and is cached on the criterion;
/// (Th) and (∧→) then bring it into the context `Γ`.
fn refute(c: &Criterion, gamma: &SharedSet, k: usize, negated: bool, oracle: &dyn ComparisonOracle) -> Result<ProofTree> {
    let i = c.agent;
    let (s, y) = &c.candidates[k];
    let disjunct = &c.disjuncts()[k];
    let parts = disjunct.members().expect("conjunction");
    let pick = |shape: fn(&Formula) -> bool| parts.iter().find(|f| shape(f)).expect("criterion disjunct");
    let ach = pick(|f| matches!(f, Formula::Atom(Atom::Ach { .. })));
    let strict = pick(|f| matches!(f, Formula::And(_)));
    let weak = pick(|f| matches!(f, Formula::Atom(Atom::Geq { .. })));

    let (slot, chosen) = if negated {
        (0, ach)
    } else if oracle.compare(&c.target, y, i) != std::cmp::Ordering::Less {
        (1, strict)
    } else if !oracle.weakly_above(y, &c.target, *s) {
        (2, weak)
    } else {
        return Err(Error::invalid(format!("the disjunct for {y:?}^{{{s}}} cannot be refuted: the criterion fails")));
    };
    let core = c.refutations[k][slot].get_or_init(|| match slot {
        0 => {
            let not_ach = Formula::not(ach.clone());
            ProofTree::node(
                seq(i, Cedent::from_formulas([not_ach.clone(), ach.clone()]), Cedent::empty()),
                Rule::NotLeft,
                Meta::principal(not_ach),
                vec![axiom(i, ach)],
            )
        }
        1 => {
            let me = Coalition::singleton(i);
            let back = Formula::atom(Atom::geq(c.target.clone(), c.target_tag, me, y.clone(), *s));
            let not_back = Formula::not(back.clone());
            let flipped = ProofTree::node(
                seq(i, Cedent::single(not_back.clone()), Cedent::empty()),
                Rule::NotLeft,
                Meta::principal(not_back.clone()),
                vec![nonlogical(i, back)],
            );
            ProofTree::node(
                seq(i, Cedent::single(strict.clone()), Cedent::empty()),
                Rule::AndLeft,
                Meta::chosen(strict.clone(), not_back),
                vec![flipped],
            )
        }
        _ => {
            let not_weak = Formula::not(weak.clone());
            let clash = ProofTree::node(
                seq(i, Cedent::from_formulas([not_weak.clone(), weak.clone()]), Cedent::empty()),
                Rule::NotLeft,
                Meta::principal(not_weak.clone()),
                vec![axiom(i, weak)],
            );
            ProofTree::node(
                seq(i, Cedent::single(weak.clone()), Cedent::empty()),
                Rule::Cut,
                Meta::principal(not_weak.clone()),
                vec![nonlogical(i, not_weak), clash],
            )
        }
    });
    let with_gamma = |f: &Formula| Cedent::shared_with(gamma.clone(), [f.clone()]);
    let lifted = th(seq(i, with_gamma(chosen), Cedent::empty()), core.clone());
    Ok(ProofTree::node(
        seq(i, with_gamma(disjunct), Cedent::empty()),
        Rule::AndLeft,
        Meta::chosen(disjunct.clone(), chosen.clone()),
        vec![lifted],
    ))
}
