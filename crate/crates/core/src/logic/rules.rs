//! The KD sequent calculus: one logical axiom scheme, the structural rules
//! (Th) and (Cut), eight operational rules and the epistemic distribution
//! rule, plus the non-logical comparison axioms.
//!
//! Antecedents and succedents are sets, so a rule instance is checked by
//! recovering the side context: for a principal formula `P` in a conclusion
//! side `C`, the context is either `C ∖ {P}` or `C` itself (when `P` also
//! occurs in the context). Premises must then equal the context plus the
//! side formula exactly.

use std::fmt;
use std::str::FromStr;

use crate::coalition::Player;
use crate::error::{Error, Result};

use super::formula::{Atom, Formula};
use super::oracle::ComparisonOracle;
use super::sequent::{Cedent, ThoughtSequent};

/// Rule tags of proof-tree nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    LogicalAxiom,
    NonLogicalAxiom,
    Th,
    Cut,
    NotLeft,
    NotRight,
    ImpLeft,
    ImpRight,
    AndLeft,
    AndRight,
    OrLeft,
    OrRight,
    EpistemicDist,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::LogicalAxiom,
        Rule::NonLogicalAxiom,
        Rule::Th,
        Rule::Cut,
        Rule::NotLeft,
        Rule::NotRight,
        Rule::ImpLeft,
        Rule::ImpRight,
        Rule::AndLeft,
        Rule::AndRight,
        Rule::OrLeft,
        Rule::OrRight,
        Rule::EpistemicDist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::LogicalAxiom => "LogicalAxiom",
            Rule::NonLogicalAxiom => "NonLogicalAxiom",
            Rule::Th => "Th",
            Rule::Cut => "Cut",
            Rule::NotLeft => "NotLeft",
            Rule::NotRight => "NotRight",
            Rule::ImpLeft => "ImpLeft",
            Rule::ImpRight => "ImpRight",
            Rule::AndLeft => "AndLeft",
            Rule::AndRight => "AndRight",
            Rule::OrLeft => "OrLeft",
            Rule::OrRight => "OrRight",
            Rule::EpistemicDist => "EpistemicDist",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, Rule::LogicalAxiom | Rule::NonLogicalAxiom)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown rule tag {s:?}")))
    }
}

/// Rule-specific data of a proof node.
///
/// `principal` is the compound formula introduced by an operational rule (or
/// the cut formula for Cut); `chosen` is the member `A ∈ Φ` picked by
/// (∧→) and (→∨); `agent` is the `i` of the epistemic distribution rule.
/// When `principal` is absent the checker searches the conclusion for one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Meta {
    pub principal: Option<Formula>,
    pub chosen: Option<Formula>,
    pub agent: Option<Player>,
}

impl Meta {
    pub fn none() -> Self {
        Meta::default()
    }

    pub fn principal(f: Formula) -> Self {
        Meta {
            principal: Some(f),
            ..Meta::default()
        }
    }

    pub fn chosen(principal: Formula, chosen: Formula) -> Self {
        Meta {
            principal: Some(principal),
            chosen: Some(chosen),
            agent: None,
        }
    }

    pub fn agent(agent: Player) -> Self {
        Meta {
            agent: Some(agent),
            ..Meta::default()
        }
    }
}

/// Why a rule instance was rejected.
pub type Violation = String;

type Check = std::result::Result<(), Violation>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `ts` is an instance of a non-logical axiom: `B_e[→ y ≥_S x]` with
/// `y_p ≥ x_p` on `S`, or `B_e[→ ¬(y ≥_S x)]` with `y_p < x_p` for some
/// `p ∈ S`, per the oracle.
pub fn is_nonlogical_axiom(ts: &ThoughtSequent, oracle: &dyn ComparisonOracle) -> bool {
    check_nonlogical(ts, oracle).is_ok()
}

pub(crate) fn check_nonlogical(ts: &ThoughtSequent, oracle: &dyn ComparisonOracle) -> Check {
    ensure(ts.ante.is_empty(), || "non-logical axioms have an empty antecedent".into())?;
    ensure(ts.succ.len() == 1, || "non-logical axioms have exactly one succedent formula".into())?;
    let f = ts.succ.iter().next().expect("one formula");
    let (atom, negated) = match f {
        Formula::Atom(a) => (a, false),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => (a, true),
            _ => return Err("non-logical axiom must be a comparison atom or its negation".into()),
        },
        _ => return Err("non-logical axiom must be a comparison atom or its negation".into()),
    };
    let Atom::Geq { within, left, right, .. } = atom else {
        return Err("non-logical axioms only concern comparison atoms".into());
    };
    let covered = within
        .members()
        .all(|p| oracle.covers(left, p) && oracle.covers(right, p));
    ensure(covered, || format!("comparison coalition {within} exceeds the payoff vectors"))?;
    if negated {
        ensure(oracle.somewhere_below(left, right, *within), || {
            format!("{f:?}: no member of {{{within}}} is strictly worse off")
        })
    } else {
        ensure(oracle.weakly_above(left, right, *within), || {
            format!("{f:?}: some member of {{{within}}} is strictly worse off")
        })
    }
}

/// Checks that `(conclusion, premises)` instantiate `rule`.
pub fn rule_instance_valid(
    conclusion: &ThoughtSequent,
    premises: &[&ThoughtSequent],
    rule: Rule,
    meta: &Meta,
    oracle: &dyn ComparisonOracle,
) -> bool {
    check_rule(conclusion, premises, rule, meta, oracle).is_ok()
}

/// Like [`rule_instance_valid`] with the rule given as its tag string;
/// unknown tags are an error.
pub fn rule_instance_valid_tag(
    conclusion: &ThoughtSequent,
    premises: &[&ThoughtSequent],
    tag: &str,
    meta: &Meta,
    oracle: &dyn ComparisonOracle,
) -> Result<bool> {
    let rule: Rule = tag.parse()?;
    Ok(rule_instance_valid(conclusion, premises, rule, meta, oracle))
}

pub(crate) fn check_rule(
    c: &ThoughtSequent,
    premises: &[&ThoughtSequent],
    rule: Rule,
    meta: &Meta,
    oracle: &dyn ComparisonOracle,
) -> Check {
    let arity_ok = match rule {
        Rule::LogicalAxiom | Rule::NonLogicalAxiom => premises.is_empty(),
        Rule::Th | Rule::NotLeft | Rule::NotRight | Rule::ImpRight | Rule::AndLeft | Rule::OrRight | Rule::EpistemicDist => {
            premises.len() == 1
        }
        Rule::Cut | Rule::ImpLeft => premises.len() == 2,
        Rule::AndRight | Rule::OrLeft => !premises.is_empty(),
    };
    ensure(arity_ok, || format!("{rule} cannot have {} premise(s)", premises.len()))?;
    if rule != Rule::EpistemicDist {
        for p in premises {
            ensure(p.prefix == c.prefix, || format!("{rule} must keep the belief prefix"))?;
        }
    }
    match rule {
        Rule::LogicalAxiom => {
            ensure(c.ante.len() == 1 && c.succ.len() == 1 && c.ante == c.succ, || {
                "logical axiom must have the form A → A".into()
            })
        }
        Rule::NonLogicalAxiom => check_nonlogical(c, oracle),
        Rule::Th => {
            let p = premises[0];
            ensure(p.ante.is_subset_of(&c.ante), || "(Th) premise antecedent is not contained in the conclusion".into())?;
            ensure(p.succ.is_subset_of(&c.succ), || "(Th) premise succedent is not contained in the conclusion".into())
        }
        Rule::Cut => check_cut(c, premises[0], premises[1], meta),
        Rule::NotLeft => {
            with_principal(meta, c.ante.iter(), |f| matches!(f, Formula::Not(_)), "¬", |neg| {
                let Formula::Not(a) = neg else { unreachable!() };
                let p = premises[0];
                ensure(p.succ == c.succ.with(a.as_ref().clone()), || "(¬→) premise succedent must be Θ, A".into())?;
                any_context(&c.ante, neg, |ctx| p.ante == *ctx)
            })
        }
        Rule::NotRight => {
            with_principal(meta, c.succ.iter(), |f| matches!(f, Formula::Not(_)), "¬", |neg| {
                let Formula::Not(a) = neg else { unreachable!() };
                let p = premises[0];
                ensure(p.ante == c.ante.with(a.as_ref().clone()), || "(→¬) premise antecedent must be A, Γ".into())?;
                any_context(&c.succ, neg, |ctx| p.succ == *ctx)
            })
        }
        Rule::ImpLeft => {
            with_principal(meta, c.ante.iter(), |f| matches!(f, Formula::Implies(..)), "⊃", |imp| {
                let Formula::Implies(a, b) = imp else { unreachable!() };
                let (p1, p2) = (premises[0], premises[1]);
                ensure(p1.succ == c.succ.with(a.as_ref().clone()), || "(⊃→) left premise succedent must be Θ, A".into())?;
                ensure(p2.succ == c.succ, || "(⊃→) right premise succedent must be Θ".into())?;
                any_context(&c.ante, imp, |ctx| p1.ante == *ctx && p2.ante == ctx.with(b.as_ref().clone()))
            })
        }
        Rule::ImpRight => {
            with_principal(meta, c.succ.iter(), |f| matches!(f, Formula::Implies(..)), "⊃", |imp| {
                let Formula::Implies(a, b) = imp else { unreachable!() };
                let p = premises[0];
                ensure(p.ante == c.ante.with(a.as_ref().clone()), || "(→⊃) premise antecedent must be A, Γ".into())?;
                any_context(&c.succ, imp, |ctx| p.succ == ctx.with(b.as_ref().clone()))
            })
        }
        Rule::AndLeft => {
            with_principal(meta, c.ante.iter(), |f| matches!(f, Formula::And(_)), "∧", |conj| {
                let p = premises[0];
                ensure(p.succ == c.succ, || "(∧→) must keep the succedent".into())?;
                let chosen = chosen_member(meta, conj, &p.ante)?;
                any_context(&c.ante, conj, |ctx| p.ante == ctx.with(chosen.clone()))
            })
        }
        Rule::AndRight => {
            with_principal(meta, c.succ.iter(), |f| matches!(f, Formula::And(_)), "∧", |conj| {
                let members = conj.members().expect("conjunction");
                ensure(premises.len() == members.len(), || {
                    format!("(→∧) needs one premise per conjunct ({} ≠ {})", premises.len(), members.len())
                })?;
                for p in premises {
                    ensure(p.ante == c.ante, || "(→∧) must keep the antecedent".into())?;
                }
                any_context(&c.succ, conj, |ctx| {
                    premises.iter().zip(members).all(|(p, a)| p.succ == ctx.with(a.clone()))
                })
            })
        }
        Rule::OrLeft => {
            with_principal(meta, c.ante.iter(), |f| matches!(f, Formula::Or(_)), "∨", |disj| {
                let members = disj.members().expect("disjunction");
                ensure(premises.len() == members.len(), || {
                    format!("(∨→) needs one premise per disjunct ({} ≠ {})", premises.len(), members.len())
                })?;
                for p in premises {
                    ensure(p.succ == c.succ, || "(∨→) must keep the succedent".into())?;
                }
                any_context(&c.ante, disj, |ctx| {
                    premises.iter().zip(members).all(|(p, a)| p.ante == ctx.with(a.clone()))
                })
            })
        }
        Rule::OrRight => {
            with_principal(meta, c.succ.iter(), |f| matches!(f, Formula::Or(_)), "∨", |disj| {
                let p = premises[0];
                ensure(p.ante == c.ante, || "(→∨) must keep the antecedent".into())?;
                let chosen = chosen_member(meta, disj, &p.succ)?;
                any_context(&c.succ, disj, |ctx| p.succ == ctx.with(chosen.clone()))
            })
        }
        Rule::EpistemicDist => check_distribution(c, premises[0], meta),
    }
}

/// Runs `body` on the principal formula: the one given in `meta`, or else each
/// candidate of the right shape until one succeeds.
fn with_principal<'a>(
    meta: &Meta,
    side: impl Iterator<Item = &'a Formula>,
    shape: impl Fn(&Formula) -> bool,
    connective: &str,
    mut body: impl FnMut(&Formula) -> Check,
) -> Check {
    if let Some(p) = &meta.principal {
        ensure(shape(p), || format!("principal formula is not a {connective}-formula"))?;
        return body(p);
    }
    let mut last = Err(format!("no {connective}-formula to serve as principal formula"));
    for f in side.filter(|f| shape(f)) {
        last = body(f);
        if last.is_ok() {
            return last;
        }
    }
    last
}

/// Checks `principal ∈ side` and tries both admissible contexts.
fn any_context(side: &Cedent, principal: &Formula, mut ok: impl FnMut(&Cedent) -> bool) -> Check {
    ensure(side.contains(principal), || format!("principal formula {principal:?} missing from the conclusion"))?;
    let reduced = side.without(principal);
    if ok(&reduced) || ok(side) {
        Ok(())
    } else {
        Err(format!("premises do not match the conclusion around {principal:?}"))
    }
}

fn chosen_member<'a>(meta: &'a Meta, compound: &'a Formula, premise_side: &Cedent) -> std::result::Result<&'a Formula, Violation> {
    let members = compound.members().expect("compound formula");
    match &meta.chosen {
        Some(a) => {
            ensure(members.binary_search(a).is_ok(), || format!("{a:?} is not a member of the principal formula"))?;
            Ok(a)
        }
        None => members
            .iter()
            .find(|a| premise_side.contains(a))
            .ok_or_else(|| "no member of the principal formula appears in the premise".to_string()),
    }
}

fn check_cut(c: &ThoughtSequent, left: &ThoughtSequent, right: &ThoughtSequent, meta: &Meta) -> Check {
    let candidates: Vec<Formula> = match &meta.principal {
        Some(a) => vec![a.clone()],
        None => left.succ.iter().filter(|f| right.ante.contains(f)).cloned().collect(),
    };
    for a in &candidates {
        if !left.succ.contains(a) || !right.ante.contains(a) {
            continue;
        }
        for theta in [left.succ.without(a), left.succ.clone()] {
            if theta.with(a.clone()) != left.succ {
                continue;
            }
            for delta in [right.ante.without(a), right.ante.clone()] {
                if delta.with(a.clone()) != right.ante {
                    continue;
                }
                if c.ante == delta.union(&left.ante) && c.succ == theta.union(&right.succ) {
                    return Ok(());
                }
            }
        }
    }
    Err("(Cut) premises do not combine into the conclusion".into())
}

fn check_distribution(c: &ThoughtSequent, p: &ThoughtSequent, meta: &Meta) -> Check {
    let agent = match meta.agent {
        Some(a) => a,
        None => *p.prefix.last().ok_or("(B→B) premise needs a nonempty prefix")?,
    };
    ensure(p.succ.len() <= 1, || format!("(B→B) requires |Θ| ≤ 1, premise has {}", p.succ.len()))?;
    let mut expected = c.prefix.clone();
    expected.push(agent);
    ensure(p.prefix == expected, || "(B→B) premise prefix must be e∘i".into())?;
    let lift = |side: &Cedent| Cedent::from_formulas(side.iter().map(|f| Formula::bel(agent, f.clone())));
    ensure(c.ante == lift(&p.ante), || "(B→B) conclusion antecedent must be B_i(Γ)".into())?;
    ensure(c.succ == lift(&p.succ), || "(B→B) conclusion succedent must be B_i(Θ)".into())
}
