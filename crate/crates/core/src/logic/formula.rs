use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::coalition::{Coalition, Player};
use crate::point::Point;

/// Atomic formulae.
///
/// `Ach` is the achievability atom `x^S` ("payoff `x` can be obtained by
/// `S`"); `Geq` is the comparison atom `y^T ≥_S x^U`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Ach {
        coalition: Coalition,
        point: Point,
    },
    Geq {
        within: Coalition,
        left_tag: Coalition,
        left: Point,
        right_tag: Coalition,
        right: Point,
    },
}

impl Atom {
    pub fn ach(point: Point, coalition: Coalition) -> Self {
        Atom::Ach { coalition, point }
    }

    /// `left^left_tag ≥_within right^right_tag`
    pub fn geq(left: Point, left_tag: Coalition, within: Coalition, right: Point, right_tag: Coalition) -> Self {
        Atom::Geq {
            within,
            left_tag,
            left,
            right_tag,
            right,
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Ach { coalition, point } => write!(f, "{point}^{{{coalition}}}"),
            Atom::Geq {
                within,
                left_tag,
                left,
                right_tag,
                right,
            } => write!(f, "{left}^{{{left_tag}}} >=_{{{within}}} {right}^{{{right_tag}}}"),
        }
    }
}

/// Formulae built by F0-F2. `And`/`Or` members are kept sorted and
/// duplicate-free so that equal sets give equal formulae.
#[derive(Clone)]
pub enum Formula {
    Atom(Atom),
    Not(Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    And(Arc<[Formula]>),
    Or(Arc<[Formula]>),
    Bel(Player, Arc<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn bel(agent: Player, f: Formula) -> Self {
        Formula::Bel(agent, Arc::new(f))
    }

    /// `⋀ members`. Panics on an empty list.
    pub fn and(members: Vec<Formula>) -> Self {
        Formula::And(canonical(members))
    }

    /// `⋁ members`. Panics on an empty list.
    pub fn or(members: Vec<Formula>) -> Self {
        Formula::Or(canonical(members))
    }

    /// The strict comparison `y^T >_S x^U`, an abbreviation for
    /// `y^T ≥_S x^U ∧ ¬(x^U ≥_S y^T)`.
    pub fn strict(left: Point, left_tag: Coalition, within: Coalition, right: Point, right_tag: Coalition) -> Self {
        let forward = Atom::geq(left.clone(), left_tag, within, right.clone(), right_tag);
        let backward = Atom::geq(right, right_tag, within, left, left_tag);
        Formula::and(vec![Formula::Atom(forward), Formula::not(Formula::Atom(backward))])
    }

    /// Reads back a strict comparison produced by [`Formula::strict`].
    /// Returns `(left, left_tag, within, right, right_tag)`.
    pub fn as_strict(&self) -> Option<(Point, Coalition, Coalition, Point, Coalition)> {
        let Formula::And(members) = self else { return None };
        if members.len() != 2 {
            return None;
        }
        let (Formula::Atom(Atom::Geq { within, left_tag, left, right_tag, right }), Formula::Not(neg)) =
            (&members[0], &members[1])
        else {
            return None;
        };
        let Formula::Atom(Atom::Geq {
            within: w2,
            left_tag: lt2,
            left: l2,
            right_tag: rt2,
            right: r2,
        }) = neg.as_ref()
        else {
            return None;
        };
        if w2 == within && l2 == right && lt2 == right_tag && r2 == left && rt2 == left_tag {
            Some((left.clone(), *left_tag, *within, right.clone(), *right_tag))
        } else {
            None
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(f) => Some(f),
            _ => None,
        }
    }

    /// Members of an `And`/`Or`.
    pub fn members(&self) -> Option<&[Formula]> {
        match self {
            Formula::And(m) | Formula::Or(m) => Some(m),
            _ => None,
        }
    }

    /// Contains no belief operator.
    pub fn is_non_epistemic(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_non_epistemic(),
            Formula::Implies(a, b) => a.is_non_epistemic() && b.is_non_epistemic(),
            Formula::And(m) | Formula::Or(m) => m.iter().all(Formula::is_non_epistemic),
            Formula::Bel(..) => false,
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(_) => 1,
            Formula::Implies(..) => 2,
            Formula::And(_) => 3,
            Formula::Or(_) => 4,
            Formula::Bel(..) => 5,
        }
    }
}

fn canonical(mut members: Vec<Formula>) -> Arc<[Formula]> {
    assert!(!members.is_empty(), "conjunctions and disjunctions need at least one member");
    if !members.windows(2).all(|w| w[0] < w[1]) {
        members.sort();
        members.dedup();
    }
    members.into()
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Formula::Atom(a), Formula::Atom(b)) => a.cmp(b),
            (Formula::Not(a), Formula::Not(b)) => {
                if Arc::ptr_eq(a, b) {
                    Ordering::Equal
                } else {
                    a.cmp(b)
                }
            }
            (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Formula::And(a), Formula::And(b)) | (Formula::Or(a), Formula::Or(b)) => {
                if Arc::ptr_eq(a, b) {
                    Ordering::Equal
                } else {
                    a.iter().cmp(b.iter())
                }
            }
            (Formula::Bel(i, a), Formula::Bel(j, b)) => i.cmp(j).then_with(|| a.cmp(b)),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.variant_rank().hash(state);
        match self {
            Formula::Atom(a) => a.hash(state),
            Formula::Not(f) => f.hash(state),
            Formula::Implies(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Formula::And(m) | Formula::Or(m) => m.hash(state),
            Formula::Bel(i, f) => {
                i.hash(state);
                f.hash(state);
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a:?}"),
            Formula::Not(a) => write!(f, "¬({a:?})"),
            Formula::Implies(a, b) => write!(f, "({a:?} ⊃ {b:?})"),
            Formula::And(m) => write_list(f, "∧", m),
            Formula::Or(m) => write_list(f, "∨", m),
            Formula::Bel(i, a) => write!(f, "B{i}({a:?})"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, op: &str, members: &[Formula]) -> fmt::Result {
    const SHOWN: usize = 4;
    write!(f, "{op}[")?;
    for (k, m) in members.iter().take(SHOWN).enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{m:?}")?;
    }
    if members.len() > SHOWN {
        write!(f, ", … {} more", members.len() - SHOWN)?;
    }
    write!(f, "]")
}
