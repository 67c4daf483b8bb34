use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::coalition::Player;

use super::formula::Formula;

/// Belief prefix `e`: a short sequence of players, usually of length 1.
pub type Prefix = SmallVec<[Player; 2]>;

type Local = SmallVec<[Formula; 1]>;

/// A large formula set shared between many sequents (a player's knowledge set).
pub type SharedSet = Arc<BTreeSet<Formula>>;

/// Membership with a range check first: formulae of another shape than the
/// set's members (a conjunction against a set of literals) fall outside
/// `[first, last]`.
fn in_shared(set: &BTreeSet<Formula>, f: &Formula) -> bool {
    match (set.first(), set.last()) {
        (Some(lo), Some(hi)) if f >= lo && f <= hi => set.contains(f),
        _ => false,
    }
}

/// One side of a sequent: a finite set of formulae.
///
/// Stored as an optional shared set plus a small sorted list of extra
/// formulae disjoint from it, so that the thousands of sequents of a proof
/// that mention the same knowledge set `Γ` share one copy. Equality and
/// membership are set-theoretic regardless of how the set is split.
#[derive(Clone, Default)]
pub struct Cedent {
    shared: Option<SharedSet>,
    local: Local,
}

impl Cedent {
    pub fn empty() -> Self {
        Cedent::default()
    }

    pub fn from_formulas<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut local: Local = items.into_iter().collect();
        local.sort();
        local.dedup();
        Cedent { shared: None, local }
    }

    pub fn single(f: Formula) -> Self {
        Cedent {
            shared: None,
            local: smallvec::smallvec![f],
        }
    }

    pub fn shared(set: SharedSet) -> Self {
        Cedent {
            shared: Some(set),
            local: Local::new(),
        }
    }

    /// `set ∪ extra`
    pub fn shared_with<I: IntoIterator<Item = Formula>>(set: SharedSet, extra: I) -> Self {
        let mut c = Cedent::shared(set);
        for f in extra {
            c.insert(f);
        }
        c
    }

    pub fn shared_part(&self) -> Option<&SharedSet> {
        self.shared.as_ref()
    }

    pub fn local_part(&self) -> &[Formula] {
        &self.local
    }

    pub fn len(&self) -> usize {
        self.local.len() + self.shared.as_ref().map_or(0, |s| s.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.local.binary_search(f).is_ok() || self.shared.as_ref().is_some_and(|s| in_shared(s, f))
    }

    pub fn insert(&mut self, f: Formula) {
        if self.shared.as_ref().is_some_and(|s| in_shared(s, &f)) {
            return;
        }
        if let Err(pos) = self.local.binary_search(&f) {
            self.local.insert(pos, f);
        }
    }

    /// `self ∪ {f}`
    pub fn with(&self, f: Formula) -> Cedent {
        let mut c = self.clone();
        c.insert(f);
        c
    }

    /// `self ∖ {f}`. Removing a member of the shared part materializes it.
    pub fn without(&self, f: &Formula) -> Cedent {
        if let Ok(pos) = self.local.binary_search(f) {
            let mut c = self.clone();
            c.local.remove(pos);
            return c;
        }
        match &self.shared {
            Some(s) if s.contains(f) => {
                let mut all: Local = self.iter().cloned().collect();
                all.retain(|g| g != f);
                Cedent {
                    shared: None,
                    local: all,
                }
            }
            _ => self.clone(),
        }
    }

    /// `self ∪ other`
    pub fn union(&self, other: &Cedent) -> Cedent {
        match (&self.shared, &other.shared) {
            (Some(a), Some(b)) if !Arc::ptr_eq(a, b) => Cedent::from_formulas(self.iter().chain(other.iter()).cloned()),
            (_, None) => {
                let mut c = self.clone();
                for f in &other.local {
                    c.insert(f.clone());
                }
                c
            }
            _ => {
                let mut c = other.clone();
                for f in &self.local {
                    c.insert(f.clone());
                }
                c
            }
        }
    }

    /// All members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        Merge {
            a: self.local.iter().peekable(),
            b: self.shared.iter().flat_map(|s| s.iter()).peekable(),
        }
    }

    pub fn is_subset_of(&self, other: &Cedent) -> bool {
        if self.len() > other.len() {
            return false;
        }
        match (&self.shared, &other.shared) {
            (None, _) => self.local.iter().all(|f| other.contains(f)),
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => self.local.iter().all(|f| other.contains(f)),
            _ => self.iter().all(|f| other.contains(f)),
        }
    }

    /// Formulae in `self ∖ other`, in order. Intended for diagnostics.
    pub fn difference<'a>(&'a self, other: &'a Cedent) -> impl Iterator<Item = &'a Formula> + 'a {
        self.iter().filter(move |f| !other.contains(f))
    }
}

struct Merge<A: Iterator, B: Iterator> {
    a: std::iter::Peekable<A>,
    b: std::iter::Peekable<B>,
}

impl<'a, A, B> Iterator for Merge<A, B>
where
    A: Iterator<Item = &'a Formula>,
    B: Iterator<Item = &'a Formula>,
{
    type Item = &'a Formula;

    fn next(&mut self) -> Option<&'a Formula> {
        match (self.a.peek(), self.b.peek()) {
            (Some(x), Some(y)) => {
                if x <= y {
                    self.a.next()
                } else {
                    self.b.next()
                }
            }
            (Some(_), None) => self.a.next(),
            (None, _) => self.b.next(),
        }
    }
}

impl PartialEq for Cedent {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        match (&self.shared, &other.shared) {
            (None, None) => self.local == other.local,
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => self.local == other.local,
            _ => self.iter().eq(other.iter()),
        }
    }
}

impl Eq for Cedent {}

impl fmt::Debug for Cedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(s) = &self.shared {
            write!(f, "Γ[{}]", s.len())?;
            first = false;
        }
        for g in &self.local {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
            first = false;
        }
        Ok(())
    }
}

/// `B_e[Γ → Θ]`: a sequent nested under the belief prefix `e`.
#[derive(Clone, PartialEq, Eq)]
pub struct ThoughtSequent {
    pub prefix: Prefix,
    pub ante: Cedent,
    pub succ: Cedent,
}

impl ThoughtSequent {
    pub fn new(prefix: impl Into<Prefix>, ante: Cedent, succ: Cedent) -> Self {
        ThoughtSequent {
            prefix: prefix.into(),
            ante,
            succ,
        }
    }

    /// `B_i[Γ → Θ]`
    pub fn of(agent: Player, ante: Cedent, succ: Cedent) -> Self {
        ThoughtSequent::new(smallvec::smallvec![agent], ante, succ)
    }
}

impl fmt::Debug for ThoughtSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(|p| p.to_string()).collect();
        write!(f, "B({})[{:?} → {:?}]", prefix.join("∘"), self.ante, self.succ)
    }
}
