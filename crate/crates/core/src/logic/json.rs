//! JSON form of formulas and proof trees.
//!
//! A proof document is `{"oracle": label, "contexts": [[formula, ...], ...],
//! "proof": node}` with nodes
//! `{"sequent": {"prefix": [ids], "ante": [...], "succ": [...]}, "rule": tag,
//! "meta": {...}, "children": [...]}`. Entries of `ante`/`succ` are formula
//! objects or `{"context": k}`, which splices in the `k`-th shared formula
//! set; knowledge sets are written once instead of once per node.

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, Player};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rational::{serde_rational_vec, Rational};

use super::formula::{Atom, Formula};
use super::proof::ProofTree;
use super::rules::{Meta, Rule};
use super::sequent::{Cedent, SharedSet, ThoughtSequent};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum Entry {
    Ach {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(rename = "S")]
        s: Coalition,
    },
    Geq {
        #[serde(with = "serde_rational_vec")]
        y: Vec<Rational>,
        #[serde(rename = "T")]
        t: Coalition,
        #[serde(rename = "S")]
        s: Coalition,
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(rename = "U")]
        u: Coalition,
    },
    Not(Box<Entry>),
    Implies(Box<Entry>, Box<Entry>),
    And(Vec<Entry>),
    Or(Vec<Entry>),
    Bel {
        agent: Player,
        formula: Box<Entry>,
    },
    Context(usize),
}

impl Entry {
    fn from_formula(f: &Formula) -> Entry {
        match f {
            Formula::Atom(Atom::Ach { coalition, point }) => Entry::Ach {
                x: point.entries().to_vec(),
                s: *coalition,
            },
            Formula::Atom(Atom::Geq {
                within,
                left_tag,
                left,
                right_tag,
                right,
            }) => Entry::Geq {
                y: left.entries().to_vec(),
                t: *left_tag,
                s: *within,
                x: right.entries().to_vec(),
                u: *right_tag,
            },
            Formula::Not(a) => Entry::Not(Box::new(Entry::from_formula(a))),
            Formula::Implies(a, b) => Entry::Implies(Box::new(Entry::from_formula(a)), Box::new(Entry::from_formula(b))),
            Formula::And(m) => Entry::And(m.iter().map(Entry::from_formula).collect()),
            Formula::Or(m) => Entry::Or(m.iter().map(Entry::from_formula).collect()),
            Formula::Bel(i, a) => Entry::Bel {
                agent: *i,
                formula: Box::new(Entry::from_formula(a)),
            },
        }
    }

    fn into_formula(self) -> Result<Formula> {
        Ok(match self {
            Entry::Ach { x, s } => Formula::Atom(Atom::ach(Point::new(x), s)),
            Entry::Geq { y, t, s, x, u } => Formula::Atom(Atom::geq(Point::new(y), t, s, Point::new(x), u)),
            Entry::Not(a) => Formula::not(a.into_formula()?),
            Entry::Implies(a, b) => Formula::implies(a.into_formula()?, b.into_formula()?),
            Entry::And(m) => Formula::and(members(m)?),
            Entry::Or(m) => Formula::or(members(m)?),
            Entry::Bel { agent, formula } => Formula::bel(agent, formula.into_formula()?),
            Entry::Context(_) => return Err(Error::Parse("context references may only appear directly in a sequent side".into())),
        })
    }
}

fn members(m: Vec<Entry>) -> Result<Vec<Formula>> {
    if m.is_empty() {
        return Err(Error::Parse("conjunctions and disjunctions need at least one member".into()));
    }
    m.into_iter().map(Entry::into_formula).collect()
}

/// Serializes a single formula.
pub fn formula_to_json(f: &Formula) -> String {
    serde_json::to_string(&Entry::from_formula(f)).expect("formulas serialize")
}

pub fn formula_from_json(text: &str) -> Result<Formula> {
    let e: Entry = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    e.into_formula()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequentRepr {
    prefix: Vec<Player>,
    ante: Vec<Entry>,
    succ: Vec<Entry>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MetaRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    principal: Option<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chosen: Option<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agent: Option<Player>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    sequent: SequentRepr,
    rule: String,
    #[serde(default)]
    meta: MetaRepr,
    #[serde(default)]
    children: Vec<NodeRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    oracle: String,
    #[serde(default)]
    contexts: Vec<Vec<Entry>>,
    proof: NodeRepr,
}

/// A serialized proof plus the label of the comparison oracle its
/// non-logical axioms refer to (`"grid"` for TU games).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDocument {
    pub oracle: String,
    pub proof: ProofTree,
}

struct Encoder {
    ids: HashMap<*const BTreeSet<Formula>, usize>,
    contexts: Vec<Vec<Entry>>,
}

impl Encoder {
    fn side(&mut self, c: &Cedent) -> Vec<Entry> {
        let mut out = Vec::new();
        if let Some(shared) = c.shared_part() {
            let key = Arc::as_ptr(shared);
            let id = match self.ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = self.contexts.len();
                    self.contexts.push(shared.iter().map(Entry::from_formula).collect());
                    self.ids.insert(key, id);
                    id
                }
            };
            out.push(Entry::Context(id));
        }
        out.extend(c.local_part().iter().map(Entry::from_formula));
        out
    }

    fn node(&mut self, t: &ProofTree) -> NodeRepr {
        NodeRepr {
            sequent: SequentRepr {
                prefix: t.sequent.prefix.to_vec(),
                ante: self.side(&t.sequent.ante),
                succ: self.side(&t.sequent.succ),
            },
            rule: t.rule.name().to_string(),
            meta: MetaRepr {
                principal: t.meta.principal.as_ref().map(Entry::from_formula),
                chosen: t.meta.chosen.as_ref().map(Entry::from_formula),
                agent: t.meta.agent,
            },
            children: t.children.iter().map(|c| self.node(c)).collect(),
        }
    }
}

fn decode_side(entries: Vec<Entry>, contexts: &[SharedSet]) -> Result<Cedent> {
    let mut shared: Option<SharedSet> = None;
    let mut local = Vec::new();
    for e in entries {
        match e {
            Entry::Context(k) => {
                let set = contexts
                    .get(k)
                    .ok_or_else(|| Error::Parse(format!("context {k} is not defined")))?
                    .clone();
                match &shared {
                    None => shared = Some(set),
                    Some(prev) if Arc::ptr_eq(prev, &set) => {}
                    Some(prev) => {
                        // two different contexts on one side: fold the first into the locals
                        local.extend(prev.iter().cloned());
                        shared = Some(set);
                    }
                }
            }
            other => local.push(other.into_formula()?),
        }
    }
    Ok(match shared {
        Some(set) => Cedent::shared_with(set, local),
        None => Cedent::from_formulas(local),
    })
}

fn decode_node(n: NodeRepr, contexts: &[SharedSet]) -> Result<ProofTree> {
    let rule: Rule = n.rule.parse()?;
    let sequent = ThoughtSequent::new(
        n.sequent.prefix,
        decode_side(n.sequent.ante, contexts)?,
        decode_side(n.sequent.succ, contexts)?,
    );
    let meta = Meta {
        principal: n.meta.principal.map(Entry::into_formula).transpose()?,
        chosen: n.meta.chosen.map(Entry::into_formula).transpose()?,
        agent: n.meta.agent,
    };
    let children = n
        .children
        .into_iter()
        .map(|c| decode_node(c, contexts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProofTree::node(sequent, rule, meta, children))
}

impl ProofDocument {
    pub fn new(oracle: impl Into<String>, proof: ProofTree) -> Self {
        ProofDocument {
            oracle: oracle.into(),
            proof,
        }
    }

    fn encode(&self) -> DocumentRepr {
        let mut enc = Encoder {
            ids: HashMap::new(),
            contexts: Vec::new(),
        };
        let proof = enc.node(&self.proof);
        DocumentRepr {
            oracle: self.oracle.clone(),
            contexts: enc.contexts,
            proof,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.encode()).expect("proof documents serialize")
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &self.encode()).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: DocumentRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::decode(repr)
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let repr: DocumentRepr = serde_json::from_reader(r).map_err(|e| Error::Parse(e.to_string()))?;
        Self::decode(repr)
    }

    fn decode(repr: DocumentRepr) -> Result<Self> {
        let contexts = repr
            .contexts
            .into_iter()
            .map(|entries| {
                let set = entries
                    .into_iter()
                    .map(Entry::into_formula)
                    .collect::<Result<BTreeSet<Formula>>>()?;
                Ok(Arc::new(set))
            })
            .collect::<Result<Vec<SharedSet>>>()?;
        Ok(ProofDocument {
            oracle: repr.oracle,
            proof: decode_node(repr.proof, &contexts)?,
        })
    }
}
