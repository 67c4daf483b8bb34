use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use super::oracle::ComparisonOracle;
use super::rules::{check_nonlogical, check_rule, Meta, Rule};
use super::sequent::ThoughtSequent;

/// A finite tree of thought sequents; leaves are axioms, inner nodes rule
/// instances over their children.
///
/// Cheap to clone: nodes sit behind an `Arc`, so equal subproofs can be
/// shared between trees (and checked once, see [`ProofChecker`]).
#[derive(Clone)]
pub struct ProofTree(Arc<ProofNode>);

#[derive(Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub sequent: ThoughtSequent,
    pub rule: Rule,
    pub meta: Meta,
    pub children: Vec<ProofTree>,
}

impl Deref for ProofTree {
    type Target = ProofNode;

    fn deref(&self) -> &ProofNode {
        &self.0
    }
}

impl PartialEq for ProofTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for ProofTree {}

/// First failing node of a rejected proof: the child-index path from the root
/// and the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "node [{}] ({}): {}", path.join("."), self.rule, self.reason)
    }
}

impl std::error::Error for CheckFailure {}

impl ProofTree {
    pub fn leaf(sequent: ThoughtSequent, rule: Rule) -> Self {
        Self::node(sequent, rule, Meta::none(), Vec::new())
    }

    pub fn node(sequent: ThoughtSequent, rule: Rule, meta: Meta, children: Vec<ProofTree>) -> Self {
        ProofTree(Arc::new(ProofNode {
            sequent,
            rule,
            meta,
            children,
        }))
    }

    /// Mutable access, copying the node if it is shared.
    pub fn make_mut(&mut self) -> &mut ProofNode {
        Arc::make_mut(&mut self.0)
    }

    /// Checks every node; the tree proves its root sequent iff this succeeds.
    pub fn check(&self, oracle: &dyn ComparisonOracle) -> Result<(), CheckFailure> {
        ProofChecker::new(oracle).check(self)
    }

    /// Number of nodes of the tree, counting shared subproofs once per use.
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ProofTree::depth).max().unwrap_or(0)
    }

    /// Sequents at the leaves, left to right.
    pub fn leaves(&self) -> Vec<&ThoughtSequent> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ThoughtSequent>) {
        if self.children.is_empty() {
            out.push(&self.sequent);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    /// Every node, breadth-first.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = vec![self];
        let mut k = 0;
        while k < out.len() {
            let n = out[k];
            out.extend(n.children.iter());
            k += 1;
        }
        out
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

/// Checks proof trees, remembering the subproofs already verified so that a
/// subproof shared by several trees (or several times within one) is checked
/// once. Verified subproofs are kept alive by the checker.
pub struct ProofChecker<'o> {
    oracle: &'o dyn ComparisonOracle,
    verified: HashSet<usize>,
    keep: Vec<ProofTree>,
}

impl<'o> ProofChecker<'o> {
    pub fn new(oracle: &'o dyn ComparisonOracle) -> Self {
        ProofChecker {
            oracle,
            verified: HashSet::new(),
            keep: Vec::new(),
        }
    }

    pub fn check(&mut self, tree: &ProofTree) -> Result<(), CheckFailure> {
        let mut path = Vec::new();
        self.check_at(tree, &mut path)
    }

    fn check_at(&mut self, t: &ProofTree, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
        if self.verified.contains(&t.key()) {
            return Ok(());
        }
        let fail = |path: &Vec<usize>, reason: String| CheckFailure {
            path: path.clone(),
            rule: t.rule,
            reason,
        };
        if t.children.is_empty() && !t.rule.is_axiom() {
            return Err(fail(path, "leaves must be axiom instances".into()));
        }
        let premises: Vec<&ThoughtSequent> = t.children.iter().map(|c| &c.sequent).collect();
        let verdict = if t.rule == Rule::NonLogicalAxiom {
            if premises.is_empty() {
                check_nonlogical(&t.sequent, self.oracle)
            } else {
                Err("axioms have no premises".into())
            }
        } else {
            check_rule(&t.sequent, &premises, t.rule, &t.meta, self.oracle)
        };
        verdict.map_err(|reason| fail(path, reason))?;
        for (k, child) in t.children.iter().enumerate() {
            path.push(k);
            self.check_at(child, path)?;
            path.pop();
        }
        // a node held only by its parent cannot be reached again
        if Arc::strong_count(&t.0) > 1 {
            self.verified.insert(t.key());
            self.keep.push(t.clone());
        }
        Ok(())
    }
}

/// `tree` is a proof of its root sequent.
pub fn check_proof(tree: &ProofTree, oracle: &dyn ComparisonOracle) -> bool {
    tree.check(oracle).is_ok()
}

impl fmt::Debug for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ProofTree, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:indent$}{:?}  ({})", "", t.sequent, t.rule, indent = depth * 2)?;
            for c in &t.children {
                go(c, depth + 1, f)?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}
