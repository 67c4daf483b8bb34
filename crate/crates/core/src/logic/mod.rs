//! Formulae, thought sequents, the KD rules and proof trees.

mod formula;
mod json;
mod oracle;
mod proof;
mod rules;
mod sequent;

pub use formula::{Atom, Formula};
pub use json::{formula_from_json, formula_to_json, ProofDocument};
pub use oracle::{ComparisonOracle, GridOracle};
pub use proof::{check_proof, CheckFailure, ProofChecker, ProofNode, ProofTree};
pub use rules::{is_nonlogical_axiom, rule_instance_valid, rule_instance_valid_tag, Meta, Rule, Violation};
pub use sequent::{Cedent, Prefix, SharedSet, ThoughtSequent};
