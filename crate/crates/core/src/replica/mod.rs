//! Edgeworth exchange economies and their replicas: exact utility
//! comparison, economy domination, grid cores, effective coalitions and
//! knowledge-restricted rejection.

pub mod economy;
pub mod grid;
pub mod utility;

pub use economy::{
    derived_game, econ_dominates, effective_coalitions, effective_groups, knowledge_growth, Allocation, EconomyConfig,
    EdgeworthEconomy, Participant, ReplicaEconomy, UtilityOracle,
};
pub use grid::{
    effective_profile, grid_core, grid_core_exhaustive, grid_core_with, partial_knowledge_witness, per_type, rejection,
    unanimously_accepted, Blocker, PartialKnowledge,
};
pub use utility::{Bundle, Utility};

/// `utility_compare` on rational bundles under the given utility.
pub fn utility_compare(u: Utility, a: &Bundle, b: &Bundle) -> crate::Result<std::cmp::Ordering> {
    u.compare(a, b)
}
