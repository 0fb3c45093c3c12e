//! Finite groups, subgroup tuples and the entropy points of their coset
//! variables.

mod catalog;
mod finite;
mod witness;

pub use catalog::{builtin_catalog, NamedGroup, MAX_CYCLIC, MAX_DIHEDRAL, MAX_SYMMETRIC};
pub use finite::{enumerate_subgroups, intersect, subgroup_from_generators, FiniteGroup, Subgroup, MAX_GENERATED_ORDER};
pub use witness::{
    coset_entropy_point, coset_labels, search_violation, witness_set, GroupEntropyPoint, GroupViolation,
    SearchLimits, SearchOutcome,
};
