//! Primitivity: a set is primitive when it lies in no coset of a proper
//! subgroup and is not a union of cosets of a nontrivial subgroup.

use crate::abelian::{AbelianGroup, ElementSet};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub primitive: bool,
    pub in_proper_coset: bool,
    /// Proper subgroup `H` with `S` inside a coset of `H`.
    pub witness_subgroup: Option<ElementSet>,
    pub union_of_cosets: bool,
    /// Nontrivial stabilizer of `S` under translation.
    pub witness_stabilizer: Option<ElementSet>,
}

/// `S` lies in `s0 + H0` with `H0 = <s - s0 : s in S>`; contained in a proper
/// coset iff `H0` is proper. Returns `H0` as witness when it is.
pub fn is_in_proper_coset(group: &AbelianGroup, set: &ElementSet) -> Result<(bool, Option<ElementSet>), Error> {
    let s0 = set.first().ok_or(Error::EmptySet)?;
    Ok(coset_witness(group, set, s0))
}

/// Same as [`is_in_proper_coset`] with an explicit base point `s0 in S`.
pub fn coset_witness(group: &AbelianGroup, set: &ElementSet, s0: usize) -> (bool, Option<ElementSet>) {
    let diffs: ElementSet = set.iter().map(|s| group.sub(s, s0)).collect();
    let h0 = group.subgroup_generated(&diffs);
    if h0.len() < group.order() {
        (true, Some(h0))
    } else {
        (false, None)
    }
}

/// `S` is a union of cosets of `H` iff `H` is inside the stabilizer of `S`.
pub fn is_union_of_cosets(group: &AbelianGroup, set: &ElementSet) -> Result<(bool, Option<ElementSet>), Error> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let stab = group.stabilizer(set);
    if stab.len() > 1 {
        Ok((true, Some(stab)))
    } else {
        Ok((false, None))
    }
}

pub fn is_primitive(group: &AbelianGroup, set: &ElementSet) -> Result<PrimitivityReport, Error> {
    let (in_proper_coset, witness_subgroup) = is_in_proper_coset(group, set)?;
    let (union_of_cosets, witness_stabilizer) = is_union_of_cosets(group, set)?;
    Ok(PrimitivityReport {
        primitive: !in_proper_coset && !union_of_cosets,
        in_proper_coset,
        witness_subgroup,
        union_of_cosets,
        witness_stabilizer,
    })
}
