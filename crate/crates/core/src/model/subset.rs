use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// A nonempty subset of the variable positions `1..=m`, stored as a bitmask
/// where bit `i - 1` marks position `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetIndex(u16);

impl SubsetIndex {
    /// Wraps a raw bitmask. The mask must be nonzero and fit in `m` bits.
    pub fn from_mask(mask: u16, m: usize) -> Result<Self, ModelError> {
        check_var_count(m)?;
        if mask == 0 || (mask as usize) >= (1usize << m) {
            return Err(ModelError::BadSubset { mask, m });
        }
        Ok(Self(mask))
    }

    /// Builds a subset from 1-based positions.
    pub fn from_positions(positions: &[usize], m: usize) -> Result<Self, ModelError> {
        check_var_count(m)?;
        let mut mask = 0u16;
        for &p in positions {
            if p == 0 || p > m {
                return Err(ModelError::PositionOutOfRange { position: p, m });
            }
            mask |= 1 << (p - 1);
        }
        Self::from_mask(mask, m)
    }

    /// The full set `{1..m}`.
    pub fn full(m: usize) -> Result<Self, ModelError> {
        check_var_count(m)?;
        Ok(Self(((1u32 << m) - 1) as u16))
    }

    pub(crate) fn from_mask_unchecked(mask: u16) -> Self {
        debug_assert!(mask != 0);
        Self(mask)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    /// Position of this subset in the ascending-bitmask enumeration.
    pub fn ordinal(self) -> usize {
        self.0 as usize - 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, position: usize) -> bool {
        (1..=16).contains(&position) && self.0 & (1 << (position - 1)) != 0
    }

    pub fn is_subset_of(self, other: SubsetIndex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.0 | other.0)
    }

    /// Intersection, `None` when empty.
    pub fn intersection(self, other: SubsetIndex) -> Option<SubsetIndex> {
        let mask = self.0 & other.0;
        (mask != 0).then_some(SubsetIndex(mask))
    }

    /// The 1-based positions in increasing order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (1..=16usize).filter(move |p| mask & (1 << (p - 1)) != 0)
    }

    /// Zero-based coordinate indices in increasing order.
    pub fn coordinates(self) -> Vec<usize> {
        self.positions().map(|p| p - 1).collect()
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.positions().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn check_var_count(m: usize) -> Result<(), ModelError> {
    if m == 0 || m > MAX_VARS {
        return Err(ModelError::VarCountOutOfRange { m, max: MAX_VARS });
    }
    Ok(())
}

/// All `2^m - 1` nonempty subsets of `{1..m}` in ascending bitmask order.
pub fn subsets(m: usize) -> Result<Vec<SubsetIndex>, ModelError> {
    check_var_count(m)?;
    Ok((1u16..(1u16 << m)).map(SubsetIndex).collect())
}

/// Number of coordinates of an entropy vector over `m` variables.
pub fn coordinate_count(m: usize) -> usize {
    (1usize << m) - 1
}
