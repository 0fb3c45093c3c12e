//! Helpers over finite sets of integer tuples.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::SubsetIndex;

pub(crate) fn project_point(point: &[u32], coords: &[usize]) -> Vec<u32> {
    coords.iter().map(|&k| point[k]).collect()
}

/// Image of `points` under the coordinate projection onto `subset`.
pub fn project<'a>(points: impl IntoIterator<Item = &'a Vec<u32>>, subset: SubsetIndex) -> BTreeSet<Vec<u32>> {
    let coords = subset.coordinates();
    points.into_iter().map(|p| project_point(p, &coords)).collect()
}

/// Preimage counts of every attained value of the projection onto `subset`.
pub fn fiber_sizes<'a>(
    points: impl IntoIterator<Item = &'a Vec<u32>>,
    subset: SubsetIndex,
) -> BTreeMap<Vec<u32>, usize> {
    let coords = subset.coordinates();
    let mut out = BTreeMap::new();
    for p in points {
        *out.entry(project_point(p, &coords)).or_insert(0) += 1;
    }
    out
}

/// Outcome of a fiber-uniformity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fibers {
    /// Every attained value has exactly this many preimages.
    Uniform(usize),
    /// The smallest attained value whose fiber size differs from
    /// `#points / #image`.
    NonUniform(Vec<u32>),
}

pub fn uniform_fibers<'a>(points: impl IntoIterator<Item = &'a Vec<u32>>, subset: SubsetIndex) -> Fibers {
    let sizes = fiber_sizes(points, subset);
    let total: usize = sizes.values().sum();
    let image = sizes.len();
    for (value, &size) in &sizes {
        if size * image != total {
            return Fibers::NonUniform(value.clone());
        }
    }
    Fibers::Uniform(total / image.max(1))
}
