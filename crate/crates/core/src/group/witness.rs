use rayon::prelude::*;

use super::catalog::NamedGroup;
use super::finite::{enumerate_subgroups, intersect, FiniteGroup, Subgroup};
use crate::distributions::SupportSet;
use crate::error::GroupError;
use crate::model::{
    rational_to_f64, subsets, EntropyVector, ExactLogLin, LinearInequality, Sign, SubsetIndex,
};

/// Entropy vector of the coset variables `g·H_1, …, g·H_m` for uniform `g`:
/// coordinate `I` is `log₂(#G / #H_I)` with `H_I = ⋂_{i∈I} H_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupEntropyPoint {
    group_order: usize,
    /// `#H_I` in ascending bitmask order.
    intersection_orders: Vec<usize>,
    vector: EntropyVector,
}

impl GroupEntropyPoint {
    pub fn m(&self) -> usize {
        self.vector.m()
    }

    pub fn vector(&self) -> &EntropyVector {
        &self.vector
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn intersection_order(&self, subset: SubsetIndex) -> usize {
        self.intersection_orders[subset.ordinal()]
    }

    /// `#G / #H_I`, the size of the range of `g_I`.
    pub fn index(&self, subset: SubsetIndex) -> usize {
        self.group_order / self.intersection_order(subset)
    }
}

fn check_subgroups(group: &FiniteGroup, subgroups: &[Subgroup]) -> Result<(), GroupError> {
    for h in subgroups {
        for &x in h.elements() {
            group.check_element(x)?;
        }
    }
    Ok(())
}

pub fn coset_entropy_point(group: &FiniteGroup, subgroups: &[Subgroup]) -> Result<GroupEntropyPoint, GroupError> {
    check_subgroups(group, subgroups)?;
    let m = subgroups.len();
    let n = group.order();
    let mut orders = Vec::new();
    let mut values = Vec::new();
    for s in subsets(m)? {
        let members: Vec<&Subgroup> = s.coordinates().into_iter().map(|k| &subgroups[k]).collect();
        let h = intersect(group, &members).order();
        debug_assert_eq!(n % h, 0);
        orders.push(h);
        values.push(ExactLogLin::log2_of((n / h) as u64)?);
    }
    Ok(GroupEntropyPoint { group_order: n, intersection_orders: orders, vector: EntropyVector::exact(m, values)? })
}

/// Maps every element `g` to the index of its left coset `g·H`, cosets
/// numbered in increasing order of their least element.
pub fn coset_labels(group: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let n = group.order();
    let reps: Vec<usize> = (0..n)
        .map(|g| h.elements().iter().map(|&x| group.mul(g, x)).min().expect("subgroups are nonempty"))
        .collect();
    let mut distinct = reps.clone();
    distinct.sort_unstable();
    distinct.dedup();
    reps.into_iter().map(|r| distinct.binary_search(&r).expect("present")).collect()
}

/// `A = {(gH_1, …, gH_m) : g ∈ G}` with cosets written as their labels.
pub fn witness_set(group: &FiniteGroup, subgroups: &[Subgroup]) -> Result<SupportSet, GroupError> {
    check_subgroups(group, subgroups)?;
    let labels: Vec<Vec<usize>> = subgroups.iter().map(|h| coset_labels(group, h)).collect();
    let points = (0..group.order()).map(|g| labels.iter().map(|l| l[g] as u32).collect::<Vec<u32>>());
    SupportSet::new(subgroups.len(), points).map_err(|e| match e {
        crate::error::DistError::Model(m) => GroupError::Model(m),
        other => unreachable!("group witness sets are well formed: {other}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Subgroup tuples scanned per group before moving on.
    pub max_tuples_per_group: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_tuples_per_group: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupViolation {
    pub group_name: String,
    pub group: FiniteGroup,
    /// Positions of the chosen subgroups in the group's enumerated list.
    pub tuple: Vec<usize>,
    pub subgroups: Vec<Subgroup>,
    pub point: GroupEntropyPoint,
    /// Exact negative slack, in bits.
    pub slack: ExactLogLin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub violation: Option<GroupViolation>,
    pub groups_scanned: usize,
    pub tuples_scanned: u64,
    /// Groups whose tuple space was cut at the limit.
    pub truncated: Vec<String>,
}

struct Prepared<'a> {
    subgroups: Vec<Subgroup>,
    bits: Vec<Vec<u64>>,
    words: usize,
    log2: Vec<f64>,
    ineq: &'a LinearInequality,
    coeffs: Vec<(usize, f64)>,
    n: usize,
}

impl Prepared<'_> {
    fn decode(&self, mut t: u64, m: usize) -> Vec<usize> {
        let k = self.subgroups.len() as u64;
        let mut tuple = vec![0; m];
        for slot in tuple.iter_mut().rev() {
            *slot = (t % k) as usize;
            t /= k;
        }
        tuple
    }

    /// `#H_I` for every mask `1..2^m`, index `mask - 1`.
    fn intersection_orders(&self, tuple: &[usize]) -> Vec<usize> {
        let m = tuple.len();
        let w = self.words;
        let mut buf = vec![0u64; (1 << m) * w];
        let mut orders = vec![0usize; (1 << m) - 1];
        for mask in 1usize..(1 << m) {
            let low = mask & mask.wrapping_neg();
            let (head, tail) = buf.split_at_mut(mask * w);
            let dst = &mut tail[..w];
            if mask == low {
                dst.copy_from_slice(&self.bits[tuple[low.trailing_zeros() as usize]]);
            } else {
                let rest = &head[(mask ^ low) * w..(mask ^ low) * w + w];
                let single = &self.bits[tuple[low.trailing_zeros() as usize]];
                for i in 0..w {
                    dst[i] = rest[i] & single[i];
                }
            }
            orders[mask - 1] = dst.iter().map(|x| x.count_ones() as usize).sum();
        }
        orders
    }

    fn check(&self, tuple: &[usize]) -> Result<Option<ExactLogLin>, GroupError> {
        let orders = self.intersection_orders(tuple);
        let float: f64 = self
            .coeffs
            .iter()
            .map(|&(k, c)| c * (self.log2[self.n] - self.log2[orders[k]]))
            .sum();
        // values this far above zero cannot be violations
        if float > 1e-6 {
            return Ok(None);
        }
        let exact: ExactLogLin = self
            .ineq
            .coeffs()
            .iter()
            .map(|(s, c)| ExactLogLin::term(c.clone(), (self.n / orders[s.ordinal()]) as u64))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .sum();
        Ok((exact.sign()? == Sign::Negative).then_some(exact))
    }
}

/// Scans each catalog group's subgroup `m`-tuples in lexicographic order and
/// returns the first whose coset point gives the inequality a negative
/// slack. Exhaustion means "none within the catalog", not that the
/// inequality holds.
pub fn search_violation(
    ineq: &LinearInequality,
    catalog: &[NamedGroup],
    limits: SearchLimits,
) -> Result<SearchOutcome, GroupError> {
    if catalog.is_empty() {
        return Err(GroupError::EmptyCatalog);
    }
    let m = ineq.m();
    let mut outcome = SearchOutcome { violation: None, groups_scanned: 0, tuples_scanned: 0, truncated: Vec::new() };
    for named in catalog {
        let group = &named.group;
        let n = group.order();
        let subgroups = enumerate_subgroups(group);
        let words = n.div_ceil(64);
        let bits = subgroups
            .iter()
            .map(|h| {
                let mut b = vec![0u64; words];
                for &x in h.elements() {
                    b[x / 64] |= 1 << (x % 64);
                }
                b
            })
            .collect();
        let prepared = Prepared {
            bits,
            words,
            log2: (0..=n).map(|k| (k as f64).log2()).collect(),
            ineq,
            coeffs: ineq.coeffs().iter().map(|(s, c)| (s.ordinal(), rational_to_f64(c))).collect(),
            n,
            subgroups,
        };
        let total = (prepared.subgroups.len() as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
        let budget = total.min(limits.max_tuples_per_group);
        if budget < total {
            outcome.truncated.push(named.name.clone());
        }
        outcome.groups_scanned += 1;

        let hit = (0..budget).into_par_iter().find_map_first(|t| {
            let tuple = prepared.decode(t, m);
            match prepared.check(&tuple) {
                Ok(None) => None,
                Ok(Some(slack)) => Some(Ok((t, tuple, slack))),
                Err(e) => Some(Err(e)),
            }
        });
        match hit {
            None => outcome.tuples_scanned += budget,
            Some(Err(e)) => return Err(e),
            Some(Ok((t, tuple, slack))) => {
                outcome.tuples_scanned += t + 1;
                let chosen: Vec<Subgroup> = tuple.iter().map(|&k| prepared.subgroups[k].clone()).collect();
                let point = coset_entropy_point(group, &chosen)?;
                outcome.violation = Some(GroupViolation {
                    group_name: named.name.clone(),
                    group: group.clone(),
                    tuple,
                    subgroups: chosen,
                    point,
                    slack,
                });
                return Ok(outcome);
            }
        }
    }
    Ok(outcome)
}
