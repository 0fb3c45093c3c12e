use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::GroupError;

/// Largest group built from permutation generators.
pub const MAX_GENERATED_ORDER: usize = 10_000;

/// A finite group given by its Cayley table over element indices
/// `0..order`, with the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms. Errors name the first violated axiom
    /// together with a witness.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::InvalidTable);
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * n + b];
        if (0..n).any(|x| mul(0, x) != x || mul(x, 0) != x) {
            return Err(GroupError::NoIdentity);
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| mul(a, b) == 0 && mul(b, a) == 0).ok_or(GroupError::NoInverse(a)))
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self { order: n, table, inverses })
    }

    /// Table built by construction from a known group law; skips the cubic
    /// associativity check.
    fn from_law(order: usize, law: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(law(a, b));
            }
        }
        let inverses = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("group law has inverses"))
            .collect();
        Self { order, table, inverses }
    }

    /// The group generated by permutations of `0..degree`, composed as
    /// `(p·q)(x) = p(q(x))`. Elements are numbered in breadth-first order
    /// from the identity.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        for g in generators {
            let distinct: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != degree || distinct.len() != degree || g.iter().any(|&x| x >= degree) {
                return Err(GroupError::BadPermutation(g.clone()));
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in generators {
                let next = compose(&elements[k], g);
                if !index.contains_key(&next) {
                    if elements.len() == MAX_GENERATED_ORDER {
                        return Err(GroupError::TooLarge(MAX_GENERATED_ORDER));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        Ok(Self::from_law(n, |a, b| index[&compose(&elements[a], &elements[b])]))
    }

    /// `Z_n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_law(n, |a, b| (a + b) % n)
    }

    /// Direct product; element `a + self.order()·b` is the pair `(a, b)`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let n = self.order;
        Self::from_law(n * other.order, |x, y| {
            let (xa, xb) = (x % n, x / n);
            let (ya, yb) = (y % n, y / n);
            self.mul(xa, ya) + n * other.mul(xb, yb)
        })
    }

    /// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_law(2 * n, |x, y| {
            let (i1, j1) = (x % n, x / n);
            let (i2, j2) = (y % n, y / n);
            let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
            i + n * (j1 ^ j2)
        })
    }

    /// Symmetric group on `k` points, generated by `(0 1)` and a `k`-cycle.
    pub fn symmetric(k: usize) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return Self::cyclic(1);
        }
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..k).map(|x| (x + 1) % k).collect();
        Self::from_permutations(k, &[swap, cycle]).expect("valid generators")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub(crate) fn check_element(&self, x: usize) -> Result<(), GroupError> {
        if x >= self.order {
            return Err(GroupError::ElementOutOfRange { index: x, order: self.order });
        }
        Ok(())
    }
}

/// A subgroup, as a sorted list of element indices. Normality is not
/// required.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Checks that `elements` contains the identity and is closed under the
    /// group law and inverses.
    pub fn from_elements(group: &FiniteGroup, elements: Vec<usize>) -> Result<Self, GroupError> {
        for &x in &elements {
            group.check_element(x)?;
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        let closed = set.contains(&0)
            && set.iter().all(|&a| set.contains(&group.inverse(a)))
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&group.mul(a, b))));
        if !closed {
            return Err(GroupError::NotSubgroup(elements));
        }
        Ok(Self { elements: set.into_iter().collect() })
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self { elements: (0..group.order()).collect() }
    }

    pub fn trivial() -> Self {
        Self { elements: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// Closure of `gens` under the group law.
pub fn subgroup_from_generators(group: &FiniteGroup, gens: &[usize]) -> Result<Subgroup, GroupError> {
    for &g in gens {
        group.check_element(g)?;
    }
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(Subgroup { elements: set.into_iter().collect() })
}

/// Intersection of subgroups; the whole group for an empty list.
pub fn intersect(group: &FiniteGroup, subgroups: &[&Subgroup]) -> Subgroup {
    let Some((first, rest)) = subgroups.split_first() else {
        return Subgroup::whole(group);
    };
    let elements = first
        .elements
        .iter()
        .copied()
        .filter(|&x| rest.iter().all(|h| h.contains(x)))
        .collect();
    Subgroup { elements }
}

/// Subgroups generated by at most two elements, plus the whole group,
/// deduplicated and sorted by (order, elements).
pub fn enumerate_subgroups(group: &FiniteGroup) -> Vec<Subgroup> {
    let n = group.order();
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    found.insert(Subgroup::trivial());
    found.insert(Subgroup::whole(group));
    let cyclic: Vec<Subgroup> = (0..n)
        .map(|a| subgroup_from_generators(group, &[a]).expect("valid index"))
        .collect();
    for a in 0..n {
        found.insert(cyclic[a].clone());
        for b in (a + 1)..n {
            // ⟨a, b⟩ = ⟨a⟩ when b already lies in ⟨a⟩
            if cyclic[a].contains(b) || cyclic[b].contains(a) {
                continue;
            }
            found.insert(subgroup_from_generators(group, &[a, b]).expect("valid index"));
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|x, y| x.order().cmp(&y.order()).then_with(|| x.elements.cmp(&y.elements)));
    out
}
