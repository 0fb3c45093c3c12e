use super::finite::FiniteGroup;

/// Largest cyclic group in the built-in catalog.
pub const MAX_CYCLIC: usize = 64;
/// Largest `n` for the dihedral groups `D_n` (order `2n`).
pub const MAX_DIHEDRAL: usize = 12;
/// Largest `k` for the symmetric groups `S_k`.
pub const MAX_SYMMETRIC: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGroup {
    pub name: String,
    pub group: FiniteGroup,
}

impl NamedGroup {
    pub fn new(name: impl Into<String>, group: FiniteGroup) -> Self {
        Self { name: name.into(), group }
    }
}

/// Built-in groups of order at most `max_order`: cyclic `Z_n` (n ≤ 64),
/// products of two or three nontrivial cyclic groups, dihedral `D_n`
/// (3 ≤ n ≤ 12) and symmetric `S_k` (3 ≤ k ≤ 5). Sorted by order, then name.
/// Isomorphic duplicates (such as `Z2xZ3` and `Z6`) are kept.
pub fn builtin_catalog(max_order: usize) -> Vec<NamedGroup> {
    let mut out = Vec::new();
    for n in 2..=MAX_CYCLIC.min(max_order) {
        out.push(NamedGroup::new(format!("Z{n}"), FiniteGroup::cyclic(n)));
    }
    for a in 2..=max_order {
        for b in a..=max_order {
            if a * b > max_order {
                break;
            }
            let ab = FiniteGroup::cyclic(a).direct_product(&FiniteGroup::cyclic(b));
            out.push(NamedGroup::new(format!("Z{a}xZ{b}"), ab.clone()));
            for c in b..=max_order {
                if a * b * c > max_order {
                    break;
                }
                out.push(NamedGroup::new(format!("Z{a}xZ{b}xZ{c}"), ab.direct_product(&FiniteGroup::cyclic(c))));
            }
        }
    }
    for n in 3..=MAX_DIHEDRAL {
        if 2 * n <= max_order {
            out.push(NamedGroup::new(format!("D{n}"), FiniteGroup::dihedral(n)));
        }
    }
    let mut factorial = 2;
    for k in 3..=MAX_SYMMETRIC {
        factorial *= k;
        if factorial <= max_order {
            out.push(NamedGroup::new(format!("S{k}"), FiniteGroup::symmetric(k)));
        }
    }
    out.sort_by(|x, y| x.group.order().cmp(&y.group.order()).then_with(|| x.name.cmp(&y.name)));
    out
}
