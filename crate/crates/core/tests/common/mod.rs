//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;

/// Elemental rows as dense integer vectors indexed by `mask - 1`, built
/// straight from the definitions of `H(N) - H(N - i)` and `I(i;j|K)`.
pub fn elemental_rows(m: usize) -> Vec<Vec<i64>> {
    let n = (1usize << m) - 1;
    let full = n;
    let mut rows = Vec::new();
    let add = |row: &mut Vec<i64>, mask: usize, c: i64| {
        if mask != 0 {
            row[mask - 1] += c;
        }
    };
    for i in 0..m {
        let mut row = vec![0; n];
        add(&mut row, full, 1);
        add(&mut row, full & !(1 << i), -1);
        rows.push(row);
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..=full {
                if k & (1 << i) != 0 || k & (1 << j) != 0 {
                    continue;
                }
                let mut row = vec![0; n];
                add(&mut row, k | 1 << i, 1);
                add(&mut row, k | 1 << j, 1);
                add(&mut row, k | 1 << i | 1 << j, -1);
                add(&mut row, k, -1);
                rows.push(row);
            }
        }
    }
    rows
}

pub fn projection_count(points: &[Vec<u32>], coords: &[usize]) -> usize {
    points.iter().map(|p| coords.iter().map(|&c| p[c]).collect::<Vec<_>>()).collect::<HashSet<_>>().len()
}

pub fn mask_coords(mask: usize) -> Vec<usize> {
    (0..16).filter(|b| mask >> b & 1 == 1).collect()
}

/// Shannon entropy in bits of the marginal on `coords`.
pub fn marginal_entropy(atoms: &[(Vec<u32>, f64)], coords: &[usize]) -> f64 {
    let mut marg: HashMap<Vec<u32>, f64> = HashMap::new();
    for (p, w) in atoms {
        *marg.entry(coords.iter().map(|&c| p[c]).collect()).or_default() += w;
    }
    marg.values().filter(|&&w| w > 0.0).map(|&w| -w * w.log2()).sum()
}

/// Number of left cosets `gH`, by listing them.
pub fn coset_count(table: &[Vec<usize>], h: &[usize]) -> usize {
    (0..table.len())
        .map(|g| h.iter().map(|&x| table[g][x]).collect::<BTreeSet<_>>())
        .collect::<HashSet<_>>()
        .len()
}

pub fn intersection(sets: &[&[usize]], order: usize) -> Vec<usize> {
    (0..order).filter(|x| sets.iter().all(|s| s.contains(x))).collect()
}

/// A nonempty random set of at most `max_points` points in `{0..n-1}^m`.
pub fn random_points(rng: &mut impl Rng, m: usize, n: u32, max_points: usize) -> Vec<Vec<u32>> {
    let target = rng.random_range(1..=max_points);
    let mut set = BTreeSet::new();
    for _ in 0..target {
        set.insert((0..m).map(|_| rng.random_range(0..n)).collect::<Vec<u32>>());
    }
    set.into_iter().collect()
}
