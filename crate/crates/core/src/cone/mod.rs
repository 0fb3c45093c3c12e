//! Membership of linear inequalities in the cone generated by the elemental
//! Shannon inequalities, decided by exact LP with a checkable answer either
//! way.

mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dsl;
use crate::error::ConeError;
use crate::model::{
    coordinate_count, format_rational, subsets, LinearInequality, Rational, Sign, SubsetIndex,
};

pub use simplex::{solve_nonnegative, Feasibility};

/// Smallest and largest variable counts supported by the LP.
pub const MIN_ELEMENTAL_VARS: usize = 1;
pub const MAX_ELEMENTAL_VARS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementalKind {
    /// `H(all) - H(all minus {i}) >= 0`.
    Monotone { i: usize },
    /// `I(i;j|K) >= 0`, with `K` given as a bitmask (0 for the empty set).
    Submodular { i: usize, j: usize, k_mask: u16 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementalRow {
    pub kind: ElementalKind,
    pub ineq: LinearInequality,
}

/// The elemental Shannon inequalities over `m` variables: `m` monotonicity
/// rows followed by `C(m,2)·2^(m-2)` conditional mutual information rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementalSet {
    m: usize,
    rows: Vec<ElementalRow>,
}

impl ElementalSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[ElementalRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Expected row count `m + C(m,2)·2^(m-2)`.
pub fn elemental_count(m: usize) -> usize {
    if m < 2 {
        return m;
    }
    m + m * (m - 1) / 2 * (1 << (m - 2))
}

pub fn elemental_inequalities(m: usize) -> Result<ElementalSet, ConeError> {
    if !(MIN_ELEMENTAL_VARS..=MAX_ELEMENTAL_VARS).contains(&m) {
        return Err(ConeError::OutOfRange(m));
    }
    let full = SubsetIndex::full(m)?.mask();
    let one = || Rational::one();
    let mut rows = Vec::with_capacity(elemental_count(m));
    for i in 1..=m {
        let rest = full & !(1 << (i - 1));
        let mut coeffs = vec![(SubsetIndex::full(m)?, one())];
        if rest != 0 {
            coeffs.push((SubsetIndex::from_mask(rest, m)?, -one()));
        }
        rows.push(ElementalRow { kind: ElementalKind::Monotone { i }, ineq: LinearInequality::new(m, coeffs)? });
    }
    for i in 1..=m {
        for j in (i + 1)..=m {
            let pair = (1u16 << (i - 1)) | (1u16 << (j - 1));
            let others = full & !pair;
            // all K ⊆ others, ascending bitmask, starting from the empty set
            let mut ks: Vec<u16> = (0..=others).filter(|k| k & !others == 0).collect();
            ks.sort_unstable();
            for k in ks {
                let mk = |mask: u16| SubsetIndex::from_mask(mask, m);
                let mut coeffs = vec![
                    (mk((1 << (i - 1)) | k)?, one()),
                    (mk((1 << (j - 1)) | k)?, one()),
                    (mk(pair | k)?, -one()),
                ];
                if k != 0 {
                    coeffs.push((mk(k)?, -one()));
                }
                rows.push(ElementalRow {
                    kind: ElementalKind::Submodular { i, j, k_mask: k },
                    ineq: LinearInequality::new(m, coeffs)?,
                });
            }
        }
    }
    debug_assert_eq!(rows.len(), elemental_count(m));
    Ok(ElementalSet { m, rows })
}

/// Nonnegative weights `y_r` with `Σ y_r·row_r = target` coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShannonCertificate {
    pub weights: Vec<(usize, Rational)>,
}

/// A polymatroid point (every elemental slack ≥ 0) on which the target
/// inequality has negative slack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasWitness {
    pub m: usize,
    /// Coordinates in ascending bitmask order.
    pub point: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShannonDecision {
    ShannonType(ShannonCertificate),
    NotShannonType(FarkasWitness),
}

impl ShannonDecision {
    pub fn is_shannon_type(&self) -> bool {
        matches!(self, ShannonDecision::ShannonType(_))
    }
}

/// Decides whether `ineq` is a nonnegative combination of elemental Shannon
/// inequalities.
pub fn is_shannon_type(ineq: &LinearInequality) -> Result<ShannonDecision, ConeError> {
    let set = elemental_inequalities(ineq.m())?;
    let n = coordinate_count(ineq.m());
    // Columns are elemental rows, rows are entropy coordinates.
    let dense_rows: Vec<Vec<Rational>> = set.rows.iter().map(|r| r.ineq.dense()).collect();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|t| dense_rows.iter().map(|row| row[t].clone()).collect())
        .collect();
    let b = ineq.dense();
    let decision = match solve_nonnegative(&a, &b) {
        Feasibility::Feasible(y) => ShannonDecision::ShannonType(ShannonCertificate {
            weights: y.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect(),
        }),
        Feasibility::Infeasible(z) => ShannonDecision::NotShannonType(FarkasWitness {
            m: ineq.m(),
            point: to_primitive_integers(z),
        }),
    };
    // both answers are cheap to re-check; never hand out an unchecked one
    match &decision {
        ShannonDecision::ShannonType(c) => verify_certificate(ineq, c)?,
        ShannonDecision::NotShannonType(w) => verify_farkas(ineq, w)?,
    }
    Ok(decision)
}

/// Scales a rational vector by a positive factor so its entries become
/// coprime integers.
fn to_primitive_integers(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

pub fn verify_certificate(ineq: &LinearInequality, cert: &ShannonCertificate) -> Result<(), ConeError> {
    let set = elemental_inequalities(ineq.m())?;
    let n = coordinate_count(ineq.m());
    let mut combined = vec![Rational::zero(); n];
    for (row, w) in &cert.weights {
        if w.is_negative() {
            return Err(ConeError::NegativeWeight { row: *row });
        }
        let r = set.rows.get(*row).ok_or(ConeError::UnknownRow { row: *row, rows: set.len() })?;
        for (s, c) in r.ineq.coeffs() {
            combined[s.ordinal()] += w * c;
        }
    }
    let target = ineq.dense();
    for (k, s) in subsets(ineq.m())?.into_iter().enumerate() {
        if combined[k] != target[k] {
            return Err(ConeError::Mismatch {
                subset: s,
                combined: format_rational(&combined[k]),
                target: format_rational(&target[k]),
            });
        }
    }
    Ok(())
}

pub fn verify_farkas(ineq: &LinearInequality, w: &FarkasWitness) -> Result<(), ConeError> {
    let set = elemental_inequalities(ineq.m())?;
    let n = coordinate_count(ineq.m());
    if w.m != ineq.m() || w.point.len() != n {
        return Err(ConeError::WitnessShape { expected: n, found: w.point.len() });
    }
    for (k, row) in set.rows.iter().enumerate() {
        if row.ineq.eval_rational(&w.point)?.is_negative() {
            return Err(ConeError::WitnessNotPolymatroid { row: k, row_text: row_text(row) });
        }
    }
    let slack = ineq.eval_rational(&w.point)?;
    if Sign::of_rational(&slack) != Sign::Negative {
        return Err(ConeError::WitnessNotSeparating { slack: format_rational(&slack) });
    }
    Ok(())
}

pub fn row_text(row: &ElementalRow) -> String {
    dsl::format_inequality(&row.ineq, &dsl::default_names(row.ineq.m())).expect("names match m")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_inequality;

    #[test]
    fn counts() {
        assert_eq!(elemental_inequalities(1).unwrap().len(), 1);
        assert_eq!(elemental_inequalities(2).unwrap().len(), 3);
        assert_eq!(elemental_inequalities(3).unwrap().len(), 9);
        assert_eq!(elemental_inequalities(4).unwrap().len(), 28);
        assert_eq!(elemental_inequalities(6).unwrap().len(), 6 + 15 * 16);
        assert!(elemental_inequalities(0).is_err());
        assert!(elemental_inequalities(7).is_err());
    }

    #[test]
    fn two_variable_rows() {
        let set = elemental_inequalities(2).unwrap();
        let texts: Vec<String> = set.rows().iter().map(row_text).collect();
        assert_eq!(
            texts,
            ["1 H(x2) <= 1 H(x1,x2)", "1 H(x1) <= 1 H(x1,x2)", "1 H(x1,x2) <= 1 H(x1) + 1 H(x2)"]
        );
    }

    #[test]
    fn monotonicity_is_its_own_certificate() {
        let ineq = parse_inequality("H(x) <= H(x,y)", None).unwrap();
        match is_shannon_type(&ineq).unwrap() {
            ShannonDecision::ShannonType(c) => {
                assert_eq!(c.weights, vec![(1, Rational::one())]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn perturbed_certificate_is_rejected() {
        let ineq = parse_inequality("H(x) <= H(x,y)", None).unwrap();
        let bad = ShannonCertificate {
            weights: vec![(1, Rational::one() + Rational::new(1.into(), 1000.into()))],
        };
        assert!(matches!(verify_certificate(&ineq, &bad), Err(ConeError::Mismatch { .. })));
        let neg = ShannonCertificate { weights: vec![(1, -Rational::one())] };
        assert!(matches!(verify_certificate(&ineq, &neg), Err(ConeError::NegativeWeight { .. })));
        let unknown = ShannonCertificate { weights: vec![(99, Rational::one())] };
        assert!(matches!(verify_certificate(&ineq, &unknown), Err(ConeError::UnknownRow { .. })));
    }

    #[test]
    fn false_inequality_gets_a_witness() {
        let ineq = parse_inequality("H(x,y) <= H(x)", None).unwrap();
        match is_shannon_type(&ineq).unwrap() {
            ShannonDecision::NotShannonType(w) => verify_farkas(&ineq, &w).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_point_is_not_a_witness() {
        let ineq = parse_inequality("H(x,y) <= H(x)", None).unwrap();
        let w = FarkasWitness { m: 2, point: vec![Rational::zero(); 3] };
        assert!(matches!(verify_farkas(&ineq, &w), Err(ConeError::WitnessNotSeparating { .. })));
    }
}
