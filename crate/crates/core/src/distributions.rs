//! Finite joint distributions and their entropy vectors.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::DistError;
use crate::model::{
    coordinate_count, format_rational, neumaier_sum, rational_to_f64, subsets, EntropyVector,
    ExactLogLin, Rational, SubsetIndex, MAX_VARS,
};
use crate::points::{self, Fibers};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub point: Vec<u32>,
    pub prob: Rational,
}

/// A distribution of `m` jointly distributed variables with finite ranges.
/// Atoms are kept sorted by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    m: usize,
    atoms: Vec<Atom>,
}

fn check_m(m: usize) -> Result<(), DistError> {
    if m == 0 || m > MAX_VARS {
        return Err(crate::error::ModelError::VarCountOutOfRange { m, max: MAX_VARS }.into());
    }
    Ok(())
}

impl JointDistribution {
    /// Validates the atoms (positive probabilities summing to exactly one,
    /// distinct points of arity `m`) and sorts them by point.
    pub fn validate(m: usize, mut atoms: Vec<Atom>) -> Result<Self, DistError> {
        check_m(m)?;
        if atoms.is_empty() {
            return Err(DistError::Empty);
        }
        for a in &atoms {
            if a.point.len() != m {
                return Err(DistError::WrongArity { point: a.point.clone(), expected: m, found: a.point.len() });
            }
            if !a.prob.is_positive() {
                return Err(DistError::NonPositive { point: a.point.clone(), prob: format_rational(&a.prob) });
            }
        }
        atoms.sort_by(|a, b| a.point.cmp(&b.point));
        if let Some(w) = atoms.windows(2).find(|w| w[0].point == w[1].point) {
            return Err(DistError::DuplicatePoint(w[0].point.clone()));
        }
        let total = atoms.iter().fold(Rational::zero(), |acc, a| acc + &a.prob);
        if !total.is_one() {
            return Err(DistError::BadTotal(format_rational(&total)));
        }
        Ok(Self { m, atoms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Exact marginal law of the coordinates in `subset`.
    pub fn marginal(&self, subset: SubsetIndex) -> BTreeMap<Vec<u32>, Rational> {
        let coords = subset.coordinates();
        let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for a in &self.atoms {
            *out.entry(points::project_point(&a.point, &coords)).or_insert_with(Rational::zero) += &a.prob;
        }
        out
    }

    /// Shannon entropy of the marginal on `subset`, in bits.
    pub fn marginal_entropy(&self, subset: SubsetIndex) -> f64 {
        let terms = self.marginal(subset).into_values().map(|p| {
            let p = rational_to_f64(&p);
            -p * p.log2()
        });
        neumaier_sum(terms).max(0.0)
    }

    pub fn entropy_vector_float(&self) -> EntropyVector {
        let values = subsets(self.m)
            .expect("m validated")
            .into_iter()
            .map(|s| self.marginal_entropy(s))
            .collect();
        EntropyVector::float(self.m, values).expect("entropies are nonnegative")
    }
}

/// A finite set of points, read as the uniform distribution on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    m: usize,
    points: BTreeSet<Vec<u32>>,
}

impl SupportSet {
    pub fn new(m: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, DistError> {
        check_m(m)?;
        let points: BTreeSet<Vec<u32>> = points.into_iter().collect();
        if points.is_empty() {
            return Err(DistError::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(DistError::WrongArity { point: p.clone(), expected: m, found: p.len() });
        }
        Ok(Self { m, points })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &BTreeSet<Vec<u32>> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_distribution(&self) -> JointDistribution {
        let p = Rational::new(1.into(), (self.points.len() as u64).into());
        let atoms = self.points.iter().map(|pt| Atom { point: pt.clone(), prob: p.clone() }).collect();
        JointDistribution::validate(self.m, atoms).expect("uniform law on a valid support")
    }

    /// Exact entropies `log₂ #s_I`, valid when every projection has uniform
    /// fibers. Reports the first subset (ascending bitmask) that does not.
    pub fn exact_entropy_vector(&self) -> Result<EntropyVector, DistError> {
        let mut values = Vec::with_capacity(coordinate_count(self.m));
        for s in subsets(self.m)? {
            match points::uniform_fibers(&self.points, s) {
                Fibers::Uniform(fiber) => {
                    let image = self.points.len() / fiber;
                    values.push(ExactLogLin::log2_of(image as u64)?);
                }
                Fibers::NonUniform(_) => return Err(DistError::NonUniformFibers(s)),
            }
        }
        Ok(EntropyVector::exact(self.m, values)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn atom(point: &[u32], n: i64, d: i64) -> Atom {
        Atom { point: point.to_vec(), prob: q(n, d) }
    }

    fn s(pos: &[usize], m: usize) -> SubsetIndex {
        SubsetIndex::from_positions(pos, m).unwrap()
    }

    #[test]
    fn validation() {
        let d = JointDistribution::validate(1, vec![atom(&[1], 1, 2), atom(&[0], 1, 2)]).unwrap();
        assert_eq!(d.atoms()[0].point, vec![0]);
        assert!(matches!(
            JointDistribution::validate(1, vec![atom(&[0], 1, 2), atom(&[1], 1, 4)]),
            Err(DistError::BadTotal(t)) if t == "3/4"
        ));
        assert!(matches!(
            JointDistribution::validate(1, vec![atom(&[0], 1, 2), atom(&[0], 1, 2)]),
            Err(DistError::DuplicatePoint(_))
        ));
        assert!(matches!(
            JointDistribution::validate(1, vec![atom(&[0], 0, 1), atom(&[1], 1, 1)]),
            Err(DistError::NonPositive { .. })
        ));
        assert!(matches!(
            JointDistribution::validate(2, vec![atom(&[0], 1, 1)]),
            Err(DistError::WrongArity { .. })
        ));
    }

    #[test]
    fn marginal_entropies() {
        let bits = SupportSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let d = bits.to_distribution();
        assert!((d.marginal_entropy(s(&[1], 2)) - 1.0).abs() < 1e-12);
        assert_eq!(d.entropy_vector_float().to_f64_vec(), vec![1.0, 1.0, 2.0]);

        let copy = JointDistribution::validate(2, vec![atom(&[0, 0], 1, 2), atom(&[1, 1], 1, 2)]).unwrap();
        assert!((copy.marginal_entropy(s(&[1, 2], 2)) - 1.0).abs() < 1e-12);

        let same = JointDistribution::validate(3, vec![atom(&[0, 0, 0], 1, 2), atom(&[1, 1, 1], 1, 2)]).unwrap();
        assert!(same.entropy_vector_float().to_f64_vec().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn three_point_support() {
        let d = SupportSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap().to_distribution();
        // H(2/3, 1/3) written out directly
        let h = -(2.0f64 / 3.0) * (2.0f64 / 3.0).log2() - (1.0f64 / 3.0) * (1.0f64 / 3.0).log2();
        assert!((h - 0.918_295_834_054_489_7).abs() < 1e-12);
        let v = d.entropy_vector_float().to_f64_vec();
        assert!((v[0] - h).abs() < 1e-9);
        assert!((v[1] - h).abs() < 1e-9);
        assert!((v[2] - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn exact_vectors() {
        let full = SupportSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let v = full.exact_entropy_vector().unwrap();
        assert_eq!(v.to_f64_vec(), vec![1.0, 1.0, 2.0]);

        let parity =
            SupportSet::new(3, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let v = parity.exact_entropy_vector().unwrap();
        // distinct projections counted by hand: singletons 2, pairs 4, all 4
        let expected_sizes = [2u64, 2, 4, 2, 4, 4, 4];
        for (k, sub) in subsets(3).unwrap().into_iter().enumerate() {
            let diff = v.get_exact(sub).unwrap() - &ExactLogLin::log2_of(expected_sizes[k]).unwrap();
            assert!(diff.is_zero());
        }

        let bad = SupportSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(bad.exact_entropy_vector(), Err(DistError::NonUniformFibers(s(&[1], 2))));
    }
}
