use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::entropy::{EntropyVector, Slack};
use super::loglin::{Rational, Sign};
use super::subset::{check_var_count, SubsetIndex};
use crate::error::ModelError;

/// A linear entropy inequality `Σ_T c_T·H(T) ≥ 0` over `m` variables.
///
/// Negative coefficients form the left-hand family (`λ_I = -c_I`), positive
/// ones the right-hand family (`μ_J = c_J`) of the split form
/// `Σ λ_I H(I) ≤ Σ μ_J H(J)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    m: usize,
    coeffs: BTreeMap<SubsetIndex, Rational>,
}

impl LinearInequality {
    /// Drops zero coefficients; fails if nothing remains.
    pub fn new(
        m: usize,
        coeffs: impl IntoIterator<Item = (SubsetIndex, Rational)>,
    ) -> Result<Self, ModelError> {
        check_var_count(m)?;
        let mut map: BTreeMap<SubsetIndex, Rational> = BTreeMap::new();
        for (s, c) in coeffs {
            if s.mask() as usize >= (1usize << m) {
                return Err(ModelError::BadSubset { mask: s.mask(), m });
            }
            *map.entry(s).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(ModelError::ZeroInequality);
        }
        Ok(Self { m, coeffs: map })
    }

    /// Convenience constructor from `(positions, integer coefficient)` pairs.
    pub fn from_integers(m: usize, terms: &[(&[usize], i64)]) -> Result<Self, ModelError> {
        let coeffs = terms
            .iter()
            .map(|(pos, c)| Ok((SubsetIndex::from_positions(pos, m)?, Rational::from_integer((*c).into()))))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Self::new(m, coeffs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &BTreeMap<SubsetIndex, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, subset: SubsetIndex) -> Rational {
        self.coeffs.get(&subset).cloned().unwrap_or_else(Rational::zero)
    }

    /// Dense coefficients in ascending bitmask order.
    pub fn dense(&self) -> Vec<Rational> {
        let n = (1usize << self.m) - 1;
        let mut out = vec![Rational::zero(); n];
        for (s, c) in &self.coeffs {
            out[s.ordinal()] = c.clone();
        }
        out
    }

    /// Left-hand family with positive weights `λ_I`.
    pub fn lhs(&self) -> Vec<(SubsetIndex, Rational)> {
        self.coeffs
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(s, c)| (*s, -c))
            .collect()
    }

    /// Right-hand family with positive weights `μ_J`.
    pub fn rhs(&self) -> Vec<(SubsetIndex, Rational)> {
        self.coeffs
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(s, c)| (*s, c.clone()))
            .collect()
    }

    /// Re-expresses the inequality over `new_m >= m` variables.
    pub fn widen(&self, new_m: usize) -> Result<Self, ModelError> {
        if new_m < self.m {
            return Err(ModelError::DimensionMismatch { expected: self.m, found: new_m });
        }
        Self::new(new_m, self.coeffs.clone())
    }

    /// `Σ c_T·v[T]`; negative means `v` violates the inequality.
    pub fn eval_slack(&self, v: &EntropyVector) -> Result<Slack, ModelError> {
        if v.m() != self.m {
            return Err(ModelError::DimensionMismatch { expected: self.m, found: v.m() });
        }
        Ok(v.dot(self.coeffs.iter().map(|(s, c)| (*s, c.clone()))))
    }

    /// Exact slack on a rational point given in ascending bitmask order.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, ModelError> {
        let n = (1usize << self.m) - 1;
        if point.len() != n {
            return Err(ModelError::WrongLength { expected: n, found: point.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(s, c)| c * &point[s.ordinal()])
            .fold(Rational::zero(), |a, b| a + b))
    }

    /// Whether the inequality holds on `v` (slack ≥ 0, exactly or within
    /// float tolerance).
    pub fn holds_on(&self, v: &EntropyVector) -> Result<bool, ModelError> {
        Ok(self.eval_slack(v)?.sign()? != Sign::Negative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::loglin::ExactLogLin;

    fn bits(x: u32) -> ExactLogLin {
        ExactLogLin::log2_of(1u32 << x).unwrap()
    }

    #[test]
    fn submodularity_on_independent_bits() {
        let ineq = LinearInequality::from_integers(2, &[(&[1], 1), (&[2], 1), (&[1, 2], -1)]).unwrap();
        let v = EntropyVector::float(2, vec![1.0, 1.0, 2.0]).unwrap();
        assert_eq!(ineq.eval_slack(&v).unwrap(), Slack::Float(0.0));
        let v = EntropyVector::exact(2, vec![bits(1), bits(1), bits(2)]).unwrap();
        assert_eq!(ineq.eval_slack(&v).unwrap().sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn loomis_whitney_form_on_three_bits() {
        let ineq = LinearInequality::from_integers(
            3,
            &[(&[1, 2], 1), (&[1, 3], 1), (&[2, 3], 1), (&[1, 2, 3], -2)],
        )
        .unwrap();
        // ascending bitmask: {1},{2},{12},{3},{13},{23},{123}
        let v = EntropyVector::float(3, vec![1.0, 1.0, 2.0, 1.0, 2.0, 2.0, 3.0]).unwrap();
        assert!(ineq.eval_slack(&v).unwrap().to_f64().abs() < 1e-12);
        assert_eq!(ineq.lhs().len(), 1);
        assert_eq!(ineq.rhs().len(), 3);
    }

    #[test]
    fn mismatch_and_zero() {
        let ineq = LinearInequality::from_integers(2, &[(&[1], 1)]).unwrap();
        let v = EntropyVector::float(3, vec![0.0; 7]).unwrap();
        assert!(matches!(ineq.eval_slack(&v), Err(ModelError::DimensionMismatch { .. })));
        assert_eq!(
            LinearInequality::from_integers(2, &[(&[1], 1), (&[1], -1)]),
            Err(ModelError::ZeroInequality)
        );
    }
}
