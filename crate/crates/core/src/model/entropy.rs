use num_traits::Zero;

use super::loglin::{rational_to_f64, ExactLogLin, Rational, Sign};
use super::subset::{check_var_count, coordinate_count, SubsetIndex};
use crate::error::ModelError;

/// Float entries may dip this far below zero before being rejected.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum EntropyValues {
    Float(Vec<f64>),
    Exact(Vec<ExactLogLin>),
}

/// Entropies `H(ξ_I)` in bits for every nonempty `I ⊆ {1..m}`, indexed in
/// ascending bitmask order.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVector {
    m: usize,
    values: EntropyValues,
}

/// A signed inequality slack, in the same mode as the vector it came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Slack {
    Float(f64),
    Exact(ExactLogLin),
}

impl Slack {
    pub fn to_f64(&self) -> f64 {
        match self {
            Slack::Float(x) => *x,
            Slack::Exact(x) => x.to_f64(),
        }
    }

    /// Sign of the slack; float slacks within `FLOAT_TOLERANCE` of zero
    /// count as zero.
    pub fn sign(&self) -> Result<Sign, ModelError> {
        match self {
            Slack::Float(x) if x.abs() <= FLOAT_TOLERANCE => Ok(Sign::Zero),
            Slack::Float(x) => Ok(Sign::of_f64(*x)),
            Slack::Exact(x) => x.sign(),
        }
    }

    pub fn is_violation(&self) -> Result<bool, ModelError> {
        Ok(self.sign()? == Sign::Negative)
    }
}

impl std::fmt::Display for Slack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slack::Float(x) => write!(f, "{x}"),
            Slack::Exact(x) => write!(f, "{x}"),
        }
    }
}

impl EntropyVector {
    pub fn float(m: usize, values: Vec<f64>) -> Result<Self, ModelError> {
        check_len(m, values.len())?;
        for (k, v) in values.iter().enumerate() {
            if v.is_nan() || *v < -FLOAT_TOLERANCE {
                return Err(ModelError::NegativeEntropy {
                    subset: SubsetIndex::from_mask_unchecked(k as u16 + 1),
                });
            }
        }
        Ok(Self { m, values: EntropyValues::Float(values) })
    }

    pub fn exact(m: usize, values: Vec<ExactLogLin>) -> Result<Self, ModelError> {
        check_len(m, values.len())?;
        for (k, v) in values.iter().enumerate() {
            if v.sign()? == Sign::Negative {
                return Err(ModelError::NegativeEntropy {
                    subset: SubsetIndex::from_mask_unchecked(k as u16 + 1),
                });
            }
        }
        Ok(Self { m, values: EntropyValues::Exact(values) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &EntropyValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, EntropyValues::Exact(_))
    }

    pub fn get_f64(&self, subset: SubsetIndex) -> f64 {
        match &self.values {
            EntropyValues::Float(v) => v[subset.ordinal()],
            EntropyValues::Exact(v) => v[subset.ordinal()].to_f64(),
        }
    }

    pub fn get_exact(&self, subset: SubsetIndex) -> Option<&ExactLogLin> {
        match &self.values {
            EntropyValues::Float(_) => None,
            EntropyValues::Exact(v) => Some(&v[subset.ordinal()]),
        }
    }

    /// Float rendering of every coordinate.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        match &self.values {
            EntropyValues::Float(v) => v.clone(),
            EntropyValues::Exact(v) => v.iter().map(ExactLogLin::to_f64).collect(),
        }
    }

    /// `Σ c_T·v[T]`.
    pub fn dot(&self, coeffs: impl IntoIterator<Item = (SubsetIndex, Rational)>) -> Slack {
        match &self.values {
            EntropyValues::Float(v) => {
                let terms = coeffs
                    .into_iter()
                    .map(|(s, c)| rational_to_f64(&c) * v[s.ordinal()]);
                Slack::Float(neumaier_sum(terms))
            }
            EntropyValues::Exact(v) => Slack::Exact(
                coeffs
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(s, c)| v[s.ordinal()].scale(&c))
                    .sum(),
            ),
        }
    }
}

fn check_len(m: usize, len: usize) -> Result<(), ModelError> {
    check_var_count(m)?;
    let expected = coordinate_count(m);
    if len != expected {
        return Err(ModelError::WrongLength { expected, found: len });
    }
    Ok(())
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
