//! Cantor-type sets `C_A ⊂ [0,1]^m` built from a digit set
//! `A ⊂ {0..N-1}^m`, their dimensions `log #A / log N`, and the translation
//! of a group counterexample into a dimension counterexample.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::CantorError;
use crate::group::{coset_entropy_point, witness_set, FiniteGroup, GroupEntropyPoint, Subgroup};
use crate::model::{
    format_rational, log2_biguint, subsets, ExactLogLin, LinearInequality, Rational, Sign, Slack,
    SubsetIndex, MAX_VARS,
};
use crate::points::{self, Fibers};

/// Digit set `A` of a Cantor-type set in base `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorWitness {
    m: usize,
    base: u64,
    points: BTreeSet<Vec<u32>>,
}

impl CantorWitness {
    pub fn new(m: usize, base: u64, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, CantorError> {
        if m == 0 || m > MAX_VARS {
            return Err(crate::error::ModelError::VarCountOutOfRange { m, max: MAX_VARS }.into());
        }
        if base < 2 {
            return Err(CantorError::BadBase(base));
        }
        let points: BTreeSet<Vec<u32>> = points.into_iter().collect();
        if points.is_empty() {
            return Err(CantorError::Empty);
        }
        for p in &points {
            if p.len() != m {
                return Err(CantorError::WrongArity { point: p.clone(), expected: m, found: p.len() });
            }
            if let Some(&d) = p.iter().find(|&&d| u64::from(d) >= base) {
                return Err(CantorError::DigitOutOfRange { point: p.clone(), digit: d, base });
            }
        }
        Ok(Self { m, base, points })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> u64 {
        self.base
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

    /// Digit set of the projection `(C_A)_I = C_{A_I}`.
    pub fn project(&self, subset: SubsetIndex) -> CantorWitness {
        CantorWitness { m: subset.len(), base: self.base, points: points::project(&self.points, subset) }
    }

    pub fn dim_value(&self) -> DimValue {
        DimValue { card: self.points.len() as u64, base: self.base }
    }

    /// Fiber size of the projection `A → A_I` when all fibers agree.
    pub fn uniform_fiber(&self, subset: SubsetIndex) -> Fibers {
        points::uniform_fibers(&self.points, subset)
    }

    /// Checks `#B ≤ #B_I · f` for `B ⊆ A`, where `f` is the uniform fiber
    /// size of `A → A_I`: a point of `B` is fixed by its `I`-projection plus a
    /// choice inside one fiber.
    pub fn lemma_fiber_bound(
        &self,
        subset_b: &BTreeSet<Vec<u32>>,
        subset: SubsetIndex,
    ) -> Result<LemmaCheck, CantorError> {
        if let Some(p) = subset_b.iter().find(|p| !self.points.contains(*p)) {
            return Err(CantorError::NotContained(p.clone()));
        }
        let fiber = match self.uniform_fiber(subset) {
            Fibers::Uniform(f) => f,
            Fibers::NonUniform(_) => return Err(CantorError::NotUniform(subset)),
        };
        let b_count = subset_b.len();
        let b_projection = points::project(subset_b, subset).len();
        Ok(LemmaCheck { b_count, b_projection, fiber, holds: b_count <= b_projection * fiber })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCheck {
    pub b_count: usize,
    pub b_projection: usize,
    pub fiber: usize,
    pub holds: bool,
}

/// The dimension `log #A / log N` of a Cantor-type set, kept as the pair
/// `(#A, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DimValue {
    pub card: u64,
    pub base: u64,
}

impl DimValue {
    pub fn to_f64(&self) -> f64 {
        (self.card as f64).ln() / (self.base as f64).ln()
    }

    /// `dim · log₂ N = log₂ #A`.
    pub fn scaled(&self) -> ExactLogLin {
        ExactLogLin::log2_of(self.card).expect("cardinality is positive")
    }

    /// Sign of `dim - q`.
    pub fn cmp_rational(&self, q: &Rational) -> Result<Sign, CantorError> {
        dim_combination_sign(&[(Rational::one(), *self)], &-q.clone())
    }

    /// Canonical text `log2(#A)/log2(N)`.
    pub fn exact_string(&self) -> String {
        format!("log2({})/log2({})", self.card, self.base)
    }
}

/// Sign of `Σ r_k·dim_k + constant` for dimensions sharing one base; the
/// whole expression is multiplied by `log₂ N` and decided exactly.
pub fn dim_combination_sign(terms: &[(Rational, DimValue)], constant: &Rational) -> Result<Sign, CantorError> {
    let Some(base) = terms.first().map(|(_, d)| d.base) else {
        return Ok(Sign::of_rational(constant));
    };
    if let Some((_, d)) = terms.iter().find(|(_, d)| d.base != base) {
        return Err(CantorError::MixedBases(base, d.base));
    }
    let mut total: ExactLogLin = terms.iter().map(|(r, d)| d.scaled().scale(r)).sum();
    total = &total + &ExactLogLin::term(constant.clone(), base)?;
    Ok(total.sign()?)
}

/// A level `a_I = max(0, dim (C_A)_I - ε)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub subset: SubsetIndex,
    pub dim: DimValue,
    pub epsilon: Rational,
    /// `dim - ε < 0`, so the level is 0.
    pub clamped: bool,
}

impl Level {
    /// `a_I · log₂ N`.
    pub fn scaled(&self) -> ExactLogLin {
        if self.clamped {
            ExactLogLin::zero()
        } else {
            &self.dim.scaled() - &ExactLogLin::term(self.epsilon.clone(), self.dim.base).expect("base >= 2")
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.clamped {
            0.0
        } else {
            self.dim.to_f64() - crate::model::rational_to_f64(&self.epsilon)
        }
    }

    pub fn exact_string(&self) -> String {
        if self.clamped {
            "0".into()
        } else {
            format!("{} - {}", self.dim.exact_string(), format_rational(&self.epsilon))
        }
    }

    /// The level in bits, `a_I · log₂ N`, as a split budget.
    pub fn bits(&self) -> ExactLogLin {
        self.scaled()
    }
}

/// The Cantor-set counterexample to the dimension form of an inequality
/// built from a violating group and subgroup tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionCounterexample {
    pub inequality: LinearInequality,
    pub point: GroupEntropyPoint,
    /// Exact negative entropy slack, in bits.
    pub entropy_slack: ExactLogLin,
    pub witness: CantorWitness,
    /// `dim (C_A)_I` for every nonempty `I`, ascending bitmask order.
    pub dims: Vec<(SubsetIndex, DimValue)>,
    pub epsilon: Rational,
    /// One level per left-hand subset.
    pub levels: Vec<Level>,
    /// `(Σ λ_I a_I - Σ μ_J dim_J) · log₂ N`, strictly positive.
    pub margin: ExactLogLin,
}

impl DimensionCounterexample {
    pub fn dim(&self, subset: SubsetIndex) -> DimValue {
        self.dims[subset.ordinal()].1
    }

    pub fn margin_f64(&self) -> f64 {
        self.margin.to_f64() / (self.witness.base as f64).log2()
    }

    /// Re-checks every arithmetic premise from scratch: projection sizes,
    /// the level bounds and the strict inequality between the two sides.
    pub fn verify(&self) -> Result<(), CantorError> {
        let base = self.witness.base;
        if self.dims.len() != crate::model::coordinate_count(self.witness.m) {
            return Err(CantorError::Inconsistent("one dimension per nonempty subset".into()));
        }
        match self.inequality.eval_slack(self.point.vector())? {
            Slack::Exact(x) if x == self.entropy_slack && x.sign()? == Sign::Negative => {}
            _ => return Err(CantorError::Inconsistent("entropy slack is not the stored negative value".into())),
        }
        for s in subsets(self.witness.m)? {
            let card = self.witness.project(s).len() as u64;
            let listed = self.dims.get(s.ordinal()).map(|(t, _)| *t);
            if listed != Some(s) || card != self.point.index(s) as u64 || self.dim(s) != (DimValue { card, base }) {
                return Err(CantorError::Inconsistent(format!("projection {s} has {card} digits")));
            }
        }
        let lhs: ExactLogLin = self
            .inequality
            .lhs()
            .into_iter()
            .map(|(s, lambda)| {
                let level = self.levels.iter().find(|l| l.subset == s).ok_or_else(|| {
                    CantorError::Inconsistent(format!("no level for {s}"))
                })?;
                Ok(level.scaled().scale(&lambda))
            })
            .collect::<Result<Vec<_>, CantorError>>()?
            .into_iter()
            .sum();
        let rhs: ExactLogLin =
            self.inequality.rhs().into_iter().map(|(s, mu)| self.dim(s).scaled().scale(&mu)).sum();
        let margin = &lhs - &rhs;
        if margin.sign()? != Sign::Positive || !(&margin - &self.margin).is_zero() {
            return Err(CantorError::Inconsistent("levels do not beat the right-hand side".into()));
        }
        for level in &self.levels {
            if level.epsilon <= Rational::zero() || level.epsilon != self.epsilon {
                return Err(CantorError::Inconsistent("epsilon must be positive".into()));
            }
            let raw = &level.dim.scaled() - &ExactLogLin::term(level.epsilon.clone(), base)?;
            if level.clamped != (raw.sign()? == Sign::Negative) || level.dim != self.dim(level.subset) {
                return Err(CantorError::Inconsistent(format!("level for {} is not max(0, dim - eps)", level.subset)));
            }
            let above_zero = level.scaled().sign()?;
            if above_zero == Sign::Negative {
                return Err(CantorError::Inconsistent(format!("level for {} is negative", level.subset)));
            }
            if level.dim.card > 1 && (&level.dim.scaled() - &level.scaled()).sign()? != Sign::Positive {
                return Err(CantorError::Inconsistent(format!("level for {} is not below dim", level.subset)));
            }
        }
        Ok(())
    }
}

/// Largest `k` tried for `ε = 2^-k`.
pub const MAX_EPSILON_EXPONENT: u32 = 64;

/// Turns a group counterexample into a dimension counterexample.
///
/// Digits are coset labels, `N` is the largest coset count (at least 2), and
/// `ε` is the largest `2^-k` keeping `Σ λ_I (dim_I - ε) > Σ μ_J dim_J`.
pub fn build_counterexample(
    ineq: &LinearInequality,
    group: &FiniteGroup,
    subgroups: &[Subgroup],
) -> Result<DimensionCounterexample, CantorError> {
    if subgroups.len() != ineq.m() {
        return Err(crate::error::GroupError::ArityMismatch { expected: ineq.m(), found: subgroups.len() }.into());
    }
    let point = coset_entropy_point(group, subgroups)?;
    let entropy_slack = match ineq.eval_slack(point.vector())? {
        Slack::Exact(x) => x,
        Slack::Float(_) => unreachable!("group points are exact"),
    };
    if entropy_slack.sign()? != Sign::Negative {
        return Err(CantorError::NotViolated(entropy_slack.to_string()));
    }

    let m = ineq.m();
    let base = (1..=m)
        .map(|i| point.index(SubsetIndex::from_positions(&[i], m).expect("valid position")) as u64)
        .max()
        .unwrap_or(1)
        .max(2);
    let support = witness_set(group, subgroups)?;
    let witness = CantorWitness::new(m, base, support.points().iter().cloned())?;

    let mut dims = Vec::new();
    for s in subsets(m)? {
        let card = witness.project(s).len() as u64;
        if card != point.index(s) as u64 {
            return Err(CantorError::Inconsistent(format!(
                "projection {s} has {card} digits but the coset count is {}",
                point.index(s)
            )));
        }
        dims.push((s, DimValue { card, base }));
    }
    let dim_of = |s: SubsetIndex| dims[s.ordinal()].1;

    let lhs = ineq.lhs();
    if lhs.iter().all(|(s, _)| dim_of(*s).card == 1) {
        return Err(CantorError::NoEpsilon);
    }
    let rhs_scaled: ExactLogLin = ineq.rhs().into_iter().map(|(s, mu)| dim_of(s).scaled().scale(&mu)).sum();
    let lambda_total: Rational = lhs.iter().map(|(_, l)| l.clone()).sum();
    let lhs_dims: ExactLogLin = lhs.iter().map(|(s, l)| dim_of(*s).scaled().scale(l)).sum();
    let log_base = ExactLogLin::log2_of(base)?;

    let mut chosen = None;
    for k in 1..=MAX_EPSILON_EXPONENT {
        let eps = Rational::new(1.into(), BigUint::from(2u32).pow(k).into());
        let shifted = &(&lhs_dims - &log_base.scale(&(&eps * &lambda_total))) - &rhs_scaled;
        if shifted.sign()? == Sign::Positive {
            chosen = Some(eps);
            break;
        }
    }
    let epsilon = chosen.ok_or(CantorError::NoEpsilon)?;

    let mut levels = Vec::new();
    for (s, _) in &lhs {
        let dim = dim_of(*s);
        let raw = &dim.scaled() - &log_base.scale(&epsilon);
        levels.push(Level { subset: *s, dim, epsilon: epsilon.clone(), clamped: raw.sign()? == Sign::Negative });
    }
    let lhs_levels: ExactLogLin = lhs
        .iter()
        .zip(&levels)
        .map(|((_, lambda), level)| level.scaled().scale(lambda))
        .sum();
    let margin = &lhs_levels - &rhs_scaled;

    let out = DimensionCounterexample {
        inequality: ineq.clone(),
        point,
        entropy_slack,
        witness,
        dims,
        epsilon,
        levels,
        margin,
    };
    out.verify()?;
    Ok(out)
}

/// `log₂ #A` as a float, for reports.
pub fn log2_card(card: u64) -> f64 {
    log2_biguint(&BigUint::from(card))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::subgroup_from_generators;

    fn parity() -> CantorWitness {
        CantorWitness::new(3, 2, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap()
    }

    fn cube(k: u32, m: usize) -> CantorWitness {
        let mut pts = vec![vec![]];
        for _ in 0..m {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<u32>| (0..k).map(move |d| [p.clone(), vec![d]].concat()))
                .collect();
        }
        CantorWitness::new(m, u64::from(k), pts).unwrap()
    }

    fn s(pos: &[usize], m: usize) -> SubsetIndex {
        SubsetIndex::from_positions(pos, m).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(CantorWitness::new(1, 1, vec![vec![0]]), Err(CantorError::BadBase(1))));
        assert!(matches!(CantorWitness::new(1, 3, vec![vec![3]]), Err(CantorError::DigitOutOfRange { .. })));
        assert!(matches!(CantorWitness::new(1, 3, Vec::<Vec<u32>>::new()), Err(CantorError::Empty)));
        assert!(matches!(CantorWitness::new(2, 3, vec![vec![0]]), Err(CantorError::WrongArity { .. })));
    }

    #[test]
    fn projections() {
        assert_eq!(cube(2, 3).project(s(&[1, 2], 3)), cube(2, 2));
        let p = parity().project(s(&[1, 2], 3));
        assert_eq!(p.len(), 4);
        let single = CantorWitness::new(3, 5, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(single.project(s(&[2, 3], 3)).len(), 1);
    }

    #[test]
    fn dimensions() {
        let cantor = CantorWitness::new(1, 3, vec![vec![0], vec![2]]).unwrap();
        let d = cantor.dim_value();
        assert!((d.to_f64() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert_eq!(d.exact_string(), "log2(2)/log2(3)");
        for n in [2u32, 3, 7] {
            let full = cube(n, 1).dim_value();
            assert_eq!(full.cmp_rational(&Rational::one()).unwrap(), Sign::Zero);
        }
        assert_eq!(parity().dim_value().cmp_rational(&Rational::from_integer(2.into())).unwrap(), Sign::Zero);
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = DimValue { card: 2, base: 3 };
        let b = DimValue { card: 2, base: 4 };
        assert_eq!(
            dim_combination_sign(&[(Rational::one(), a), (-Rational::one(), b)], &Rational::zero()),
            Err(CantorError::MixedBases(3, 4))
        );
    }

    #[test]
    fn fibers() {
        assert_eq!(cube(2, 3).uniform_fiber(s(&[1], 3)), Fibers::Uniform(4));
        assert_eq!(parity().uniform_fiber(s(&[1, 2], 3)), Fibers::Uniform(1));
        let lopsided = CantorWitness::new(2, 2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(lopsided.uniform_fiber(s(&[1], 2)), Fibers::NonUniform(vec![0]));
    }

    #[test]
    fn lemma_counting() {
        let a = cube(2, 3);
        let all = a.points().clone();
        let check = a.lemma_fiber_bound(&all, s(&[1], 3)).unwrap();
        assert_eq!((check.b_count, check.b_projection * check.fiber), (8, 8));
        let one: BTreeSet<Vec<u32>> = [vec![0, 1, 0]].into();
        let check = a.lemma_fiber_bound(&one, s(&[1], 3)).unwrap();
        assert!(check.holds && check.b_count == 1);
        let outside: BTreeSet<Vec<u32>> = [vec![0, 1, 2]].into();
        assert!(matches!(a.lemma_fiber_bound(&outside, s(&[1], 3)), Err(CantorError::NotContained(_))));
        let lopsided = CantorWitness::new(2, 2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let b: BTreeSet<Vec<u32>> = [vec![0, 0]].into();
        assert!(matches!(lopsided.lemma_fiber_bound(&b, s(&[1], 2)), Err(CantorError::NotUniform(_))));
    }

    #[test]
    fn klein_pipeline() {
        let k = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        let hs = vec![subgroup_from_generators(&k, &[1]).unwrap(), Subgroup::trivial()];
        let ineq = crate::fixtures::false_monotone();
        let ce = build_counterexample(&ineq, &k, &hs).unwrap();
        assert_eq!(ce.witness.base(), 4);
        assert_eq!(ce.witness.len(), 4);
        assert_eq!(ce.dim(s(&[1], 2)).cmp_rational(&Rational::new(1.into(), 2.into())).unwrap(), Sign::Zero);
        assert_eq!(ce.dim(s(&[1, 2], 2)).cmp_rational(&Rational::one()).unwrap(), Sign::Zero);
        // eps = 1/2 gives 1/2 > 1/2, which fails; 1/4 works
        assert_eq!(ce.epsilon, Rational::new(1.into(), 4.into()));
        assert_eq!(ce.levels.len(), 1);
        assert!((ce.levels[0].to_f64() - 0.75).abs() < 1e-15);
        assert!((ce.margin_f64() - 0.25).abs() < 1e-12);
        ce.verify().unwrap();
    }

    #[test]
    fn non_violations_rejected() {
        let k = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        let whole = vec![Subgroup::whole(&k); 2];
        let ineq = crate::fixtures::false_monotone();
        assert!(matches!(build_counterexample(&ineq, &k, &whole), Err(CantorError::NotViolated(_))));
        let shannon = crate::dsl::parse_inequality("I(x;y) >= 0", None).unwrap();
        let hs = vec![subgroup_from_generators(&k, &[1]).unwrap(), Subgroup::trivial()];
        assert!(matches!(build_counterexample(&shannon, &k, &hs), Err(CantorError::NotViolated(_))));
        assert!(build_counterexample(&ineq, &k, &hs[..1]).is_err());
    }
}
