//! Finite bodies, the Loomis–Whitney count, the cube-plus-bar body and
//! search for splittings whose parts have small projections.

use std::collections::{BTreeMap, BTreeSet};

use crate::cantor::{CantorWitness, Level};
use crate::error::SplitError;
use crate::model::{ExactLogLin, LinearInequality, Sign, SubsetIndex, MAX_VARS};
use crate::points;

/// Slack added to float budgets before they are turned into counts.
pub const BUDGET_TOLERANCE: f64 = 1e-9;
/// Upper bound on `#parts ^ #points` for exhaustive search.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// A finite set of points in `{0..N-1}^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBody {
    m: usize,
    base: u64,
    points: BTreeSet<Vec<u32>>,
}

impl FiniteBody {
    pub fn new(m: usize, base: u64, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, SplitError> {
        if m == 0 || m > MAX_VARS {
            return Err(crate::error::ModelError::VarCountOutOfRange { m, max: MAX_VARS }.into());
        }
        if base == 0 {
            return Err(SplitError::BadBase(base));
        }
        let points: BTreeSet<Vec<u32>> = points.into_iter().collect();
        if points.is_empty() {
            return Err(SplitError::EmptyBody);
        }
        for p in &points {
            if p.len() != m {
                return Err(SplitError::BadPoint { point: p.clone(), reason: format!("expected {m} coordinates") });
            }
            if p.iter().any(|&d| u64::from(d) >= base) {
                return Err(SplitError::BadPoint { point: p.clone(), reason: format!("coordinate not below N = {base}") });
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

    pub fn projection_count(&self, subset: SubsetIndex) -> usize {
        points::project(&self.points, subset).len()
    }

    fn require_three(&self) -> Result<(), SplitError> {
        if self.m != 3 {
            return Err(SplitError::NotThreeDimensional(self.m));
        }
        Ok(())
    }

    fn counts3(&self, masks: &[u16]) -> Vec<u128> {
        masks
            .iter()
            .map(|&mask| self.projection_count(SubsetIndex::from_mask(mask, 3).expect("mask within m = 3")) as u128)
            .collect()
    }
}

impl From<&CantorWitness> for FiniteBody {
    fn from(w: &CantorWitness) -> Self {
        FiniteBody { m: w.m(), base: w.base(), points: w.points().clone() }
    }
}

/// `log₂#S₁₂ + log₂#S₁₃ + log₂#S₂₃ − 2·log₂#S`.
pub fn loomis_whitney_slack(body: &FiniteBody) -> Result<f64, SplitError> {
    body.require_three()?;
    let c = body.counts3(&[0b011, 0b101, 0b110, 0b111]);
    Ok((c[0] as f64).log2() + (c[1] as f64).log2() + (c[2] as f64).log2() - 2.0 * (c[3] as f64).log2())
}

/// Sign of `#S₁₂·#S₁₃·#S₂₃ − (#S)²`, in integers.
pub fn loomis_whitney_sign(body: &FiniteBody) -> Result<Sign, SplitError> {
    body.require_three()?;
    let c = body.counts3(&[0b011, 0b101, 0b110, 0b111]);
    Ok(sign_of_cmp((c[0] * c[1] * c[2]).cmp(&(c[3] * c[3]))))
}

fn sign_of_cmp(o: std::cmp::Ordering) -> Sign {
    match o {
        std::cmp::Ordering::Less => Sign::Negative,
        std::cmp::Ordering::Equal => Sign::Zero,
        std::cmp::Ordering::Greater => Sign::Positive,
    }
}

/// The cube `{0..k-1}³` together with the bar `{0..k^1.5-1}×{0}×{0}`, in
/// base `N = k^1.5`.
pub fn cube_bar_instance(k: u64) -> Result<FiniteBody, SplitError> {
    let root = k.isqrt();
    if k < 4 || root * root != k {
        return Err(SplitError::BadSide(k));
    }
    let bar = k * root;
    let k32 = u32::try_from(k).map_err(|_| SplitError::BadSide(k))?;
    let bar32 = u32::try_from(bar).map_err(|_| SplitError::BadSide(k))?;
    let mut pts = Vec::with_capacity((k * k * k + bar) as usize);
    for x in 0..k32 {
        for y in 0..k32 {
            for z in 0..k32 {
                pts.push(vec![x, y, z]);
            }
        }
    }
    pts.extend((0..bar32).map(|x| vec![x, 0, 0]));
    FiniteBody::new(3, bar, pts)
}

/// The unsplit inequality `#S₁·#S ≤ #S₁₂·#S₁₃` on one body.
#[derive(Debug, Clone, PartialEq)]
pub struct UnsplitCheck {
    pub s1: u128,
    pub s: u128,
    pub s12: u128,
    pub s13: u128,
    /// `log₂#S₁ + log₂#S`.
    pub lhs_bits: f64,
    /// `log₂#S₁₂ + log₂#S₁₃`.
    pub rhs_bits: f64,
    pub lhs_product: u128,
    pub rhs_product: u128,
    /// Sign of `rhs_product − lhs_product`; negative means violated.
    pub sign: Sign,
}

impl UnsplitCheck {
    pub fn holds(&self) -> bool {
        self.sign != Sign::Negative
    }
}

pub fn check_unsplit_inequality(body: &FiniteBody) -> Result<UnsplitCheck, SplitError> {
    body.require_three()?;
    let c = body.counts3(&[0b001, 0b111, 0b011, 0b101]);
    let (s1, s, s12, s13) = (c[0], c[1], c[2], c[3]);
    let lhs_product = s1 * s;
    let rhs_product = s12 * s13;
    Ok(UnsplitCheck {
        s1,
        s,
        s12,
        s13,
        lhs_bits: (s1 as f64).log2() + (s as f64).log2(),
        rhs_bits: (s12 as f64).log2() + (s13 as f64).log2(),
        lhs_product,
        rhs_product,
        sign: sign_of_cmp(rhs_product.cmp(&lhs_product)),
    })
}

/// A budget `a_I` in bits: `log₂ #(S^I)_I ≤ a_I`.
#[derive(Debug, Clone, PartialEq)]
pub enum Budget {
    Bits(f64),
    Exact(ExactLogLin),
}

impl Budget {
    /// Largest projection count allowed, capped at `cap`. Zero means only an
    /// empty part fits.
    pub fn max_count(&self, cap: usize) -> Result<usize, SplitError> {
        match self {
            Budget::Bits(a) => {
                let a = a + BUDGET_TOLERANCE;
                if a.is_nan() || a < 0.0 {
                    return Ok(0);
                }
                if a >= 63.0 {
                    return Ok(cap);
                }
                Ok((a.exp2().floor() as usize).min(cap))
            }
            Budget::Exact(x) => {
                if x.sign().map_err(SplitError::from)? == Sign::Negative {
                    return Ok(0);
                }
                // largest c in 1..=cap with log2 c <= x; the predicate is monotone
                let fits = |c: usize| -> Result<bool, SplitError> {
                    let d = x - &ExactLogLin::log2_of(c as u64)?;
                    Ok(d.sign()? != Sign::Negative)
                };
                let (mut lo, mut hi) = (1usize, cap.max(1));
                if fits(hi)? {
                    return Ok(hi);
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if fits(mid)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(lo)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Budget::Bits(a) => *a,
            Budget::Exact(x) => x.to_f64(),
        }
    }
}

/// Parts `I` of a splitting together with their budgets.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    m: usize,
    parts: Vec<(SubsetIndex, Budget)>,
}

impl SplitSpec {
    pub fn new(m: usize, parts: Vec<(SubsetIndex, Budget)>) -> Result<Self, SplitError> {
        if parts.is_empty() {
            return Err(SplitError::EmptySpec);
        }
        let mut seen = BTreeSet::new();
        for (s, _) in &parts {
            if s.mask() >> m != 0 {
                return Err(crate::error::ModelError::BadSubset { mask: s.mask(), m }.into());
            }
            if !seen.insert(*s) {
                return Err(SplitError::DuplicatePart(*s));
            }
        }
        Ok(Self { m, parts })
    }

    /// Parts taken from the left-hand side of `ineq`, in ascending bitmask
    /// order, with budgets supplied per part.
    pub fn for_inequality(ineq: &LinearInequality, budgets: Vec<(SubsetIndex, Budget)>) -> Result<Self, SplitError> {
        let family: BTreeSet<SubsetIndex> = ineq.lhs().into_iter().map(|(s, _)| s).collect();
        for (s, _) in &budgets {
            if !family.contains(s) {
                return Err(SplitError::WrongFamily { part: s.to_string() });
            }
        }
        let given: BTreeSet<SubsetIndex> = budgets.iter().map(|(s, _)| *s).collect();
        if let Some(missing) = family.difference(&given).next() {
            return Err(SplitError::WrongFamily { part: missing.to_string() });
        }
        let mut budgets = budgets;
        budgets.sort_by_key(|(s, _)| *s);
        Self::new(ineq.m(), budgets)
    }

    /// Budgets from the levels of a dimension counterexample.
    pub fn from_levels(m: usize, levels: &[Level]) -> Result<Self, SplitError> {
        Self::new(m, levels.iter().map(|l| (l.subset, Budget::Exact(l.bits()))).collect())
    }

    /// The two-part shape: `log₂#S'₁ ≤ a` and `log₂#S'' ≤ b` in three
    /// dimensions.
    pub fn two_part(a: f64, b: f64) -> Self {
        let s1 = SubsetIndex::from_mask(0b001, 3).expect("valid");
        let s123 = SubsetIndex::from_mask(0b111, 3).expect("valid");
        Self { m: 3, parts: vec![(s1, Budget::Bits(a)), (s123, Budget::Bits(b))] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn parts(&self) -> &[(SubsetIndex, Budget)] {
        &self.parts
    }

    fn limits(&self, cap: usize) -> Result<Vec<usize>, SplitError> {
        self.parts.iter().map(|(_, b)| b.max_count(cap)).collect()
    }

    fn check_body(&self, body: &FiniteBody) -> Result<(), SplitError> {
        if body.m() != self.m {
            return Err(crate::error::ModelError::DimensionMismatch { expected: self.m, found: body.m() }.into());
        }
        Ok(())
    }
}

/// Assignment of every point (in the body's sorted order) to a part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub parts: Vec<SubsetIndex>,
    /// `assignment[k]` is the part index of the `k`-th point.
    pub assignment: Vec<usize>,
    /// `#(S^I)_I` for every part.
    pub projection_counts: Vec<usize>,
}

/// Recounts every part's projection from scratch and compares it against
/// the budgets.
pub fn verify_split(body: &FiniteBody, spec: &SplitSpec, result: &SplitResult) -> Result<bool, SplitError> {
    spec.check_body(body)?;
    if result.assignment.len() != body.len() {
        return Err(SplitError::AssignmentShape { expected: body.len(), found: result.assignment.len() });
    }
    if result.assignment.iter().any(|&p| p >= spec.parts.len()) {
        return Ok(false);
    }
    let limits = spec.limits(body.len())?;
    for (k, (subset, _)) in spec.parts.iter().enumerate() {
        let members = body.points.iter().zip(&result.assignment).filter(|(_, &p)| p == k).map(|(pt, _)| pt);
        let count = points::project(members, *subset).len();
        if count > limits[k] || result.projection_counts.get(k) != Some(&count) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct PartState {
    coords: Vec<usize>,
    limit: usize,
    seen: BTreeMap<Vec<u32>, usize>,
}

impl PartState {
    fn would_be(&self, key: &[u32]) -> usize {
        self.seen.len() + usize::from(!self.seen.contains_key(key))
    }

    fn add(&mut self, key: Vec<u32>) {
        *self.seen.entry(key).or_insert(0) += 1;
    }

    fn remove(&mut self, key: &[u32]) {
        if let Some(c) = self.seen.get_mut(key) {
            *c -= 1;
            if *c == 0 {
                self.seen.remove(key);
            }
        }
    }
}

fn states(spec: &SplitSpec, cap: usize) -> Result<Vec<PartState>, SplitError> {
    Ok(spec
        .parts
        .iter()
        .zip(spec.limits(cap)?)
        .map(|((s, _), limit)| PartState { coords: s.coordinates(), limit, seen: BTreeMap::new() })
        .collect())
}

fn finish(body: &FiniteBody, spec: &SplitSpec, assignment: Vec<usize>, st: &[PartState]) -> Result<Option<SplitResult>, SplitError> {
    let result = SplitResult {
        parts: spec.parts.iter().map(|(s, _)| *s).collect(),
        assignment,
        projection_counts: st.iter().map(|p| p.seen.len()).collect(),
    };
    Ok(verify_split(body, spec, &result)?.then_some(result))
}

/// Tries assignments in lexicographic order (first point most significant,
/// lower part index first) and returns the first one within budget.
pub fn find_split_exhaustive(body: &FiniteBody, spec: &SplitSpec) -> Result<Option<SplitResult>, SplitError> {
    spec.check_body(body)?;
    let parts = spec.parts.len();
    let space = (parts as u128).checked_pow(body.len() as u32);
    if space.is_none_or(|s| s > EXHAUSTIVE_LIMIT) {
        return Err(SplitError::TooLarge { parts, points: body.len() });
    }
    let pts: Vec<&Vec<u32>> = body.points.iter().collect();
    let mut st = states(spec, body.len())?;
    let mut assignment = Vec::with_capacity(pts.len());

    fn dfs(pts: &[&Vec<u32>], st: &mut [PartState], assignment: &mut Vec<usize>) -> bool {
        let Some(p) = pts.get(assignment.len()) else {
            return true;
        };
        for k in 0..st.len() {
            let key = points::project_point(p, &st[k].coords);
            if st[k].would_be(&key) > st[k].limit {
                continue;
            }
            st[k].add(key.clone());
            assignment.push(k);
            if dfs(pts, st, assignment) {
                return true;
            }
            assignment.pop();
            st[k].remove(&key);
        }
        false
    }

    if !dfs(&pts, &mut st, &mut assignment) {
        return Ok(None);
    }
    finish(body, spec, assignment, &st)
}

/// One pass over the points in sorted order, placing each where it uses the
/// smallest fraction of its part's budget. A `None` proves nothing.
pub fn find_split_greedy(body: &FiniteBody, spec: &SplitSpec) -> Result<Option<SplitResult>, SplitError> {
    spec.check_body(body)?;
    let mut st = states(spec, body.len())?;
    let mut assignment = Vec::with_capacity(body.len());
    for p in &body.points {
        let mut best: Option<(f64, usize, Vec<u32>)> = None;
        for (k, part) in st.iter().enumerate() {
            let key = points::project_point(p, &part.coords);
            let after = part.would_be(&key);
            if after > part.limit {
                continue;
            }
            let growth = after - part.seen.len();
            let strain = growth as f64 * after as f64 / part.limit as f64;
            if best.as_ref().is_none_or(|(b, _, _)| strain < *b) {
                best = Some((strain, k, key));
            }
        }
        let Some((_, k, key)) = best else {
            return Ok(None);
        };
        st[k].add(key);
        assignment.push(k);
    }
    finish(body, spec, assignment, &st)
}
