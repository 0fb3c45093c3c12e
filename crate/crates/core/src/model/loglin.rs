//! Exact arithmetic on finite sums `Σ qᵢ·log₂(nᵢ)` with rational `qᵢ` and
//! positive integer `nᵢ`.
//!
//! Values are kept in a normal form over a pairwise coprime set of bases,
//! none of them a perfect power below 2^512, so a value is zero exactly when
//! its normal form is empty. Signs of nonzero values are settled by clearing
//! denominators and comparing two big-integer products.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ModelError;

pub type Rational = BigRational;

/// Upper bound on the bit length of any product built during a sign test.
pub const MAX_PRODUCT_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_f64(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn of_rational(x: &Rational) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, ModelError> {
    let bad = || ModelError::BadRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `log₂ n` as a float, valid for arbitrarily large `n`.
pub fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().map(f64::log2).unwrap_or(f64::INFINITY)
    } else {
        let shift = bits - 64;
        let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.log2() + shift as f64
    }
}

/// Exact value `Σ qᵢ·log₂(nᵢ)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExactLogLin {
    // Sorted by base; bases pairwise coprime and >= 2; coefficients nonzero.
    terms: Vec<(Rational, BigUint)>,
}

impl ExactLogLin {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `q·log₂(n)`. Fails for `n = 0`.
    pub fn term(q: Rational, n: impl Into<BigUint>) -> Result<Self, ModelError> {
        Self::from_terms(vec![(q, n.into())])
    }

    /// `log₂(n)`.
    pub fn log2_of(n: impl Into<BigUint>) -> Result<Self, ModelError> {
        Self::term(Rational::one(), n)
    }

    /// The rational constant `q` (that is, `q·log₂ 2`).
    pub fn constant(q: Rational) -> Self {
        Self::from_terms(vec![(q, BigUint::from(2u32))]).expect("base 2 is valid")
    }

    /// Builds a value from raw terms, normalising them.
    pub fn from_terms(terms: Vec<(Rational, BigUint)>) -> Result<Self, ModelError> {
        if terms.iter().any(|(_, n)| n.is_zero()) {
            return Err(ModelError::LogOfZero);
        }
        Ok(Self { terms: normalize(terms) })
    }

    /// Normalised terms `(coefficient, base)`.
    pub fn terms(&self) -> &[(Rational, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(q, n)| (q * factor, n.clone()))
                .collect(),
        }
    }

    /// Float value in bits.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(q, n)| rational_to_f64(q) * log2_biguint(n))
            .fold(0.0, |acc, x| acc + x)
    }

    /// Exact sign. A float evaluation settles the sign when its value is far
    /// outside its own rounding error bound; otherwise the big-integer product
    /// comparison decides.
    pub fn sign(&self) -> Result<Sign, ModelError> {
        if self.terms.is_empty() {
            return Ok(Sign::Zero);
        }
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for (q, n) in &self.terms {
            let t = rational_to_f64(q) * log2_biguint(n);
            value += t;
            magnitude += t.abs();
        }
        if value.is_finite() && magnitude.is_finite() {
            let bound = magnitude * 1e-12 + 1e-300;
            if value.abs() > bound {
                return Ok(Sign::of_f64(value));
            }
        }
        self.sign_by_products()
    }

    /// Exact sign by comparing `Π nᵢ^{eᵢ}` over positive and negative integer
    /// exponents `eᵢ = qᵢ·L`, with `L` the common denominator.
    pub fn sign_by_products(&self) -> Result<Sign, ModelError> {
        if self.terms.is_empty() {
            return Ok(Sign::Zero);
        }
        let lcm = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (q, _)| acc.lcm(q.denom()));
        let mut exps: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(q, _)| (q * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = exps.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if !g.is_one() && !g.is_zero() {
            for e in &mut exps {
                *e /= &g;
            }
        }

        let mut pos_bits = 0u64;
        let mut neg_bits = 0u64;
        for (e, (_, n)) in exps.iter().zip(&self.terms) {
            let cost = e
                .abs()
                .to_u64()
                .and_then(|e| e.checked_mul(n.bits()))
                .unwrap_or(u64::MAX);
            let side = if e.is_positive() { &mut pos_bits } else { &mut neg_bits };
            *side = side.saturating_add(cost);
        }
        let bits = pos_bits.max(neg_bits);
        if bits > MAX_PRODUCT_BITS {
            return Err(ModelError::SizeLimit { bits });
        }

        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (e, (_, n)) in exps.iter().zip(&self.terms) {
            let k = e.abs().to_u64().expect("bounded by the size guard");
            let p = pow_by_squaring(n, k);
            if e.is_positive() {
                pos *= p;
            } else {
                neg *= p;
            }
        }
        Ok(match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => Sign::Positive,
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
        })
    }
}

fn pow_by_squaring(base: &BigUint, mut exp: u64) -> BigUint {
    let mut result = BigUint::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    result
}

/// Rewrites the terms over a pairwise coprime basis. Whenever two bases share
/// a factor `g`, `q·log a + r·log b` becomes
/// `(q + r)·log g + q·log(a/g) + r·log(b/g)`; the product of all bases drops
/// each time, so the loop terminates.
fn normalize(terms: Vec<(Rational, BigUint)>) -> Vec<(Rational, BigUint)> {
    let mut work: Vec<(Rational, BigUint)> = terms
        .into_iter()
        .filter(|(q, n)| !q.is_zero() && !n.is_one())
        .collect();
    'outer: loop {
        for i in 0..work.len() {
            for j in (i + 1)..work.len() {
                let g = work[i].1.gcd(&work[j].1);
                if g.is_one() {
                    continue;
                }
                let (qj, nj) = work.swap_remove(j);
                let (qi, ni) = work.swap_remove(i);
                let rest_i = &ni / &g;
                let rest_j = &nj / &g;
                for (q, n) in [(&qi + &qj, g), (qi, rest_i), (qj, rest_j)] {
                    if !q.is_zero() && !n.is_one() {
                        work.push((q, n));
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    let mut work: Vec<(Rational, BigUint)> = work
        .into_iter()
        .map(|(q, n)| {
            let (root, k) = perfect_power(&n);
            (q * Rational::from_integer(BigInt::from(k)), root)
        })
        .collect();
    work.sort_by(|a, b| a.1.cmp(&b.1));
    work
}

const PRIMES: [u32; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

/// Writes `n = root^k` with `k` maximal, by stripping prime exponents one at
/// a time. Bases above 512 bits are left alone.
fn perfect_power(n: &BigUint) -> (BigUint, u64) {
    if let Some(small) = n.to_u64() {
        let (root, k) = perfect_power_u64(small);
        return (BigUint::from(root), k);
    }
    if n.bits() > 512 {
        return (n.clone(), 1);
    }
    let mut base = n.clone();
    let mut exp = 1u64;
    'strip: loop {
        for p in (2..=base.bits() as u32).filter(|&p| is_prime(p)) {
            let root = base.nth_root(p);
            if root > BigUint::one() && root.pow(p) == base {
                base = root;
                exp *= u64::from(p);
                continue 'strip;
            }
        }
        return (base, exp);
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn perfect_power_u64(n: u64) -> (u64, u64) {
    let mut base = n;
    let mut exp = 1u64;
    'strip: loop {
        for &p in &PRIMES {
            if base < 1u64 << p {
                break;
            }
            let r = iroot_u64(base, p);
            if r > 1 && r.checked_pow(p) == Some(base) {
                base = r;
                exp *= u64::from(p);
                continue 'strip;
            }
        }
        return (base, exp);
    }
}

/// `floor(n^(1/p))`.
fn iroot_u64(n: u64, p: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / f64::from(p)).round() as u64;
    while r > 0 && r.checked_pow(p).is_none_or(|x| x > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(p).is_some_and(|x| x <= n) {
        r += 1;
    }
    r
}

impl Add<&ExactLogLin> for &ExactLogLin {
    type Output = ExactLogLin;
    fn add(self, rhs: &ExactLogLin) -> ExactLogLin {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        ExactLogLin { terms: normalize(terms) }
    }
}

impl Add for ExactLogLin {
    type Output = ExactLogLin;
    fn add(self, rhs: ExactLogLin) -> ExactLogLin {
        &self + &rhs
    }
}

impl Neg for &ExactLogLin {
    type Output = ExactLogLin;
    fn neg(self) -> ExactLogLin {
        ExactLogLin {
            terms: self.terms.iter().map(|(q, n)| (-q, n.clone())).collect(),
        }
    }
}

impl Neg for ExactLogLin {
    type Output = ExactLogLin;
    fn neg(self) -> ExactLogLin {
        -&self
    }
}

impl Sub<&ExactLogLin> for &ExactLogLin {
    type Output = ExactLogLin;
    fn sub(self, rhs: &ExactLogLin) -> ExactLogLin {
        self + &(-rhs)
    }
}

impl Sub for ExactLogLin {
    type Output = ExactLogLin;
    fn sub(self, rhs: ExactLogLin) -> ExactLogLin {
        &self - &rhs
    }
}

impl Mul<&Rational> for &ExactLogLin {
    type Output = ExactLogLin;
    fn mul(self, rhs: &Rational) -> ExactLogLin {
        self.scale(rhs)
    }
}

impl std::iter::Sum for ExactLogLin {
    fn sum<I: Iterator<Item = ExactLogLin>>(iter: I) -> Self {
        let terms: Vec<_> = iter.flat_map(|x| x.terms).collect();
        ExactLogLin { terms: normalize(terms) }
    }
}

/// Canonical text such as `log2(3) - 1/2` or `2*log2(5) + 3`. Base-2 terms
/// print as a trailing rational constant.
impl fmt::Display for ExactLogLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let two = BigUint::from(2u32);
        let mut parts: Vec<(bool, String)> = Vec::new();
        let mut constant = None;
        for (q, n) in &self.terms {
            if *n == two {
                constant = Some(q.clone());
                continue;
            }
            let mag = q.abs();
            let body = if mag.is_one() {
                format!("log2({n})")
            } else {
                format!("{}*log2({n})", format_rational(&mag))
            };
            parts.push((q.is_negative(), body));
        }
        if let Some(c) = constant {
            parts.push((c.is_negative(), format_rational(&c.abs())));
        }
        for (k, (negative, body)) in parts.iter().enumerate() {
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_powers() {
        let pp = |n: BigUint| perfect_power(&n);
        assert_eq!(pp(BigUint::from(64u32)), (BigUint::from(2u32), 6));
        assert_eq!(pp(BigUint::from(6u64).pow(24)), (BigUint::from(6u32), 24));
        assert_eq!(pp(BigUint::from(1u64 << 62)), (BigUint::from(2u32), 62));
        assert_eq!(pp(BigUint::from(u64::MAX)), (BigUint::from(u64::MAX), 1));
        assert_eq!(pp(BigUint::from(3u32).pow(100)), (BigUint::from(3u32), 100));
        assert_eq!(pp(BigUint::from(12u32).pow(35)), (BigUint::from(12u32), 35));
        assert_eq!(pp(BigUint::from(12u32).pow(35) + 1u32).1, 1);
        for n in 2u64..5000 {
            let (r, k) = perfect_power_u64(n);
            assert_eq!(r.pow(k as u32), n);
            assert!((2..=12).all(|e| iroot_u64(r, e).pow(e) != r || iroot_u64(r, e) == 1), "{n}");
        }
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ll(terms: &[(i64, i64, u64)]) -> ExactLogLin {
        ExactLogLin::from_terms(
            terms
                .iter()
                .map(|&(n, d, b)| (q(n, d), BigUint::from(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sign_examples() {
        let x = ll(&[(2, 1, 3), (-1, 1, 9)]);
        assert!(x.is_zero());
        assert_eq!(x.sign().unwrap(), Sign::Zero);

        let x = ll(&[(1, 1, 2), (1, 1, 3), (-1, 1, 7)]);
        assert_eq!(x.sign().unwrap(), Sign::Negative);
        assert_eq!(x.sign_by_products().unwrap(), Sign::Negative);

        let x = ll(&[(3, 2, 4), (-1, 1, 8)]);
        assert_eq!(x.sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn products_path_without_normalisation_shortcut() {
        // 9 > 8, so 2 log 3 - 3 log 2 > 0
        let x = ll(&[(2, 1, 3), (-3, 1, 2)]);
        assert_eq!(x.sign_by_products().unwrap(), Sign::Positive);
        let x = ll(&[(-2, 1, 3), (3, 1, 2)]);
        assert_eq!(x.sign_by_products().unwrap(), Sign::Negative);
    }

    #[test]
    fn coprime_normal_form() {
        let x = ll(&[(1, 1, 6), (1, 1, 2)]);
        let bases: Vec<u64> = x.terms().iter().map(|(_, n)| n.to_u64().unwrap()).collect();
        assert_eq!(bases, vec![2, 3]);
        assert_eq!(x.to_string(), "log2(3) + 2");
        assert_eq!(ll(&[(1, 1, 1)]), ExactLogLin::zero());
        assert!(ExactLogLin::log2_of(0u32).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactLogLin::zero().to_string(), "0");
        assert_eq!(ll(&[(1, 1, 3), (-1, 2, 2)]).to_string(), "log2(3) - 1/2");
        assert_eq!(ll(&[(-2, 1, 5)]).to_string(), "-2*log2(5)");
        assert_eq!(ll(&[(2, 1, 4)]).to_string(), "4");
    }

    #[test]
    fn size_guard_trips() {
        let x = ExactLogLin::from_terms(vec![
            (q(1, 1 << 30), BigUint::from(3u32)),
            (q(-1, 1 << 30), BigUint::from(5u32)),
            (q(1, 3), BigUint::from(7u32)),
            (q(-1, 3), BigUint::from(11u32)),
        ])
        .unwrap();
        assert!(matches!(x.sign_by_products(), Err(ModelError::SizeLimit { .. })));
        // the float filter still decides it
        assert_eq!(x.sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&q(-3, 9)), "-1/3");
    }
}
