//! Inputs shared by the benchmarks.

use entdim::model::{ExactLogLin, Rational};
use num_bigint::BigUint;

/// `b·log a − a·log b` for every pair `2 <= a < b <= n`; many of these
/// nearly cancel.
pub fn crossed_powers(n: u64) -> Vec<ExactLogLin> {
    let mut out = Vec::new();
    for a in 2..n {
        for b in a + 1..=n {
            let terms = vec![
                (Rational::from_integer((b as i64).into()), BigUint::from(a)),
                (Rational::from_integer((-(a as i64)).into()), BigUint::from(b)),
            ];
            out.push(ExactLogLin::from_terms(terms).expect("valid terms"));
        }
    }
    out
}
