//! Named inequalities used throughout the tests, benches and CLI examples.

use crate::dsl::parse_inequality;
use crate::model::LinearInequality;

/// Three-dimensional Loomis–Whitney form: `2H(xyz) <= H(xy) + H(xz) + H(yz)`.
pub const LOOMIS_WHITNEY: &str = "2 H(x,y,z) <= H(x,y) + H(x,z) + H(y,z)";

/// `H(x) + H(xyz) <= H(xy) + H(xz)`, i.e. `I(y;z|x) >= 0`.
pub const CONDITIONAL_SUBADDITIVITY: &str = "H(x) + H(x,y,z) <= H(x,y) + H(x,z)";

/// The Zhang–Yeung four-variable inequality, valid for entropies but not a
/// consequence of the Shannon inequalities.
pub const ZHANG_YEUNG: &str = "2 I(z;w) <= I(x;y) + I(x;z,w) + 3 I(z;w|x) + I(z;w|y)";

/// Variable order for [`ZHANG_YEUNG`].
pub const ZHANG_YEUNG_VARS: [&str; 4] = ["x", "y", "z", "w"];

/// A deliberately false inequality: `H(x,y) <= H(x)`.
pub const FALSE_MONOTONE: &str = "H(x,y) <= H(x)";

pub fn zhang_yeung() -> LinearInequality {
    let names: Vec<String> = ZHANG_YEUNG_VARS.iter().map(|s| s.to_string()).collect();
    parse_inequality(ZHANG_YEUNG, Some(&names)).expect("fixture parses")
}

pub fn loomis_whitney() -> LinearInequality {
    parse_inequality(LOOMIS_WHITNEY, None).expect("fixture parses")
}

pub fn false_monotone() -> LinearInequality {
    parse_inequality(FALSE_MONOTONE, None).expect("fixture parses")
}
