//! Index sets, exact log-linear arithmetic, entropy vectors and linear
//! inequalities.

mod entropy;
mod inequality;
mod loglin;
mod subset;

pub use entropy::{neumaier_sum, EntropyValues, EntropyVector, Slack, FLOAT_TOLERANCE};
pub use inequality::LinearInequality;
pub use loglin::{
    format_rational, log2_biguint, parse_rational, rational_to_f64, ExactLogLin, Rational, Sign,
    MAX_PRODUCT_BITS,
};
pub use subset::{coordinate_count, subsets, SubsetIndex, MAX_VARS};
