//! Exact tools for linear information inequalities: a small inequality
//! language, Shannon-cone membership with checkable certificates, group
//! witnesses for non-Shannon behaviour, and their translation into
//! dimensions of Cantor-type sets and finite splitting problems.

pub mod cantor;
pub mod cone;
pub mod distributions;
pub mod dsl;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod model;
pub mod points;
pub mod splitting;

pub use cantor::{build_counterexample, CantorWitness, DimValue, DimensionCounterexample, Level};
pub use cone::{is_shannon_type, FarkasWitness, ShannonCertificate, ShannonDecision};
pub use distributions::{Atom, JointDistribution, SupportSet};
pub use dsl::{format_inequality, parse_inequality};
pub use error::Error;
pub use group::{builtin_catalog, search_violation, FiniteGroup, NamedGroup, Subgroup};
pub use model::{EntropyVector, ExactLogLin, LinearInequality, Rational, Sign, Slack, SubsetIndex};
pub use splitting::{Budget, FiniteBody, SplitResult, SplitSpec};
