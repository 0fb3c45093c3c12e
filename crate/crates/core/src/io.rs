//! JSON documents read and written by the command-line tool.
//!
//! Exact rationals travel as `"p/q"` strings, logarithmic values as their
//! canonical expression next to a float rendering.

use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cantor::CantorWitness;
use crate::cone::{elemental_inequalities, row_text, FarkasWitness, ShannonCertificate};
use crate::distributions::{Atom, JointDistribution, SupportSet};
use crate::error::Error;
use crate::group::{FiniteGroup, NamedGroup, Subgroup};
use crate::model::{format_rational, parse_rational, rational_to_f64, subsets, EntropyVector, ExactLogLin, SubsetIndex};
use crate::splitting::{Budget, FiniteBody, SplitSpec};

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    point: Vec<u32>,
    prob: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistributionDoc {
    Atoms { m: usize, atoms: Vec<AtomDoc> },
    Support { m: usize, support: Vec<Vec<u32>> },
}

/// A distribution file: explicit atoms, or the uniform distribution on a
/// support set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributionInput {
    Joint(JointDistribution),
    Support(SupportSet),
}

impl DistributionInput {
    pub fn m(&self) -> usize {
        match self {
            DistributionInput::Joint(d) => d.m(),
            DistributionInput::Support(s) => s.m(),
        }
    }

    /// Exact when the input is a support set with uniform fibers, float
    /// otherwise.
    pub fn entropy_vector(&self) -> EntropyVector {
        match self {
            DistributionInput::Joint(d) => d.entropy_vector_float(),
            DistributionInput::Support(s) => {
                s.exact_entropy_vector().unwrap_or_else(|_| s.to_distribution().entropy_vector_float())
            }
        }
    }
}

pub fn parse_distribution(text: &str) -> Result<DistributionInput, Error> {
    match from_json::<DistributionDoc>(text, "distribution")? {
        DistributionDoc::Atoms { m, atoms } => {
            let atoms = atoms
                .into_iter()
                .map(|a| Ok(Atom { point: a.point, prob: parse_rational(&a.prob)? }))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(DistributionInput::Joint(JointDistribution::validate(m, atoms)?))
        }
        DistributionDoc::Support { m, support } => Ok(DistributionInput::Support(SupportSet::new(m, support)?)),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupDoc {
    Table {
        name: Option<String>,
        order: usize,
        table: Vec<Vec<usize>>,
    },
    Permutations {
        name: Option<String>,
        perm_degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

impl GroupDoc {
    fn build(self) -> Result<(Option<String>, FiniteGroup), Error> {
        match self {
            GroupDoc::Table { name, order, table } => {
                if table.len() != order {
                    return Err(Error::Input(format!("group: order {order} but {} table rows", table.len())));
                }
                Ok((name, FiniteGroup::from_table(table)?))
            }
            GroupDoc::Permutations { name, perm_degree, generators } => {
                Ok((name, FiniteGroup::from_permutations(perm_degree, &generators)?))
            }
        }
    }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup, Error> {
    Ok(from_json::<GroupDoc>(text, "group")?.build()?.1)
}

/// A list of groups; unnamed entries are called `G1`, `G2`, ... by position.
pub fn parse_group_list(text: &str) -> Result<Vec<NamedGroup>, Error> {
    from_json::<Vec<GroupDoc>>(text, "group list")?
        .into_iter()
        .enumerate()
        .map(|(k, doc)| {
            let (name, g) = doc.build()?;
            Ok(NamedGroup::new(name.unwrap_or_else(|| format!("G{}", k + 1)), g))
        })
        .collect()
}

/// Subgroups as arrays of element indices.
pub fn parse_subgroups(text: &str, group: &FiniteGroup) -> Result<Vec<Subgroup>, Error> {
    from_json::<Vec<Vec<usize>>>(text, "subgroups")?
        .into_iter()
        .map(|els| Ok(Subgroup::from_elements(group, els)?))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsDoc {
    m: usize,
    #[serde(rename = "N")]
    base: u64,
    points: Vec<Vec<u32>>,
}

pub fn parse_witness(text: &str) -> Result<CantorWitness, Error> {
    let doc: PointsDoc = from_json(text, "witness")?;
    Ok(CantorWitness::new(doc.m, doc.base, doc.points)?)
}

pub fn parse_body(text: &str) -> Result<FiniteBody, Error> {
    let doc: PointsDoc = from_json(text, "body")?;
    Ok(FiniteBody::new(doc.m, doc.base, doc.points)?)
}

pub fn witness_json(w: &CantorWitness) -> Value {
    json!({ "m": w.m(), "N": w.base(), "points": w.points() })
}

pub fn body_json(b: &FiniteBody) -> Value {
    json!({ "m": b.m(), "N": b.base(), "points": b.points() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartDoc {
    subset: Vec<usize>,
    bits: Option<f64>,
    /// `Σ q·log₂ n` as `[["q", n], ...]`.
    exact: Option<Vec<(String, u64)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    parts: Vec<PartDoc>,
}

/// `{"parts": [{"subset": [1], "bits": 2.0}, {"subset": [1,2,3], "exact": [["1", 3]]}]}`
/// with 1-based positions.
pub fn parse_split_spec(text: &str, m: usize) -> Result<SplitSpec, Error> {
    let doc: SpecDoc = from_json(text, "split spec")?;
    let mut parts = Vec::new();
    for p in doc.parts {
        let subset = SubsetIndex::from_positions(&p.subset, m)?;
        let budget = match (p.bits, p.exact) {
            (Some(b), None) => Budget::Bits(b),
            (None, Some(terms)) => {
                let terms = terms
                    .iter()
                    .map(|(q, n)| Ok((parse_rational(q)?, BigUint::from(*n))))
                    .collect::<Result<Vec<_>, Error>>()?;
                Budget::Exact(ExactLogLin::from_terms(terms)?)
            }
            _ => return Err(Error::Input(format!("split spec: part {subset} needs exactly one of bits, exact"))),
        };
        parts.push((subset, budget));
    }
    Ok(SplitSpec::new(m, parts)?)
}

/// `{"exact": "...", "float": ...}`.
pub fn loglin_json(x: &ExactLogLin) -> Value {
    json!({ "exact": x.to_string(), "float": x.to_f64() })
}

pub fn entropy_vector_json(v: &EntropyVector) -> Value {
    let subsets = subsets(v.m()).expect("vector has a valid m");
    let coords: Vec<Value> = subsets
        .iter()
        .map(|&s| match v.get_exact(s) {
            Some(x) => json!({ "subset": s.to_string(), "exact": x.to_string(), "float": x.to_f64() }),
            None => json!({ "subset": s.to_string(), "float": v.get_f64(s) }),
        })
        .collect();
    json!({ "m": v.m(), "exact": v.is_exact(), "coordinates": coords })
}

pub fn certificate_json(m: usize, cert: &ShannonCertificate) -> Value {
    let set = elemental_inequalities(m).ok();
    let rows: Vec<Value> = cert
        .weights
        .iter()
        .map(|(row, w)| {
            let text = set.as_ref().and_then(|s| s.rows().get(*row)).map(row_text);
            json!({ "row": row, "weight": format_rational(w), "inequality": text })
        })
        .collect();
    json!({ "weights": rows })
}

pub fn farkas_json(w: &FarkasWitness) -> Value {
    let subsets = subsets(w.m).expect("witness has a valid m");
    let coords: Vec<Value> = subsets
        .iter()
        .zip(&w.point)
        .map(|(s, x)| json!({ "subset": s.to_string(), "value": format_rational(x), "float": rational_to_f64(x) }))
        .collect();
    json!({ "m": w.m, "point": coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distributions() {
        let d = parse_distribution(r#"{"m": 2, "atoms": [{"point": [0,0], "prob": "1/2"}, {"point": [1,1], "prob": "1/2"}]}"#)
            .unwrap();
        assert!(matches!(d, DistributionInput::Joint(_)));
        assert!((d.entropy_vector().to_f64_vec()[2] - 1.0).abs() < 1e-12);
        let s = parse_distribution(r#"{"m": 2, "support": [[0,0],[1,1]]}"#).unwrap();
        assert!(s.entropy_vector().is_exact());
        let bad = parse_distribution(r#"{"m": 2, "atoms": [{"point": [0,0], "prob": "1/3"}]}"#).unwrap_err();
        assert_eq!(bad.kind(), "distribution");
        assert_eq!(parse_distribution("{").unwrap_err().kind(), "input");
        assert_eq!(parse_distribution(r#"{"m": 1, "atoms": [{"point": [0], "prob": "x"}]}"#).unwrap_err().kind(), "model");
    }

    #[test]
    fn groups() {
        let g = parse_group(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        let s3 = parse_group(r#"{"perm_degree": 3, "generators": [[1,0,2],[1,2,0]]}"#).unwrap();
        assert_eq!(s3.order(), 6);
        let subs = parse_subgroups("[[0], [0,1,2,3,4,5]]", &s3).unwrap();
        assert_eq!(subs[1].order(), 6);
        assert_eq!(parse_subgroups("[[0, 7]]", &s3).unwrap_err().kind(), "group");
        let list = parse_group_list(r#"[{"name": "C2", "order": 2, "table": [[0,1],[1,0]]}, {"perm_degree": 2, "generators": [[1,0]]}]"#)
            .unwrap();
        assert_eq!(list[0].name, "C2");
        assert_eq!(list[1].name, "G2");
        assert_eq!(parse_group(r#"{"order": 3, "table": [[0,1],[1,0]]}"#).unwrap_err().kind(), "input");
    }

    #[test]
    fn points_files() {
        let w = parse_witness(r#"{"m": 1, "N": 3, "points": [[0],[2]]}"#).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(parse_witness(&witness_json(&w).to_string()).unwrap(), w);
        assert_eq!(parse_witness(r#"{"m": 1, "N": 3, "points": [[3]]}"#).unwrap_err().kind(), "cantor");
        let b = parse_body(r#"{"m": 3, "N": 2, "points": [[0,0,0],[1,1,1]]}"#).unwrap();
        assert_eq!(parse_body(&body_json(&b).to_string()).unwrap(), b);
    }

    #[test]
    fn split_specs() {
        let spec = parse_split_spec(r#"{"parts": [{"subset": [1], "bits": 2.0}, {"subset": [1,2,3], "bits": 2.0}]}"#, 3)
            .unwrap();
        assert_eq!(spec, SplitSpec::two_part(2.0, 2.0));
        let exact = parse_split_spec(r#"{"parts": [{"subset": [1], "exact": [["1/2", 3]]}]}"#, 3).unwrap();
        assert!(matches!(exact.parts()[0].1, Budget::Exact(_)));
        assert_eq!(parse_split_spec(r#"{"parts": [{"subset": [1]}]}"#, 3).unwrap_err().kind(), "input");
        assert_eq!(parse_split_spec(r#"{"parts": []}"#, 3).unwrap_err().kind(), "split");
    }
}
