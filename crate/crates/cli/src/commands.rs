use std::collections::BTreeMap;

use entdim::cantor::{build_counterexample, CantorWitness, DimensionCounterexample};
use entdim::cone::{is_shannon_type, ShannonDecision};
use entdim::dsl::{format_inequality, parse_inequality, variable_names};
use entdim::error::ModelError;
use entdim::group::{builtin_catalog, search_violation, SearchLimits, SearchOutcome};
use entdim::io;
use entdim::model::{format_rational, subsets, LinearInequality, Sign, SubsetIndex};
use entdim::points::Fibers;
use entdim::splitting::{
    check_unsplit_inequality, cube_bar_instance, find_split_exhaustive, find_split_greedy, loomis_whitney_slack,
};
use serde_json::{json, Value};

use crate::report::{CliError, RunReport, EXIT_NEGATIVE, EXIT_OK};
use crate::IneqArgs;

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_string(), message: e.to_string() })
}

struct Parsed {
    ineq: LinearInequality,
    names: Vec<String>,
}

fn parse(text: &str, args: &IneqArgs) -> Result<Parsed, CliError> {
    let declared = args.vars.as_ref().map(|v| v.iter().map(|s| s.trim().to_string()).collect::<Vec<_>>());
    let ineq = parse_inequality(text, declared.as_deref())?;
    let names = match declared {
        Some(d) => d,
        None => variable_names(text)?,
    };
    Ok(Parsed { ineq, names })
}

fn ineq_json(p: &Parsed) -> Value {
    json!({
        "m": p.ineq.m(),
        "variables": p.names,
        "normalized": format_inequality(&p.ineq, &p.names).expect("names match m"),
    })
}

pub fn check(text: &str, args: &IneqArgs) -> Result<RunReport, CliError> {
    let p = parse(text, args)?;
    let mut r = RunReport::new("check", json!({ "ineq": text, "vars": args.vars }));
    match is_shannon_type(&p.ineq)? {
        ShannonDecision::ShannonType(cert) => {
            r.outcome = "shannon-type".into();
            r.summary = format!("Shannon-type: certificate uses {} elemental row(s)", cert.weights.len());
            r.result = json!({ "inequality": ineq_json(&p), "certificate": io::certificate_json(p.ineq.m(), &cert) });
        }
        ShannonDecision::NotShannonType(w) => {
            let slack = p.ineq.eval_rational(&w.point)?;
            r.outcome = "not-shannon-type".into();
            r.summary = format!("not Shannon-type: polymatroid witness with slack {}", format_rational(&slack));
            r.result = json!({
                "inequality": ineq_json(&p),
                "witness": io::farkas_json(&w),
                "witness_slack": format_rational(&slack),
            });
            r.exit_code = EXIT_NEGATIVE;
        }
    }
    Ok(r)
}

pub fn eval(text: &str, dist_path: &str, args: &IneqArgs) -> Result<RunReport, CliError> {
    let p = parse(text, args)?;
    let dist = io::parse_distribution(&read(dist_path)?)?;
    if p.ineq.m() > dist.m() {
        return Err(ModelError::DimensionMismatch { expected: dist.m(), found: p.ineq.m() }.into());
    }
    let ineq = p.ineq.widen(dist.m())?;
    let v = dist.entropy_vector();
    let slack = ineq.eval_slack(&v)?;
    let sign = slack.sign()?;
    let mut r = RunReport::new("eval", json!({ "ineq": text, "dist": dist_path, "vars": args.vars }));
    r.outcome = if sign == Sign::Negative { "violated" } else { "holds" }.into();
    r.summary = format!("slack {slack} bits: {}", r.outcome);
    r.result = json!({
        "inequality": ineq_json(&p),
        "entropy_vector": io::entropy_vector_json(&v),
        "slack": { "exact": v.is_exact().then(|| slack.to_string()), "float": slack.to_f64(), "sign": sign },
    });
    if sign == Sign::Negative {
        r.exit_code = EXIT_NEGATIVE;
    }
    Ok(r)
}

fn outcome_json(o: &SearchOutcome, names: &[String]) -> Value {
    let violation = o.violation.as_ref().map(|v| {
        let subs: Vec<Value> = v
            .subgroups
            .iter()
            .zip(names)
            .map(|(h, name)| json!({ "variable": name, "order": h.order(), "elements": h.elements() }))
            .collect();
        json!({
            "group": v.group_name,
            "group_order": v.group.order(),
            "tuple": v.tuple,
            "subgroups": subs,
            "entropy_vector": io::entropy_vector_json(v.point.vector()),
            "slack": io::loglin_json(&v.slack),
        })
    });
    json!({
        "violation": violation,
        "groups_scanned": o.groups_scanned,
        "tuples_scanned": o.tuples_scanned,
        "truncated": o.truncated,
    })
}

fn run_search(ineq: &LinearInequality, max_order: usize, groups: Option<&str>, max_tuples: u64) -> Result<SearchOutcome, CliError> {
    let catalog = match groups {
        Some(path) => io::parse_group_list(&read(path)?)?,
        None => builtin_catalog(max_order),
    };
    Ok(search_violation(ineq, &catalog, SearchLimits { max_tuples_per_group: max_tuples })?)
}

pub fn group_search(
    text: &str,
    max_order: usize,
    groups: Option<&str>,
    max_tuples: u64,
    args: &IneqArgs,
) -> Result<RunReport, CliError> {
    let p = parse(text, args)?;
    let outcome = run_search(&p.ineq, max_order, groups, max_tuples)?;
    let mut r = RunReport::new(
        "group-search",
        json!({ "ineq": text, "max_order": max_order, "groups": groups, "max_tuples": max_tuples, "vars": args.vars }),
    );
    match &outcome.violation {
        Some(v) => {
            r.outcome = "violated".into();
            r.summary = format!("violated by a coset point of {} with slack {} bits", v.group_name, v.slack);
            r.exit_code = EXIT_NEGATIVE;
        }
        None => {
            r.outcome = "none within catalog".into();
            r.summary = format!("none within catalog ({} groups scanned)", outcome.groups_scanned);
        }
    }
    r.result = json!({ "inequality": ineq_json(&p), "search": outcome_json(&outcome, &p.names) });
    Ok(r)
}

fn counterexample_json(ce: &DimensionCounterexample, names: &[String]) -> Value {
    let base = ce.witness.base();
    let dims: Vec<Value> = ce
        .dims
        .iter()
        .map(|(s, d)| {
            let vars: Vec<&str> = s.coordinates().into_iter().map(|k| names[k].as_str()).collect();
            json!({ "subset": s.to_string(), "variables": vars, "card": d.card, "exact": d.exact_string(), "float": d.to_f64() })
        })
        .collect();
    let levels: Vec<Value> = ce
        .levels
        .iter()
        .map(|l| json!({ "subset": l.subset.to_string(), "exact": l.exact_string(), "float": l.to_f64(), "clamped": l.clamped }))
        .collect();
    json!({
        "N": base,
        "entropy_slack": io::loglin_json(&ce.entropy_slack),
        "witness": io::witness_json(&ce.witness),
        "dimensions": dims,
        "epsilon": format_rational(&ce.epsilon),
        "levels": levels,
        "margin": { "exact": format!("({})/log2({base})", ce.margin), "float": ce.margin_f64() },
        "verified": true,
    })
}

pub fn counterexample(
    text: &str,
    given: Option<(&str, &str)>,
    max_order: usize,
    args: &IneqArgs,
) -> Result<RunReport, CliError> {
    let p = parse(text, args)?;
    let mut r = RunReport::new(
        "counterexample",
        json!({ "ineq": text, "group": given.map(|g| g.0), "subgroups": given.map(|g| g.1), "max_order": max_order, "vars": args.vars }),
    );
    let (group_name, group, subgroups, search) = match given {
        Some((gp, sp)) => {
            let g = io::parse_group(&read(gp)?)?;
            let subs = io::parse_subgroups(&read(sp)?, &g)?;
            (gp.to_string(), g, subs, Value::Null)
        }
        None => {
            let outcome = run_search(&p.ineq, max_order, None, SearchLimits::default().max_tuples_per_group)?;
            let search = outcome_json(&outcome, &p.names);
            match outcome.violation {
                Some(v) => (v.group_name, v.group, v.subgroups, search),
                None => {
                    r.outcome = "none within catalog".into();
                    r.summary = "no violating group within the catalog; no counterexample built".into();
                    r.result = json!({ "inequality": ineq_json(&p), "search": search });
                    return Ok(r);
                }
            }
        }
    };
    let ce = build_counterexample(&p.ineq, &group, &subgroups)?;
    r.outcome = "counterexample".into();
    r.summary = format!(
        "group {group_name}: N = {}, eps = {}, dimension margin {:.6} > 0",
        ce.witness.base(),
        format_rational(&ce.epsilon),
        ce.margin_f64()
    );
    r.result = json!({
        "inequality": ineq_json(&p),
        "group": group_name,
        "subgroups": subgroups.iter().map(|h| h.elements().to_vec()).collect::<Vec<_>>(),
        "search": search,
        "counterexample": counterexample_json(&ce, &p.names),
    });
    r.exit_code = EXIT_NEGATIVE;
    Ok(r)
}

fn projection_json(w: &CantorWitness, s: SubsetIndex) -> Value {
    let proj = w.project(s);
    let d = proj.dim_value();
    let fiber = match w.uniform_fiber(s) {
        Fibers::Uniform(f) => json!(f),
        Fibers::NonUniform(_) => Value::Null,
    };
    json!({ "subset": s.to_string(), "card": d.card, "exact": d.exact_string(), "float": d.to_f64(), "uniform_fiber": fiber })
}

pub fn cantor(path: &str, project: Option<&[usize]>) -> Result<RunReport, CliError> {
    let w = io::parse_witness(&read(path)?)?;
    let chosen = match project {
        Some(pos) => vec![SubsetIndex::from_positions(pos, w.m())?],
        None => subsets(w.m())?,
    };
    let d = w.dim_value();
    let mut r = RunReport::new("cantor", json!({ "witness": path, "project": project }));
    r.outcome = "ok".into();
    r.summary = format!("dim = {} = {:.6}", d.exact_string(), d.to_f64());
    r.result = json!({
        "m": w.m(),
        "N": w.base(),
        "points": w.len(),
        "dimension": { "exact": d.exact_string(), "float": d.to_f64() },
        "projections": chosen.into_iter().map(|s| projection_json(&w, s)).collect::<Vec<_>>(),
    });
    r.exit_code = EXIT_OK;
    Ok(r)
}

pub fn split(body_path: &str, spec_path: &str, greedy: bool) -> Result<RunReport, CliError> {
    let body = io::parse_body(&read(body_path)?)?;
    let spec = io::parse_split_spec(&read(spec_path)?, body.m())?;
    let method = if greedy { "greedy" } else { "exhaustive" };
    let found = if greedy { find_split_greedy(&body, &spec)? } else { find_split_exhaustive(&body, &spec)? };
    let mut r = RunReport::new("split", json!({ "body": body_path, "spec": spec_path, "method": method }));
    let parts: Vec<Value> = spec
        .parts()
        .iter()
        .map(|(s, b)| json!({ "subset": s.to_string(), "budget_bits": b.to_f64(), "max_count": b.max_count(body.len()).ok() }))
        .collect();
    match found {
        Some(res) => {
            let assignment: BTreeMap<usize, String> =
                res.assignment.iter().enumerate().map(|(k, &part)| (k, res.parts[part].to_string())).collect();
            r.outcome = "split found".into();
            r.summary = format!("split found by {method} search and re-verified");
            r.result = json!({
                "parts": parts,
                "points": body.points(),
                "assignment": assignment,
                "projection_counts": res.projection_counts,
                "verified": true,
            });
        }
        None if greedy => {
            r.outcome = "inconclusive".into();
            r.summary = "greedy search found no split; this does not rule one out".into();
            r.result = json!({ "parts": parts });
        }
        None => {
            r.outcome = "no split".into();
            r.summary = "no assignment of points to parts meets every budget".into();
            r.result = json!({ "parts": parts });
            r.exit_code = EXIT_NEGATIVE;
        }
    }
    Ok(r)
}

pub fn cube_bar(k: u64) -> Result<RunReport, CliError> {
    let body = cube_bar_instance(k)?;
    let c = check_unsplit_inequality(&body)?;
    let full = check_unsplit_inequality(&full_cube(k)?)?;
    let mut r = RunReport::new("demo cube-bar", json!({ "k": k }));
    let relation = match c.sign {
        Sign::Negative => ">",
        Sign::Zero => "=",
        Sign::Positive => "<",
    };
    let verdict = if c.holds() { "holds" } else { "VIOLATED" };
    r.outcome = if c.holds() { "holds" } else { "violated" }.into();
    r.summary = format!(
        "{}·{} = {} {relation} {}·{} = {}: unsplit inequality {verdict}",
        c.s1, c.s, c.lhs_product, c.s12, c.s13, c.rhs_product
    );
    r.result = json!({
        "N": body.base(),
        "points": c.s,
        "s1": c.s1,
        "s12": c.s12,
        "s13": c.s13,
        "lhs_product": c.lhs_product.to_string(),
        "rhs_product": c.rhs_product.to_string(),
        "lhs_bits": c.lhs_bits,
        "rhs_bits": c.rhs_bits,
        "loomis_whitney_slack_bits": loomis_whitney_slack(&body)?,
        "cube_alone": {
            "lhs_product": full.lhs_product.to_string(),
            "rhs_product": full.rhs_product.to_string(),
            "equal": full.sign == Sign::Zero,
        },
    });
    if !c.holds() {
        r.exit_code = EXIT_NEGATIVE;
    }
    Ok(r)
}

fn full_cube(k: u64) -> Result<entdim::FiniteBody, CliError> {
    let side = u32::try_from(k).map_err(|_| entdim::error::SplitError::BadSide(k))?;
    let pts = (0..side).flat_map(|x| (0..side).flat_map(move |y| (0..side).map(move |z| vec![x, y, z])));
    Ok(entdim::FiniteBody::new(3, k, pts)?)
}
