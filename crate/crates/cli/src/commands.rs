use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};

use toroidal::fan::validate_fan;
use toroidal::quotient::{branches_separated, quotient_chart, separate_branches, switch_check};
use toroidal::resolver::{hj_resolution, make_simplicial, resolve, ResolutionTrace};
use toroidal::torific::{torify, PreToroidalSitus, TorifyReport};

use crate::error::CliError;
use crate::schema::*;

/// Subcommands that read one input document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Resolve,
    Simplicialize,
    Quotient,
    Separate,
    Torify,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Simplicialize => "simplicialize",
            Command::Quotient => "quotient",
            Command::Separate => "separate",
            Command::Torify => "torify",
            Command::Validate => "validate",
        }
    }
}

/// Result of a successful run. `failure` marks a failed verdict (exit 1).
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub output: String,
    pub trace: Option<String>,
    pub counts: BTreeMap<String, u64>,
    pub verdicts: BTreeMap<String, String>,
    pub failure: Option<String>,
}

impl Outcome {
    fn count(&mut self, key: &str, n: usize) {
        self.counts.insert(key.to_string(), n as u64);
    }

    fn verdict(&mut self, key: &str, ok: bool) {
        self.verdicts
            .insert(key.to_string(), if ok { "pass" } else { "fail" }.to_string());
    }
}

pub fn run_command(command: Command, text: &str) -> Result<Outcome, CliError> {
    let doc = parse_document(text)?;
    match command {
        Command::Resolve => run_resolve(&doc),
        Command::Simplicialize => run_simplicialize(&doc),
        Command::Quotient => run_quotient(&doc),
        Command::Separate => run_separate(&doc),
        Command::Torify => run_torify(&doc),
        Command::Validate => Ok(run_validate(&doc)),
    }
}

fn load_fan(doc: &Value) -> Result<toroidal::fan::Fan, CliError> {
    let (rank, raw) = raw_fan_from_json(doc)?;
    let diags = validate_fan(rank, &raw);
    if !diags.is_empty() {
        let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
        return Err(CliError::Parse(format!("invalid fan: {}", lines.join("; "))));
    }
    fan_from_raw(rank, &raw)
}

fn run_resolve(doc: &Value) -> Result<Outcome, CliError> {
    let fan = load_fan(doc)?;
    let (out, trace) = resolve(&fan)?;
    let mut o = Outcome {
        output: canonical(&fan_to_json(&out)),
        trace: Some(canonical(&trace_to_json(&trace))),
        ..Outcome::default()
    };
    o.count("cones_in", fan.cones().len());
    o.count("cones_out", out.cones().len());
    o.count("rays_out", out.rays().len());
    o.count("steps", trace.len());
    o.verdict("smooth", out.is_smooth());
    if !out.is_smooth() {
        o.failure = Some("output fan is not smooth".into());
    }
    Ok(o)
}

pub fn trace_to_json(t: &ResolutionTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "cone": vectors_to_json(&s.cone),
                "point": vector_to_json(&s.point),
                "multiplicity_before": int_to_json(&s.multiplicity_before),
                "affected": s.affected.iter().map(|a| json!({
                    "rays": vectors_to_json(&a.rays),
                    "before": int_to_json(&a.before),
                    "after": a.after.iter().map(int_to_json).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "schema": SCHEMA_VERSION, "steps": steps })
}

fn run_simplicialize(doc: &Value) -> Result<Outcome, CliError> {
    let fan = load_fan(doc)?;
    let out = make_simplicial(&fan)?;
    let mut o = Outcome {
        output: canonical(&fan_to_json(&out)),
        ..Outcome::default()
    };
    o.count("cones_in", fan.cones().len());
    o.count("cones_out", out.cones().len());
    o.verdict("simplicial", out.is_simplicial());
    Ok(o)
}

fn run_quotient(doc: &Value) -> Result<Outcome, CliError> {
    let (cone, group) = quotient_from_json(doc)?;
    let q = quotient_chart(&cone, &group)?;
    let mut body = json!({
        "schema": SCHEMA_VERSION,
        "rank": cone.ambient_rank(),
        "cone": cone_to_json(&q.cone),
        "basis": q.basis.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "invariants": group.invariants().iter().map(int_to_json).collect::<Vec<_>>(),
        "order": int_to_json(&group.order()),
    });
    if let Ok(m) = q.cone.multiplicity() {
        body["multiplicity"] = int_to_json(&m);
    }
    let mut o = Outcome {
        output: canonical(&body),
        ..Outcome::default()
    };
    o.count("rays", q.cone.rays().len());
    Ok(o)
}

fn run_separate(doc: &Value) -> Result<Outcome, CliError> {
    let model = node_from_json(doc)?;
    let (fan, classes) = separate_branches(&model)?;
    let separated = branches_separated(&model, &fan);
    let charts: Vec<Value> = classes
        .charts
        .iter()
        .map(|c| {
            json!({
                "rays": vectors_to_json(c.cone.rays()),
                "generator": vector_to_json(&c.generator),
                "kind": c.kind.as_str(),
                "exponents": c.exponents.iter().map(int_to_json).collect::<Vec<_>>(),
                "normalized_smooth": c.normalized_smooth,
            })
        })
        .collect();
    let mut trace = json!({
        "schema": SCHEMA_VERSION,
        "charts": charts,
        "branches_separated": separated,
    });
    let mut o = Outcome {
        output: canonical(&fan_to_json(&fan)),
        ..Outcome::default()
    };
    o.count("charts", classes.charts.len());
    o.verdict("branches_separated", separated);
    let mut failures = Vec::new();
    if !separated {
        failures.push("a chart contains both branches".to_string());
    }
    if model.has_switch() {
        let sw = switch_check(&model, &fan)?;
        trace["switch"] = json!({
            "fan_invariant": sw.fan_invariant,
            "stable_charts": sw.stable_charts,
            "stable_charts_with_both_branches": sw.stable_charts_with_both_branches,
        });
        o.verdict("switch", sw.passes());
        if !sw.passes() {
            failures.push("branch switch fixes a chart containing both branches".to_string());
        }
    }
    o.trace = Some(canonical(&trace));
    if !failures.is_empty() {
        o.failure = Some(failures.join("; "));
    }
    Ok(o)
}

pub fn torify_report_to_json(s: &PreToroidalSitus, r: &TorifyReport) -> Value {
    let charts: Vec<Value> = r
        .charts
        .iter()
        .map(|c| {
            json!({
                "rays": vectors_to_json(c.cone.rays()),
                "generator": c.generator.as_ref().map(|g| vector_to_json(g)),
                "verdict": c.verdict.as_str(),
                "invariant_coordinate": c.invariant_coordinate.as_ref().map(|u| vector_to_json(u)),
                "invariant_character": c.invariant_character.as_ref().map(character_to_json),
                "x_in_boundary": c.x_in_boundary,
                "stabilizer_invariants": c.stabilizer_invariants.iter().map(int_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "ideal": ideal_to_json(&r.ideal),
        "psi_x": character_to_json(&s.psi_x()),
        "group": group_to_json(s.group()),
        "charts": charts,
        "all_toroidal": r.all_toroidal(),
    })
}

fn run_torify(doc: &Value) -> Result<Outcome, CliError> {
    let s = situs_from_json(doc)?;
    let r = torify(&s)?;
    let mut o = Outcome {
        output: canonical(&fan_to_json(&r.fan)),
        trace: Some(canonical(&torify_report_to_json(&s, &r))),
        ..Outcome::default()
    };
    o.count("charts", r.charts.len());
    o.count("ideal_generators", r.ideal.generators().len());
    for (i, c) in r.charts.iter().enumerate() {
        o.verdicts
            .insert(format!("chart_{i}"), c.verdict.as_str().to_string());
    }
    if !r.all_toroidal() {
        o.failure = Some("some chart is not toroidal".into());
    }
    Ok(o)
}

fn run_validate(doc: &Value) -> Outcome {
    let mut problems: Vec<String> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    match document_kind(doc) {
        None => problems.push("unrecognized document: expected a fan, quotient, node or situs".into()),
        Some(DocumentKind::Fan) => match raw_fan_from_json(doc) {
            Ok((rank, raw)) => problems.extend(validate_fan(rank, &raw).iter().map(ToString::to_string)),
            Err(e) => problems.push(e.to_string()),
        },
        Some(DocumentKind::Quotient) => match quotient_from_json(doc) {
            Ok((_, group)) => {
                if !group.is_presentation_faithful() {
                    problems.push(injectivity_message(&group));
                }
            }
            Err(e) => problems.push(e.to_string()),
        },
        Some(DocumentKind::Node) => {
            if let Err(e) = node_from_json(doc) {
                problems.push(e.to_string());
            }
        }
        Some(DocumentKind::Situs) => match raw_situs_from_json(doc) {
            Ok(raw) => {
                match PreToroidalSitus::from_parts(raw.base_cone, raw.generators, raw.psi_x) {
                    Ok(s) => {
                        if !s.acts_through_base_torus() {
                            notes.push(
                                "note: group does not embed in the base torus; torification may leave pre-toroidal charts"
                                    .into(),
                            );
                        }
                    }
                    Err(toroidal::Error::NonInjective(m)) => {
                        problems.push(format!("group does not act faithfully: {m}"))
                    }
                    Err(e) => problems.push(e.to_string()),
                }
            }
            Err(e) => problems.push(e.to_string()),
        },
    }
    let mut text = String::new();
    if problems.is_empty() {
        text.push_str("OK\n");
    }
    for p in problems.iter().chain(&notes) {
        text.push_str(p);
        text.push('\n');
    }
    let mut o = Outcome {
        output: text,
        ..Outcome::default()
    };
    o.count("diagnostics", problems.len());
    o.verdict("valid", problems.is_empty());
    if !problems.is_empty() {
        o.failure = Some(format!("{} diagnostic(s)", problems.len()));
    }
    o
}

fn injectivity_message(group: &toroidal::lattice::FiniteDiagonalGroup) -> String {
    format!(
        "group does not act faithfully: generators present a group of order {} whose image in the torus has order {}",
        group.presented_order(),
        group.order()
    )
}

/// The `hj n q` subcommand.
pub fn run_hj(n: &str, q: &str) -> Result<Outcome, CliError> {
    let parse = |s: &str| -> Result<BigInt, CliError> {
        s.trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("\"{s}\" is not an integer")))
    };
    let (n, q) = (parse(n)?, parse(q)?);
    let rays = hj_resolution(&n, &q)?;
    let mut o = Outcome {
        output: canonical(&json!({
            "schema": SCHEMA_VERSION,
            "n": int_to_json(&n),
            "q": int_to_json(&q),
            "rays": vectors_to_json(&rays),
        })),
        ..Outcome::default()
    };
    o.count("rays", rays.len());
    Ok(o)
}
