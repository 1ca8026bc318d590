//! JSON documents. Integers beyond `i64` are written as decimal strings and
//! either form is accepted on input; rationals are `"p/q"` strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use toroidal::fan::{Fan, MonomialIdeal, RationalCone};
use toroidal::lattice::{parse_residue, Character, FiniteDiagonalGroup, LatticeVector, Residue};
use toroidal::quotient::NodeModel;
use toroidal::torific::PreToroidalSitus;

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

fn err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Which kind of document a file holds, judged by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    Fan,
    Quotient,
    Node,
    Situs,
}

pub fn parse_document(text: &str) -> Result<Value, CliError> {
    let doc: Value = serde_json::from_str(text)?;
    if !doc.is_object() {
        return Err(err("document must be a JSON object"));
    }
    match doc.get("schema") {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => Ok(doc),
        Some(v) => Err(err(format!("unsupported schema version {v}"))),
        None => Err(err("missing \"schema\" field")),
    }
}

pub fn document_kind(doc: &Value) -> Option<DocumentKind> {
    if doc.get("base_cone").is_some() {
        Some(DocumentKind::Situs)
    } else if doc.get("k").is_some() {
        Some(DocumentKind::Node)
    } else if doc.get("cones").is_some() {
        Some(DocumentKind::Fan)
    } else if doc.get("cone").is_some() && doc.get("group").is_some() {
        Some(DocumentKind::Quotient)
    } else {
        None
    }
}

pub fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    doc.get(key).ok_or_else(|| err(format!("missing field \"{key}\"")))
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| err(format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| err(format!("\"{s}\" is not an integer"))),
        other => Err(err(format!("{other} is not an integer"))),
    }
}

fn usize_from_json(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| err(format!("{what} must be a non-negative integer")))
}

pub fn vector_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn vectors_to_json(vs: &[LatticeVector]) -> Value {
    Value::Array(vs.iter().map(|v| vector_to_json(v)).collect())
}

pub fn vector_from_json(v: &Value) -> Result<LatticeVector, CliError> {
    v.as_array()
        .ok_or_else(|| err("vector must be an array"))?
        .iter()
        .map(int_from_json)
        .collect()
}

fn vectors_from_json(v: &Value) -> Result<Vec<LatticeVector>, CliError> {
    v.as_array()
        .ok_or_else(|| err("expected an array of vectors"))?
        .iter()
        .map(vector_from_json)
        .collect()
}

fn check_lengths(rays: &[LatticeVector], rank: usize) -> Result<(), CliError> {
    for r in rays {
        if r.len() != rank {
            return Err(err(format!(
                "ray of length {} in a lattice of rank {rank}",
                r.len()
            )));
        }
    }
    Ok(())
}

/// Rays and rank of a `{"rays": [...], "rank": d}` object; `rank` may be
/// omitted when there is at least one ray.
pub fn raw_cone_from_json(v: &Value, rank: Option<usize>) -> Result<(usize, Vec<LatticeVector>), CliError> {
    let rays = vectors_from_json(field(v, "rays")?)?;
    let rank = match (v.get("rank"), rank) {
        (Some(r), _) => usize_from_json(r, "rank")?,
        (None, Some(r)) => r,
        (None, None) => rays
            .first()
            .map(Vec::len)
            .ok_or_else(|| err("cone without rays needs \"rank\""))?,
    };
    Ok((rank, rays))
}

pub fn cone_from_json(v: &Value, rank: Option<usize>) -> Result<RationalCone, CliError> {
    let (rank, rays) = raw_cone_from_json(v, rank)?;
    check_lengths(&rays, rank)?;
    let cone = RationalCone::generated_by(rank, &rays)?;
    if !cone.is_strongly_convex() {
        return Err(err(format!("cone {cone:?} contains a line")));
    }
    Ok(cone)
}

pub fn cone_to_json(c: &RationalCone) -> Value {
    let mut m = Map::new();
    m.insert("rays".into(), vectors_to_json(c.rays()));
    if !c.lineality().is_empty() {
        m.insert("lineality".into(), vectors_to_json(c.lineality()));
    }
    Value::Object(m)
}

/// Rank and raw cone data of a fan document.
pub fn raw_fan_from_json(doc: &Value) -> Result<(usize, Vec<Vec<LatticeVector>>), CliError> {
    let rank = usize_from_json(field(doc, "rank")?, "rank")?;
    let cones = field(doc, "cones")?
        .as_array()
        .ok_or_else(|| err("\"cones\" must be an array"))?
        .iter()
        .map(|c| vectors_from_json(field(c, "rays")?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((rank, cones))
}

pub fn fan_from_raw(rank: usize, cones: &[Vec<LatticeVector>]) -> Result<Fan, CliError> {
    let mut out = Vec::with_capacity(cones.len());
    for rays in cones {
        check_lengths(rays, rank)?;
        out.push(RationalCone::new(rank, rays)?);
    }
    Ok(Fan::new(rank, out)?)
}

pub fn fan_to_json(f: &Fan) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "rank": f.ambient_rank(),
        "cones": f.cones().iter().map(cone_to_json).collect::<Vec<_>>(),
    })
}

pub fn residue_to_json(r: &Residue) -> Value {
    Value::String(r.to_string())
}

pub fn residue_from_json(v: &Value) -> Result<Residue, CliError> {
    match v {
        Value::String(s) => Ok(parse_residue(s)?),
        Value::Number(_) => Ok(Residue::new(int_from_json(v)?.into())),
        other => Err(err(format!("{other} is not a rational"))),
    }
}

fn residues_from_json(v: &Value) -> Result<Vec<Residue>, CliError> {
    v.as_array()
        .ok_or_else(|| err("expected an array of rationals"))?
        .iter()
        .map(residue_from_json)
        .collect()
}

pub fn character_to_json(c: &Character) -> Value {
    Value::Array(c.values.iter().map(residue_to_json).collect())
}

/// Generators of a `{"gens": [[...], ...]}` object.
pub fn generators_from_json(v: &Value) -> Result<Vec<Vec<Residue>>, CliError> {
    field(v, "gens")?
        .as_array()
        .ok_or_else(|| err("\"gens\" must be an array"))?
        .iter()
        .map(residues_from_json)
        .collect()
}

pub fn group_to_json(g: &FiniteDiagonalGroup) -> Value {
    json!({
        "gens": g
            .generators()
            .iter()
            .map(|e| e.iter().map(residue_to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn quotient_from_json(doc: &Value) -> Result<(RationalCone, FiniteDiagonalGroup), CliError> {
    let rank = doc.get("rank").map(|r| usize_from_json(r, "rank")).transpose()?;
    let cone = cone_from_json(field(doc, "cone")?, rank)?;
    let gens = generators_from_json(field(doc, "group")?)?;
    let group = FiniteDiagonalGroup::new(cone.ambient_rank(), gens)?;
    Ok((cone, group))
}

pub fn node_from_json(doc: &Value) -> Result<NodeModel, CliError> {
    let k = field(doc, "k")?
        .as_array()
        .ok_or_else(|| err("\"k\" must be an array"))?
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let extra = match doc.get("extra") {
        Some(v) => usize_from_json(v, "extra")?,
        None => 0,
    };
    let switch = match doc.get("switch") {
        Some(v) => v.as_bool().ok_or_else(|| err("\"switch\" must be a boolean"))?,
        None => false,
    };
    Ok(NodeModel::new(k, extra, switch)?)
}

/// Base cone, generators (of length `d0` or `d0 + 1`) and optional `psi_x`,
/// before any consistency check.
pub struct RawSitus {
    pub base_cone: RationalCone,
    pub generators: Vec<Vec<Residue>>,
    pub psi_x: Option<Vec<Residue>>,
}

pub fn raw_situs_from_json(doc: &Value) -> Result<RawSitus, CliError> {
    let base_cone = cone_from_json(field(doc, "base_cone")?, None)?;
    let generators = generators_from_json(field(doc, "group")?)?;
    let psi_x = doc.get("psi_x").map(residues_from_json).transpose()?;
    Ok(RawSitus {
        base_cone,
        generators,
        psi_x,
    })
}

pub fn situs_from_json(doc: &Value) -> Result<PreToroidalSitus, CliError> {
    let raw = raw_situs_from_json(doc)?;
    Ok(PreToroidalSitus::from_parts(
        raw.base_cone,
        raw.generators,
        raw.psi_x,
    )?)
}

pub fn ideal_to_json(i: &MonomialIdeal) -> Value {
    vectors_to_json(i.generators())
}

/// Pretty, key-sorted JSON followed by a newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int_to_json(&big);
        assert!(v.is_string());
        assert_eq!(int_from_json(&v).unwrap(), big);
        assert_eq!(int_to_json(&BigInt::from(-7)), json!(-7));
        assert_eq!(int_from_json(&json!("-7")).unwrap(), BigInt::from(-7));
    }

    #[test]
    fn schema_field_is_required() {
        assert!(parse_document(r#"{"rank": 2, "cones": []}"#).is_err());
        assert!(parse_document(r#"{"schema": 2, "rank": 2, "cones": []}"#).is_err());
        assert!(parse_document(r#"{"schema": 1, "rank": 2, "cones": []}"#).is_ok());
    }

    #[test]
    fn fan_round_trip() {
        let doc = parse_document(
            r#"{"schema": 1, "rank": 2, "cones": [{"rays": [[1, 0], ["1", "3"]]}]}"#,
        )
        .unwrap();
        let (rank, raw) = raw_fan_from_json(&doc).unwrap();
        let fan = fan_from_raw(rank, &raw).unwrap();
        let out = fan_to_json(&fan);
        let (rank2, raw2) = raw_fan_from_json(&out).unwrap();
        assert_eq!(fan_from_raw(rank2, &raw2).unwrap(), fan);
    }
}
