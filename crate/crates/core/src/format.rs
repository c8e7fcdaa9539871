//! The workspace file: one JSON document holding an inventory and, optionally,
//! a parameter, a character, an extended multi-segment and a command result.
//!
//! Half-integers are written doubled under `A2`/`B2`, signs as 1 or -1, and
//! characters are keyed `rho:a:b`. Emission is deterministic, so a file
//! produced by [`Workspace::emit`] parses and re-emits byte for byte.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::{CuspidalLabel, DualityType, Inventory, Rho};
use crate::param::{AParameter, GroupSide, JordanBlock, SignMap};
use crate::sign::Sign;
use crate::xms::{ExtendedSegment, Xms};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inventory: Option<Vec<LabelRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<ParameterRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xms: Option<XmsRecord>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "present"
    )]
    pub result: Option<serde_json::Value>,
}

/// Keeps an explicit `null` distinct from an absent field.
fn present<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<serde_json::Value>, D::Error> {
    serde_json::Value::deserialize(d).map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelRecord {
    pub id: String,
    pub dim: u32,
    pub dual: String,
    #[serde(rename = "type")]
    pub duality: String,
    #[serde(default)]
    pub trivial: bool,
    pub omega: i64,
    #[serde(default)]
    pub root_numbers: BTreeMap<u32, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterRecord {
    pub side: String,
    pub blocks: Vec<BlockRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockRecord {
    pub rho: String,
    pub a: u32,
    pub b: u32,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XmsRecord {
    pub side: String,
    pub segments: BTreeMap<String, Vec<SegmentRecord>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentRecord {
    #[serde(rename = "A2")]
    pub a2: i64,
    #[serde(rename = "B2")]
    pub b2: i64,
    pub l: u32,
    pub eta: i64,
}

/// A loaded and validated workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub inventory: Arc<Inventory>,
    /// Whether [`Workspace::emit`] writes the inventory out.
    pub embed_inventory: bool,
    pub parameter: Option<AParameter>,
    pub character: Option<SignMap>,
    pub xms: Option<Xms>,
    pub result: Option<serde_json::Value>,
}

fn at(path: impl Into<String>, err: impl std::fmt::Display) -> Error {
    Error::Schema {
        path: path.into(),
        reason: err.to_string(),
    }
}

fn sign_at(v: i64, path: &str) -> Result<Sign> {
    Sign::from_i64(v).ok_or_else(|| at(path, format!("expected 1 or -1, got {}", v)))
}

fn side_at(s: &str, path: &str) -> Result<GroupSide> {
    match s {
        "metaplectic" => Ok(GroupSide::Metaplectic),
        "odd-orthogonal" => Ok(GroupSide::OddOrthogonal),
        _ => Err(at(path, format!("unknown side `{}`", s))),
    }
}

fn rho_at(inv: &Inventory, id: &str, path: &str) -> Result<Rho> {
    inv.lookup(id).map_err(|e| at(path, e))
}

pub fn inventory_from_records(records: &[LabelRecord]) -> Result<Inventory> {
    let mut labels = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let path = format!("inventory[{}]", i);
        let duality = match r.duality.as_str() {
            "orthogonal" => DualityType::Orthogonal,
            "symplectic" => DualityType::Symplectic,
            "none" => DualityType::None,
            other => {
                return Err(at(
                    format!("{}.type", path),
                    format!("unknown type `{}`", other),
                ))
            }
        };
        let mut root_numbers = BTreeMap::new();
        for (&n, &v) in &r.root_numbers {
            root_numbers.insert(n, sign_at(v, &format!("{}.root_numbers.{}", path, n))?);
        }
        labels.push(CuspidalLabel {
            id: r.id.clone(),
            dim: r.dim,
            dual_id: r.dual.clone(),
            duality,
            is_trivial: r.trivial,
            omega_minus_one: sign_at(r.omega, &format!("{}.omega", path))?,
            root_numbers,
        });
    }
    Inventory::build(labels).map_err(|e| at("inventory", e))
}

pub fn inventory_records(inv: &Inventory) -> Vec<LabelRecord> {
    inv.labels()
        .iter()
        .map(|l| LabelRecord {
            id: l.id.clone(),
            dim: l.dim,
            dual: l.dual_id.clone(),
            duality: l.duality.as_str().to_string(),
            trivial: l.is_trivial,
            omega: l.omega_minus_one.to_i8() as i64,
            root_numbers: l
                .root_numbers
                .iter()
                .map(|(&n, s)| (n, s.to_i8() as i64))
                .collect(),
        })
        .collect()
}

pub fn parameter_from_record(
    inv: &Arc<Inventory>,
    r: &ParameterRecord,
    path: &str,
) -> Result<AParameter> {
    let side = side_at(&r.side, &format!("{}.side", path))?;
    let mut blocks = Vec::with_capacity(r.blocks.len());
    for (i, b) in r.blocks.iter().enumerate() {
        let rho = rho_at(inv, &b.rho, &format!("{}.blocks[{}].rho", path, i))?;
        blocks.push((JordanBlock::new(rho, b.a, b.b), b.mult));
    }
    AParameter::new(inv.clone(), side, blocks).map_err(|e| at(path, e))
}

pub fn parameter_record(psi: &AParameter) -> ParameterRecord {
    let inv = psi.inventory();
    ParameterRecord {
        side: psi.side().as_str().to_string(),
        blocks: psi
            .blocks()
            .iter()
            .map(|(b, &mult)| BlockRecord {
                rho: inv.id(b.rho).to_string(),
                a: b.a,
                b: b.b,
                mult,
            })
            .collect(),
    }
}

pub fn character_from_record(
    inv: &Inventory,
    r: &BTreeMap<String, i64>,
    path: &str,
) -> Result<SignMap> {
    let mut eps = SignMap::new();
    for (key, &v) in r {
        let here = format!("{}.\"{}\"", path, key);
        let parts: Vec<&str> = key.rsplitn(3, ':').collect();
        let [b, a, id] = parts[..] else {
            return Err(at(here, "expected a key of the form rho:a:b"));
        };
        let a: u32 = a
            .parse()
            .map_err(|_| at(&here, "a is not a positive integer"))?;
        let b: u32 = b
            .parse()
            .map_err(|_| at(&here, "b is not a positive integer"))?;
        let rho = rho_at(inv, id, &here)?;
        eps.set(JordanBlock::new(rho, a, b), sign_at(v, &here)?);
    }
    Ok(eps)
}

pub fn character_record(inv: &Inventory, eps: &SignMap) -> BTreeMap<String, i64> {
    eps.iter()
        .map(|(b, s)| (b.label(inv), s.to_i8() as i64))
        .collect()
}

pub fn segment_record(s: &ExtendedSegment) -> SegmentRecord {
    SegmentRecord {
        a2: s.upper.twice(),
        b2: s.lower.twice(),
        l: s.l,
        eta: s.eta.to_i8() as i64,
    }
}

pub fn xms_from_record(inv: &Arc<Inventory>, r: &XmsRecord, path: &str) -> Result<Xms> {
    let side = side_at(&r.side, &format!("{}.side", path))?;
    let mut rows = Vec::with_capacity(r.segments.len());
    for (id, segs) in &r.segments {
        let rho = rho_at(inv, id, &format!("{}.segments.{}", path, id))?;
        let mut row = Vec::with_capacity(segs.len());
        for (i, s) in segs.iter().enumerate() {
            let eta = sign_at(s.eta, &format!("{}.segments.{}[{}].eta", path, id, i))?;
            row.push(ExtendedSegment::new(
                HalfInteger::from_twice(s.a2),
                HalfInteger::from_twice(s.b2),
                s.l,
                eta,
            ));
        }
        rows.push((rho, row));
    }
    Xms::new(inv.clone(), side, rows).map_err(|e| match e {
        Error::InvalidSegment { .. } => e,
        other => at(path, other),
    })
}

pub fn xms_record(e: &Xms) -> XmsRecord {
    let inv = e.inventory();
    XmsRecord {
        side: e.side().as_str().to_string(),
        segments: e
            .rows()
            .iter()
            .map(|(&rho, row)| {
                (
                    inv.id(rho).to_string(),
                    row.iter().map(segment_record).collect(),
                )
            })
            .collect(),
    }
}

/// Parses raw JSON into the schema-level file, reporting the field path of
/// any schema violation.
pub fn parse_file(text: &str) -> Result<WorkspaceFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: WorkspaceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        at(
            if path == "." {
                "(root)".to_string()
            } else {
                path
            },
            e.into_inner(),
        )
    })?;
    Ok(file)
}

impl Workspace {
    pub fn new(inventory: Arc<Inventory>) -> Workspace {
        Workspace {
            inventory,
            embed_inventory: true,
            parameter: None,
            character: None,
            xms: None,
            result: None,
        }
    }

    /// Loads a workspace. `fallback` supplies the inventory when the file
    /// has none.
    pub fn parse(text: &str, fallback: Option<Arc<Inventory>>) -> Result<Workspace> {
        Self::from_file(&parse_file(text)?, fallback)
    }

    pub fn from_file(file: &WorkspaceFile, fallback: Option<Arc<Inventory>>) -> Result<Workspace> {
        let (inventory, embed_inventory) = match (&file.inventory, fallback) {
            (Some(records), _) => (Arc::new(inventory_from_records(records)?), true),
            (None, Some(inv)) => (inv, false),
            (None, None) => return Err(at("inventory", "no inventory given")),
        };
        let parameter = file
            .parameter
            .as_ref()
            .map(|r| parameter_from_record(&inventory, r, "parameter"))
            .transpose()?;
        let character = match &file.character {
            None => None,
            Some(r) => {
                let eps = character_from_record(&inventory, r, "character")?;
                let Some(psi) = &parameter else {
                    return Err(at("character", "a character needs a parameter"));
                };
                psi.check_character(&eps).map_err(|e| at("character", e))?;
                Some(eps)
            }
        };
        let xms = file
            .xms
            .as_ref()
            .map(|r| xms_from_record(&inventory, r, "xms"))
            .transpose()?;
        Ok(Workspace {
            inventory,
            embed_inventory,
            parameter,
            character,
            xms,
            result: file.result.clone(),
        })
    }

    pub fn to_file(&self) -> WorkspaceFile {
        WorkspaceFile {
            inventory: self
                .embed_inventory
                .then(|| inventory_records(&self.inventory)),
            parameter: self.parameter.as_ref().map(parameter_record),
            character: self
                .character
                .as_ref()
                .map(|eps| character_record(&self.inventory, eps)),
            xms: self.xms.as_ref().map(xms_record),
            result: self.result.clone(),
        }
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("workspace serializes");
        s.push('\n');
        s
    }
}
