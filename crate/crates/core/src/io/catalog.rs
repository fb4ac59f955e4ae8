use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::HyperbolicDatum;
use crate::error::{Error, Result};
use crate::lattice::{CuspLattice, EuclideanVector};

/// Catalog format understood by this version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    schema_version: u32,
    #[serde(default)]
    description: Option<String>,
    records: Vec<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCusp {
    v1: [f64; 2],
    v2: [f64; 2],
    #[serde(default)]
    claimed_maximal: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    name: String,
    cusps: Vec<RawCusp>,
    #[serde(default)]
    volume: Option<f64>,
    #[serde(default)]
    gromov_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRecord {
    pub name: String,
    pub cusps: Vec<CuspLattice>,
    pub volume: Option<f64>,
    pub gromov_norm: Option<f64>,
}

/// Why a record was skipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub index: usize,
    pub name: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogLoad {
    pub description: Option<String>,
    pub records: Vec<CatalogRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

fn validate(raw: RawRecord) -> Result<CatalogRecord> {
    if raw.cusps.is_empty() {
        return Err(Error::Catalog("record has no cusps".into()));
    }
    let cusps = raw
        .cusps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            CuspLattice::new(
                EuclideanVector::new(c.v1[0], c.v1[1]),
                EuclideanVector::new(c.v2[0], c.v2[1]),
                c.claimed_maximal,
            )
            .map_err(|e| Error::Catalog(format!("cusp {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    match (raw.volume, raw.gromov_norm) {
        (Some(v), n) => {
            HyperbolicDatum::new(v, n).map_err(|e| Error::Catalog(e.to_string()))?;
        }
        (None, Some(n)) if !(n.is_finite() && n > 0.0) => {
            return Err(Error::Catalog(format!("Gromov norm {n} must be positive")));
        }
        _ => {}
    }
    Ok(CatalogRecord { name: raw.name, cusps, volume: raw.volume, gromov_norm: raw.gromov_norm })
}

/// Parses catalog JSON. Invalid records are skipped with a diagnostic, or
/// fail the whole load when `strict`.
pub fn parse_catalog(text: &str, strict: bool) -> Result<CatalogLoad> {
    let raw: RawCatalog = serde_json::from_str(text).map_err(|e| Error::Catalog(format!("parse error: {e}")))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Catalog(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (index, value) in raw.records.into_iter().enumerate() {
        let name = value.get("name").and_then(|n| n.as_str()).map(str::to_owned);
        let outcome = serde_json::from_value::<RawRecord>(value)
            .map_err(|e| Error::Catalog(format!("schema violation: {e}")))
            .and_then(validate);
        match outcome {
            Ok(r) => records.push(r),
            Err(e) if strict => {
                return Err(Error::Catalog(format!("record {index} ({}): {e}", name.as_deref().unwrap_or("?"))))
            }
            Err(e) => diagnostics.push(Diagnostic { index, name, message: e.to_string() }),
        }
    }
    Ok(CatalogLoad { description: raw.description, records, diagnostics })
}

pub fn load_catalog(path: &Path, strict: bool) -> Result<CatalogLoad> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Catalog(format!("cannot read {}: {e}", path.display())))?;
    parse_catalog(&text, strict)
}
