//! JSON file formats for fans and complete intersections.
//!
//! Fan: `{"name": ..., "rays": [[...], ...], "max_cones": [[...], ...]}`.
//! CY: `{"fan": {...} | "fan_ref": "catalog:<name>", "hypersurfaces": [[...], ...],
//! "assume_smooth": bool}` with optional `"name"` and `"provenance"`.

use serde::{Deserialize, Serialize};

use crate::catalog::lookup;
use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::{validate_fan, Fan, FanWarning};
use crate::koszul::CompleteIntersection;

pub const CATALOG_PREFIX: &str = "catalog:";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default)]
    pub name: String,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn from_fan(fan: &Fan, name: &str) -> Self {
        Self {
            name: name.into(),
            rays: fan.rays().to_vec(),
            max_cones: fan.max_cones().iter().map(|c| c.rays().to_vec()).collect(),
        }
    }

    pub fn validate(&self) -> Result<(Fan, Vec<FanWarning>)> {
        validate_fan(self.rays.clone(), self.max_cones.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan_ref: Option<String>,
    pub hypersurfaces: Vec<Vec<i64>>,
    #[serde(default)]
    pub assume_smooth: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl CyFile {
    pub fn from_ci(z: &CompleteIntersection) -> Self {
        Self {
            name: z.name.clone(),
            fan: Some(FanFile::from_fan(z.fan(), z.name.as_deref().unwrap_or(""))),
            fan_ref: None,
            hypersurfaces: z
                .hypersurfaces()
                .iter()
                .map(|h| h.coefficients().to_vec())
                .collect(),
            assume_smooth: z.assume_smooth(),
            provenance: z.provenance.clone(),
        }
    }

    pub fn resolve(&self) -> Result<(CompleteIntersection, Vec<FanWarning>)> {
        let (fan, warnings) = match (&self.fan, &self.fan_ref) {
            (Some(f), None) => f.validate()?,
            (None, Some(r)) => (resolve_fan_ref(r)?, Vec::new()),
            _ => {
                return Err(Error::InvalidInput(
                    "exactly one of `fan` and `fan_ref` is required".into(),
                ))
            }
        };
        let hs = self
            .hypersurfaces
            .iter()
            .cloned()
            .map(TorusDivisor)
            .collect();
        let mut z = CompleteIntersection::new(fan, hs, self.assume_smooth)?;
        z.name = self.name.clone();
        z.provenance = self.provenance.clone();
        Ok((z, warnings))
    }
}

/// Ambient fan of a catalog entry, from `catalog:<name>`.
pub fn resolve_fan_ref(reference: &str) -> Result<Fan> {
    let name = reference.strip_prefix(CATALOG_PREFIX).ok_or_else(|| {
        Error::InvalidInput(format!(
            "fan_ref `{reference}` must start with `{CATALOG_PREFIX}`"
        ))
    })?;
    lookup(name)?.ambient.fan()
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn parse_fan(text: &str) -> Result<(FanFile, Fan, Vec<FanWarning>)> {
    let file: FanFile = parse(text)?;
    let (fan, warnings) = file.validate()?;
    Ok((file, fan, warnings))
}

pub fn parse_cy(text: &str) -> Result<(CompleteIntersection, Vec<FanWarning>)> {
    parse::<CyFile>(text)?.resolve()
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}
