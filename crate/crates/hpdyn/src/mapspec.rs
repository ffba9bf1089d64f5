//! The map-spec JSON document: the on-disk exchange format for triplets.
//!
//! ```json
//! {
//!   "alpha": 2.0,
//!   "beta": 0.0,
//!   "atoms": [[0.0, 0.5]],
//!   "densities": [{"family": "gaussian", "scale": 1.0, "params": {}}]
//! }
//! ```
//!
//! Numbers are decimal with at least 15 significant digits on write;
//! bit-exactness is not required.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::HerglotzTriplet;
use crate::measure::{Atom, DensityComponent, DensityFamily, FiniteMeasure, Side};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensitySpec {
    pub family: String,
    pub scale: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default)]
    pub densities: Vec<DensitySpec>,
}

impl MapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("invalid map spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map specs always serialize")
    }

    pub fn to_triplet(&self) -> Result<HerglotzTriplet> {
        let atoms = self
            .atoms
            .iter()
            .map(|&[location, mass]| Atom { location, mass })
            .collect();
        let mut densities = Vec::new();
        for d in &self.densities {
            densities.push(DensityComponent::new(parse_family(d)?, d.scale)?);
        }
        HerglotzTriplet::new(self.alpha, self.beta, FiniteMeasure::new(atoms, densities)?)
    }

    pub fn from_triplet(f: &HerglotzTriplet) -> Self {
        let atoms = f
            .mu()
            .atoms()
            .iter()
            .map(|a| [a.location, a.mass])
            .collect();
        let densities = f
            .mu()
            .densities()
            .iter()
            .map(|d| {
                let (family, params) = family_name(d.family());
                DensitySpec {
                    family: family.to_string(),
                    scale: d.mass(),
                    params,
                }
            })
            .collect();
        Self {
            alpha: f.alpha(),
            beta: f.beta(),
            atoms,
            densities,
        }
    }
}

fn parse_family(d: &DensitySpec) -> Result<DensityFamily> {
    let param_f64 = |key: &str| -> Result<f64> {
        d.params
            .get(key)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| Error::Spec(format!("family '{}' needs numeric param '{key}'", d.family)))
    };
    match d.family.as_str() {
        "cauchy" => Ok(DensityFamily::Cauchy),
        "one_sided_quadratic" => Ok(DensityFamily::OneSidedQuadratic),
        "log_tail" => {
            let side = match d.params.get("side").and_then(|v| v.as_str()) {
                None | Some("both") => Side::Both,
                Some("positive") => Side::Positive,
                Some("negative") => Side::Negative,
                Some(other) => {
                    return Err(Error::Spec(format!("unknown log_tail side '{other}'")))
                }
            };
            Ok(DensityFamily::LogTail { side })
        }
        "gaussian" => Ok(DensityFamily::Gaussian),
        "compact_uniform" => Ok(DensityFamily::CompactUniform {
            a: param_f64("a")?,
            b: param_f64("b")?,
        }),
        other => Err(Error::Spec(format!("unknown density family '{other}'"))),
    }
}

fn family_name(f: &DensityFamily) -> (&'static str, BTreeMap<String, serde_json::Value>) {
    let mut params = BTreeMap::new();
    match f {
        DensityFamily::Cauchy => ("cauchy", params),
        DensityFamily::OneSidedQuadratic => ("one_sided_quadratic", params),
        DensityFamily::LogTail { side } => {
            let s = match side {
                Side::Both => "both",
                Side::Positive => "positive",
                Side::Negative => "negative",
            };
            params.insert("side".into(), serde_json::Value::String(s.into()));
            ("log_tail", params)
        }
        DensityFamily::Gaussian => ("gaussian", params),
        DensityFamily::CompactUniform { a, b } => {
            params.insert("a".into(), serde_json::json!(a));
            params.insert("b".into(), serde_json::json!(b));
            ("compact_uniform", params)
        }
    }
}
