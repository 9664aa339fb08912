//! JSON instance and certificate files.
//!
//! Elements are written as coordinate arrays (`[1, 1, 3, 2]`), pairings as
//! row-major arrays of arrays, groups as `{"orders": [2, 2, 4, 4]}`.

use std::fs;
use std::path::Path;

use fdual_core::{AbelianGroup, Certificate, CertificateKind, ElementSet, GroupSpec, PairingMatrix};
use serde::{Deserialize, Serialize};

use crate::FormatError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub orders: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeJson {
    Pair,
    SelfDual,
}

/// Input to `verify`, `nu`, `spectrum` and `primitive`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub group: GroupJson,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<Vec<i64>>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeJson>,
}

/// An instance after validation against its group.
#[derive(Clone, Debug)]
pub struct Instance {
    pub group: AbelianGroup,
    pub s: Option<ElementSet>,
    pub t: Option<ElementSet>,
    pub pairing: Option<PairingMatrix>,
    pub mode: Option<ModeJson>,
}

/// Parses `"2,2,4,4"`.
pub fn parse_group(text: &str) -> Result<GroupSpec, FormatError> {
    let orders = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| FormatError::Invalid(format!("bad group order {p:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupSpec::new(orders)?)
}

pub fn group_spec(json: &GroupJson) -> Result<GroupSpec, FormatError> {
    Ok(GroupSpec::new(json.orders.clone())?)
}

/// Elements as coordinate lists; duplicates are rejected.
pub fn element_set(spec: &GroupSpec, elements: &[Vec<i64>], name: &str) -> Result<ElementSet, FormatError> {
    let mut set = ElementSet::new();
    for coords in elements {
        let e = spec.element(coords).map_err(|e| FormatError::Invalid(format!("{name}: {e}")))?;
        if !set.insert(spec.elem_index(&e)) {
            return Err(FormatError::Invalid(format!("{name}: duplicate element {coords:?}")));
        }
    }
    Ok(set)
}

pub fn coords_of(group: &AbelianGroup, set: &ElementSet) -> Vec<Vec<u32>> {
    set.iter().map(|i| group.element(i).coords().to_vec()).collect()
}

pub fn format_coords(coords: &[u32]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<Instance, FormatError> {
        let spec = group_spec(&self.group)?;
        let s = self.s.as_deref().map(|v| element_set(&spec, v, "S")).transpose()?;
        let t = self.t.as_deref().map(|v| element_set(&spec, v, "T")).transpose()?;
        let pairing = self.pairing.as_deref().map(|rows| PairingMatrix::new(&spec, rows)).transpose()?;
        match (self.mode, &t) {
            (Some(ModeJson::Pair), None) => {
                return Err(FormatError::Invalid("mode \"pair\" needs a T".into()));
            }
            (Some(ModeJson::SelfDual), Some(_)) => {
                return Err(FormatError::Invalid("mode \"self_dual\" takes no T".into()));
            }
            _ => {}
        }
        Ok(Instance { group: AbelianGroup::new(spec), s, t, pairing, mode: self.mode })
    }
}

impl Instance {
    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = fs::read_to_string(path)?;
        InstanceFile::parse(&text)?.validate()
    }

    /// `S`, required nonempty.
    pub fn require_s(&self) -> Result<ElementSet, FormatError> {
        match self.s {
            Some(s) if !s.is_empty() => Ok(s),
            Some(_) => Err(FormatError::Invalid("S is empty".into())),
            None => Err(FormatError::Invalid("instance has no S".into())),
        }
    }
}

/// On-disk certificate; field order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub kind: ModeJson,
    pub group: GroupJson,
    pub pairing: Vec<Vec<u32>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<u32>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<u32>>,
    #[serde(rename = "size_S")]
    pub size_s: usize,
    #[serde(rename = "size_T")]
    pub size_t: usize,
    #[serde(rename = "nu_S")]
    pub nu_s: Vec<u32>,
    #[serde(rename = "nu_T")]
    pub nu_t: Vec<u32>,
    /// `|chi_t(S)|^2` for every `t`, element-index order.
    #[serde(rename = "spectrum_S")]
    pub spectrum_s: Vec<i64>,
    /// `|g(T)|^2` for every `g`.
    #[serde(rename = "spectrum_T")]
    pub spectrum_t: Vec<i64>,
    #[serde(rename = "primitive_S")]
    pub primitive_s: bool,
    #[serde(rename = "primitive_T")]
    pub primitive_t: bool,
    pub pairing_search_partial: bool,
    pub version: String,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let group = AbelianGroup::new(cert.group.clone());
        CertificateFile {
            kind: match cert.kind {
                CertificateKind::Pair => ModeJson::Pair,
                CertificateKind::SelfDual => ModeJson::SelfDual,
            },
            group: GroupJson { orders: cert.group.orders().to_vec() },
            pairing: cert.pairing.rows(),
            s: coords_of(&group, &cert.s),
            t: coords_of(&group, &cert.t),
            size_s: cert.s.len(),
            size_t: cert.t.len(),
            nu_s: cert.nu_s.clone(),
            nu_t: cert.nu_t.clone(),
            spectrum_s: cert.spectrum_s.clone(),
            spectrum_t: cert.spectrum_t.clone(),
            primitive_s: cert.primitive_s,
            primitive_t: cert.primitive_t,
            pairing_search_partial: cert.pairing_search_partial,
            version: cert.version.clone(),
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate, FormatError> {
        let spec = group_spec(&self.group)?;
        let widen = |rows: &[Vec<u32>]| -> Vec<Vec<i64>> {
            rows.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect()
        };
        let s = element_set(&spec, &widen(&self.s), "S")?;
        let t = element_set(&spec, &widen(&self.t), "T")?;
        if s.len() != self.size_s || t.len() != self.size_t {
            return Err(FormatError::Invalid("recorded set sizes do not match the listed sets".into()));
        }
        let pairing = PairingMatrix::new(&spec, &widen(&self.pairing))?;
        Ok(Certificate {
            kind: match self.kind {
                ModeJson::Pair => CertificateKind::Pair,
                ModeJson::SelfDual => CertificateKind::SelfDual,
            },
            group: spec,
            pairing,
            s,
            t,
            nu_s: self.nu_s.clone(),
            nu_t: self.nu_t.clone(),
            spectrum_s: self.spectrum_s.clone(),
            spectrum_t: self.spectrum_t.clone(),
            primitive_s: self.primitive_s,
            primitive_t: self.primitive_t,
            pairing_search_partial: self.pairing_search_partial,
            version: self.version.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// What a JSON document passed to `verify` turned out to be.
pub enum Document {
    Instance(Instance),
    Certificate(CertificateFile),
}

/// Certificates are recognised by their `version` field.
pub fn load_document(path: &Path) -> Result<Document, FormatError> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("version").is_some() {
        Ok(Document::Certificate(serde_json::from_value(value)?))
    } else {
        Ok(Document::Instance(serde_json::from_value::<InstanceFile>(value)?.validate()?))
    }
}
