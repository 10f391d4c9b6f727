//! Catalog entries and their validation.

use std::collections::HashSet;
use std::path::Path;

use membrane_iso::bounds::{BoundName, Status};
use membrane_iso::femlab::{DomainSpec, Mode};
use serde::{Deserialize, Deserializer, Serialize};

/// A catalog that cannot be run.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed catalog: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("entry `{id}`: {msg}")]
    Entry { id: String, msg: String },
    #[error("duplicate entry id `{0}`")]
    Duplicate(String),
}

/// One domain to verify.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    /// Descriptor string such as `ellipse:2,1`, or the tagged JSON object.
    #[serde(deserialize_with = "descriptor")]
    pub domain: DomainSpec,
    /// Defaults to the mode implied by the descriptor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Mesh sizes, strictly decreasing; the last is the reported level.
    pub h_levels: Vec<f64>,
    /// Defaults to every bound applicable in the entry's mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundName>>,
    /// `observed` demotes every check of the entry to a report-only row.
    #[serde(default = "asserted")]
    pub status: Status,
}

fn asserted() -> Status {
    Status::Asserted
}

fn descriptor<'de, D: Deserializer<'de>>(d: D) -> Result<DomainSpec, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Spec(DomainSpec),
    }
    let spec = match Raw::deserialize(d)? {
        Raw::Text(s) => return s.parse().map_err(serde::de::Error::custom),
        Raw::Spec(spec) => spec,
    };
    spec.validate().map_err(serde::de::Error::custom)?;
    Ok(spec)
}

const EUCLIDEAN_BOUNDS: [BoundName; 8] = [
    BoundName::Weinberger13,
    BoundName::Szego12,
    BoundName::TwoSum14,
    BoundName::AbSum17,
    BoundName::Thm110,
    BoundName::Conj18,
    BoundName::Deficit21,
    BoundName::Gap15,
];

const HYPERBOLIC_BOUNDS: [BoundName; 2] = [BoundName::Thm112, BoundName::ConjII19];

impl CatalogEntry {
    pub fn new(id: &str, domain: &str, h_levels: &[f64]) -> Self {
        Self {
            id: id.to_string(),
            domain: domain.parse().expect("built-in descriptor"),
            mode: None,
            h_levels: h_levels.to_vec(),
            bounds: None,
            status: Status::Asserted,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or_else(|| self.domain.mode())
    }

    pub fn bounds(&self) -> Vec<BoundName> {
        match &self.bounds {
            Some(b) => b.clone(),
            None if self.mode() == Mode::Hyperbolic => HYPERBOLIC_BOUNDS.to_vec(),
            None => EUCLIDEAN_BOUNDS.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| {
            Err(ConfigError::Entry {
                id: self.id.clone(),
                msg,
            })
        };
        if self.id.trim().is_empty() {
            return fail("id must not be empty".into());
        }
        if self.mode() != self.domain.mode() {
            return fail(format!(
                "mode {} does not match a {} descriptor",
                self.mode(),
                self.domain.kind()
            ));
        }
        if self.h_levels.is_empty() {
            return fail("needs at least one h-level".into());
        }
        if self.h_levels.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return fail("h-levels must be positive".into());
        }
        if self.h_levels.windows(2).any(|w| w[1] >= w[0]) {
            return fail("h-levels must be strictly decreasing".into());
        }
        let hyperbolic = self.mode() == Mode::Hyperbolic;
        if let Some(b) = self.bounds().iter().find(|b| b.is_hyperbolic() != hyperbolic) {
            return fail(format!("bound {b} does not apply in {} mode", self.mode()));
        }
        Ok(())
    }
}

/// Parses and validates a JSON list of entries.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, ConfigError> {
    let entries: Vec<CatalogEntry> = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for e in &entries {
        e.validate()?;
        if !seen.insert(e.id.as_str()) {
            return Err(ConfigError::Duplicate(e.id.clone()));
        }
    }
    Ok(entries)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

/// Mesh sizes of the default catalog.
pub const DEFAULT_H: [f64; 3] = [0.08, 0.04, 0.02];

/// Euclidean shapes of comparable area plus geodesic disks and a geodesic
/// triangle in the Poincaré disk.
pub fn default_catalog() -> Vec<CatalogEntry> {
    let h = &DEFAULT_H;
    let triangle = {
        let v: Vec<String> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|deg| {
                let a = deg.to_radians();
                format!("{},{}", 0.6 * a.cos(), 0.6 * a.sin())
            })
            .collect();
        format!("hyperbolic_polygon:{}", v.join(";"))
    };
    vec![
        CatalogEntry::new("annulus", "annulus:0.4,1", h),
        CatalogEntry::new("disk", "disk:1", h),
        CatalogEntry::new("ellipse_1.5", "ellipse:1.2,0.8", h),
        CatalogEntry::new("ellipse_2", "ellipse:1.4,0.7", h),
        CatalogEntry::new("hyperbolic_disk_0.5", "hyperbolic_disk:0.5", h),
        CatalogEntry::new("hyperbolic_disk_1", "hyperbolic_disk:1", h),
        CatalogEntry::new("hyperbolic_disk_2", "hyperbolic_disk:2", h),
        CatalogEntry::new("hyperbolic_triangle", &triangle, h),
        CatalogEntry::new("l_shape", "polygon:0,0;1.6,0;1.6,0.8;0.8,0.8;0.8,1.6;0,1.6", h),
        CatalogEntry::new("rectangle_1", "rectangle:1.6,1.6", h),
        CatalogEntry::new("rectangle_2", "rectangle:2.4,1.2", h),
        CatalogEntry::new("rectangle_4", "rectangle:3.2,0.8", h),
        CatalogEntry::new("stadium", "stadium:1,0.7", h),
    ]
}
