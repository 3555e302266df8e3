//! JSON cell configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::certificate::{DataNorms, Domain, EmbeddingConstants, MeshData, UniformData};
use crate::coupler::{PicardSettings, RunSettings, SolveOptions};
use crate::error::{Error, Result};
use crate::geometry::{build_interval_mesh, build_rectangle_mesh, BoundaryTag, Mesh, SideTags};
use crate::materials::{nacl_model, MaterialModel, NaclOptions, COMPATIBILITY_TOLERANCE};
use crate::potential::PotentialOptions;

pub const SCHEMA_VERSION: u32 = 1;
pub const NACL_PRESET: &str = "nacl-downs";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub schema_version: u32,
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    pub solver: SolverConfig,
    #[serde(default)]
    pub certificate: CertificateConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// 1 or 2
    pub dimension: u8,
    /// Interval length, or `[width, height]`, in m.
    pub size: Vec<f64>,
    /// Cell counts per direction.
    pub resolution: Vec<usize>,
    #[serde(default)]
    pub tags: TagConfig,
}

/// Boundary part of each side; in 1-D only `left` and `right` are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TagConfig {
    pub left: BoundaryTag,
    pub right: BoundaryTag,
    pub bottom: BoundaryTag,
    pub top: BoundaryTag,
}

impl Default for TagConfig {
    fn default() -> Self {
        Self {
            left: BoundaryTag::Anode,
            right: BoundaryTag::Cathode,
            bottom: BoundaryTag::Wall,
            top: BoundaryTag::Wall,
        }
    }
}

/// Either a named preset with option overrides or an explicit model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub options: NaclOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<MaterialModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub picard: PicardSettings,
    #[serde(default = "default_linear_tol")]
    pub linear_tol: f64,
    #[serde(default = "default_compat_tol")]
    pub compat_tol: f64,
    /// Overrides the Butler–Volmer argument cap of every reaction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    /// Exponent of the monitored gradient norms.
    #[serde(default = "default_p")]
    pub norm_exponent: f64,
}

fn default_linear_tol() -> f64 {
    1e-12
}
fn default_compat_tol() -> f64 {
    COMPATIBILITY_TOLERANCE
}
fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    #[serde(default)]
    pub constants: EmbeddingConstants,
    #[serde(default)]
    pub symbolic: bool,
    /// Analytic domain measures; data norms come from the mesh when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Write a VTK snapshot every this many steps; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("output"),
            snapshot_every: 0,
        }
    }
}

fn config_error(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

impl CellConfig {
    /// 1-D NaCl preset: 5 cm gap, anode left, cathode right.
    pub fn nacl_default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            geometry: GeometryConfig {
                dimension: 1,
                size: vec![0.05],
                resolution: vec![40],
                tags: TagConfig::default(),
            },
            material: MaterialConfig {
                preset: Some(NACL_PRESET.into()),
                options: NaclOptions::default(),
                model: None,
            },
            solver: SolverConfig {
                dt: 1.0,
                t_final: 60.0,
                picard: PicardSettings::default(),
                linear_tol: default_linear_tol(),
                compat_tol: default_compat_tol(),
                cap: None,
                norm_exponent: default_p(),
            },
            certificate: CertificateConfig {
                constants: EmbeddingConstants::default(),
                symbolic: false,
                domain: Some(crate::certificate::regression::NACL_DOMAIN),
            },
            output: OutputConfig::default(),
        }
    }

    /// Parses JSON; errors carry the offending key path, e.g. `solver.dt`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let mut path = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.to_string();
            if let Some(field) = message.strip_prefix("missing field `").and_then(|r| r.split('`').next()) {
                path = if path == "." { field.to_string() } else { format!("{path}.{field}") };
            }
            config_error(&path, message)
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_error(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, got {}", self.schema_version),
            ));
        }
        let g = &self.geometry;
        let dim = usize::from(g.dimension);
        if !(1..=2).contains(&dim) {
            return Err(config_error("geometry.dimension", "must be 1 or 2"));
        }
        if g.size.len() != dim {
            return Err(config_error("geometry.size", format!("expected {dim} entries")));
        }
        if g.resolution.len() != dim {
            return Err(config_error("geometry.resolution", format!("expected {dim} entries")));
        }
        match (&self.material.preset, &self.material.model) {
            (Some(name), None) if name == NACL_PRESET => {}
            (Some(name), None) => return Err(config_error("material.preset", format!("unknown preset `{name}`"))),
            (None, Some(_)) => {}
            _ => return Err(config_error("material", "give exactly one of `preset` and `model`")),
        }
        let s = &self.solver;
        if !(s.dt > 0.0 && s.dt.is_finite()) {
            return Err(config_error("solver.dt", "must be positive"));
        }
        if !(s.t_final >= 0.0 && s.t_final.is_finite()) {
            return Err(config_error("solver.t_final", "must be nonnegative"));
        }
        if !(s.linear_tol > 0.0) {
            return Err(config_error("solver.linear_tol", "must be positive"));
        }
        if !(s.norm_exponent >= 1.0) {
            return Err(config_error("solver.norm_exponent", "must be ≥ 1"));
        }
        if let Some(cap) = s.cap {
            if !(cap > 0.0) {
                return Err(config_error("solver.cap", "must be positive"));
            }
        }
        s.picard
            .validate()
            .map_err(|e| config_error("solver.picard", e.to_string()))?;
        self.certificate
            .constants
            .validate()
            .map_err(|e| config_error("certificate.constants", e.to_string()))?;
        Ok(())
    }

    pub fn build_mesh(&self) -> Result<Mesh> {
        let g = &self.geometry;
        let t = g.tags;
        if g.dimension == 1 {
            build_interval_mesh(g.size[0], g.resolution[0], t.left, t.right)
        } else {
            build_rectangle_mesh(
                g.size[0],
                g.size[1],
                g.resolution[0],
                g.resolution[1],
                SideTags::new(t.left, t.right, t.bottom, t.top),
            )
        }
    }

    pub fn build_model(&self) -> Result<MaterialModel> {
        let mut model = match &self.material.model {
            Some(m) => m.clone(),
            None => nacl_model(&self.material.options),
        };
        if let Some(cap) = self.solver.cap {
            for s in &mut model.species {
                for r in &mut s.reactions {
                    r.kinetics.cap = cap;
                }
            }
        }
        Ok(model)
    }

    pub fn run_settings(&self) -> RunSettings {
        RunSettings {
            picard: self.solver.picard,
            solve: SolveOptions {
                potential: PotentialOptions {
                    linear_tol: self.solver.linear_tol,
                    compat_tol: self.solver.compat_tol,
                },
                linear_tol: self.solver.linear_tol,
            },
            p: self.solver.norm_exponent,
            snapshot_every: self.output.snapshot_every.max(1),
        }
    }

    /// Data norms for the certificate: analytic when a domain is given,
    /// otherwise by quadrature on `mesh`.
    pub fn data_norms<'a>(&self, mesh: &'a Mesh, model: &'a MaterialModel) -> Box<dyn DataNorms + 'a> {
        match self.certificate.domain {
            Some(d) => Box::new(UniformData::from_model(model, d)),
            None => Box::new(MeshData::new(mesh, model)),
        }
    }

    pub fn is_nacl_preset(&self) -> bool {
        self.material.preset.as_deref() == Some(NACL_PRESET)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let c = CellConfig::nacl_default();
        let text = c.to_json().unwrap();
        let back = CellConfig::from_json_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn missing_dt_names_the_key() {
        let mut v: serde_json::Value = serde_json::from_str(&CellConfig::nacl_default().to_json().unwrap()).unwrap();
        v["solver"].as_object_mut().unwrap().remove("dt");
        let err = CellConfig::from_json_str(&v.to_string()).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "solver.dt"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&CellConfig::nacl_default().to_json().unwrap()).unwrap();
        v["solver"]["dtt"] = 1.0.into();
        let err = CellConfig::from_json_str(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path.starts_with("solver")), "{err}");
    }

    #[test]
    fn explicit_model_and_cap_override() {
        let mut c = CellConfig::nacl_default();
        c.material.model = Some(nacl_model(&NaclOptions::default()));
        assert!(c.validate().is_err());
        c.material.preset = None;
        c.solver.cap = Some(5.0);
        c.validate().unwrap();
        let m = c.build_model().unwrap();
        assert!(m.species.iter().all(|s| s.reactions.iter().all(|r| r.kinetics.cap == 5.0)));
        let text = c.to_json().unwrap();
        assert_eq!(CellConfig::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn two_dimensional_mesh() {
        let mut c = CellConfig::nacl_default();
        c.geometry = GeometryConfig {
            dimension: 2,
            size: vec![0.05, 0.02],
            resolution: vec![10, 4],
            tags: TagConfig::default(),
        };
        let mesh = c.build_mesh().unwrap();
        assert_eq!(mesh.node_count(), 55);
        c.geometry.resolution = vec![10];
        assert!(c.validate().is_err());
    }
}
