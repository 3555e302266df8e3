use serde::{Deserialize, Serialize};

use super::constants::Domain;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryTag, Mesh};
use crate::materials::MaterialModel;

/// Spatial Lebesgue norms of the problem data. Space-time norms follow as
/// `T^{1/q}` times these because all data are time independent.
pub trait DataNorms {
    fn domain(&self) -> Domain;
    /// ‖g‖_{q,Γ}
    fn surface_current(&self, q: f64) -> f64;
    /// ‖γᵢ‖_{q,Γ}
    fn species_source(&self, i: usize, q: f64) -> f64;
    /// ‖cᵢ⁰‖_{q,Ω}
    fn initial_concentration(&self, i: usize, q: f64) -> f64;
    /// ‖θ⁰‖_{q,Ω}
    fn initial_temperature(&self, q: f64) -> f64;
    /// ‖γ_w‖_{q,Γ_w}
    fn wall_source(&self, q: f64) -> f64;
    /// ‖γ_e‖_{q,Γ} with γ_e = h_C^# |θ_e|
    fn electrode_source(&self, q: f64) -> f64;
}

/// `‖·‖_{q, S×(0,T)}` of time-independent data.
pub fn time_norm(spatial: f64, q: f64, t: f64) -> f64 {
    t.powf(1.0 / q) * spatial
}

fn uniform_norm(value: f64, measure: f64, q: f64) -> f64 {
    value.abs() * measure.powf(1.0 / q)
}

/// Electrode flux envelope γᵢ in the units of the species equation.
pub fn species_envelope(model: &MaterialModel, i: usize) -> f64 {
    let s = &model.species[i];
    s.source_envelope() / (model.constants.faraday * f64::from(s.valence.abs().max(1)))
}

pub fn electrode_temperature_envelope(model: &MaterialModel) -> f64 {
    model.bounds.cooling_max * model.anode_temperature.abs().max(model.cathode_temperature.abs())
}

/// Data norms for constant-valued data on a domain given by its measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformData {
    pub domain: Domain,
    /// |g| on Γ
    pub current: f64,
    pub species_sources: Vec<f64>,
    pub initial_concentrations: Vec<f64>,
    pub initial_temperature: f64,
    pub wall_source: f64,
    pub electrode_source: f64,
}

impl UniformData {
    /// Envelopes of the model's data, with laws sampled at the origin.
    pub fn from_model(model: &MaterialModel, domain: Domain) -> Self {
        let o = [0.0, 0.0];
        let current = model
            .surface_current
            .anode
            .eval(o, model.anode_temperature)
            .abs()
            .max(model.surface_current.cathode.eval(o, model.cathode_temperature).abs());
        let theta0 = model.initial_temperature.eval(o, 0.0);
        Self {
            domain,
            current,
            species_sources: (0..model.species.len()).map(|i| species_envelope(model, i)).collect(),
            initial_concentrations: model.species.iter().map(|s| s.initial.eval(o, theta0)).collect(),
            initial_temperature: theta0,
            wall_source: model.bounds.wall_source_max,
            electrode_source: electrode_temperature_envelope(model),
        }
    }
}

impl DataNorms for UniformData {
    fn domain(&self) -> Domain {
        self.domain
    }
    fn surface_current(&self, q: f64) -> f64 {
        uniform_norm(self.current, self.domain.electrode_area, q)
    }
    fn species_source(&self, i: usize, q: f64) -> f64 {
        uniform_norm(self.species_sources[i], self.domain.electrode_area, q)
    }
    fn initial_concentration(&self, i: usize, q: f64) -> f64 {
        uniform_norm(self.initial_concentrations[i], self.domain.volume, q)
    }
    fn initial_temperature(&self, q: f64) -> f64 {
        uniform_norm(self.initial_temperature, self.domain.volume, q)
    }
    fn wall_source(&self, q: f64) -> f64 {
        uniform_norm(self.wall_source, self.domain.wall_area, q)
    }
    fn electrode_source(&self, q: f64) -> f64 {
        uniform_norm(self.electrode_source, self.domain.electrode_area, q)
    }
}

/// Data norms by lumped quadrature of the model's laws on a mesh.
pub struct MeshData<'a> {
    mesh: &'a Mesh,
    model: &'a MaterialModel,
    theta0: Vec<f64>,
    electrode: Vec<(usize, f64)>,
    wall: Vec<(usize, f64)>,
}

impl<'a> MeshData<'a> {
    pub fn new(mesh: &'a Mesh, model: &'a MaterialModel) -> Self {
        let theta0 = mesh.nodes().iter().map(|x| model.initial_temperature.eval(*x, 0.0)).collect();
        let mut electrode = mesh.boundary_weights(BoundaryTag::Anode);
        electrode.extend(mesh.boundary_weights(BoundaryTag::Cathode));
        Self {
            mesh,
            model,
            theta0,
            electrode,
            wall: mesh.boundary_weights(BoundaryTag::Wall),
        }
    }

    fn volume_norm(&self, q: f64, f: impl Fn(usize) -> f64) -> f64 {
        let s: f64 = self
            .mesh
            .lumped_mass()
            .iter()
            .enumerate()
            .map(|(k, w)| w * f(k).abs().powf(q))
            .sum();
        s.powf(1.0 / q)
    }

    fn surface_norm(weights: &[(usize, f64)], q: f64, f: impl Fn(usize) -> f64) -> f64 {
        let s: f64 = weights.iter().map(|&(k, w)| w * f(k).abs().powf(q)).sum();
        s.powf(1.0 / q)
    }
}

impl DataNorms for MeshData<'_> {
    fn domain(&self) -> Domain {
        Domain {
            volume: self.mesh.measure(),
            electrode_area: self.electrode.iter().map(|(_, w)| w).sum(),
            wall_area: self.wall.iter().map(|(_, w)| w).sum(),
        }
    }

    fn surface_current(&self, q: f64) -> f64 {
        let nodes = self.mesh.nodes();
        Self::surface_norm(&self.electrode, q, |k| {
            let tag = self.mesh.node_tag(k).unwrap_or(BoundaryTag::Anode);
            self.model.surface_current.eval(tag, nodes[k])
        })
    }

    fn species_source(&self, i: usize, q: f64) -> f64 {
        let g = species_envelope(self.model, i);
        Self::surface_norm(&self.electrode, q, |_| g)
    }

    fn initial_concentration(&self, i: usize, q: f64) -> f64 {
        let law = &self.model.species[i].initial;
        let nodes = self.mesh.nodes();
        self.volume_norm(q, |k| law.eval(nodes[k], self.theta0[k]))
    }

    fn initial_temperature(&self, q: f64) -> f64 {
        self.volume_norm(q, |k| self.theta0[k])
    }

    fn wall_source(&self, q: f64) -> f64 {
        let nodes = self.mesh.nodes();
        Self::surface_norm(&self.wall, q, |k| self.model.radiation.source.eval(nodes[k], self.theta0[k]))
    }

    fn electrode_source(&self, q: f64) -> f64 {
        let g = electrode_temperature_envelope(self.model);
        Self::surface_norm(&self.electrode, q, |_| g)
    }
}

/// Per-species bounds entering the certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesNumbers {
    pub name: String,
    /// (Dᵢ)_#
    pub diffusion_min: f64,
    /// Sᵢ^#
    pub soret: f64,
    /// (Dᵢ')^#
    pub dufour: f64,
    /// tᵢ^#
    pub transference: f64,
    /// gᵢ^#
    pub growth: f64,
}

/// Model bounds entering the certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelNumbers {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub seebeck: f64,
    pub peltier: f64,
    /// k_#
    pub conductivity_min: f64,
    /// b_#
    pub radiation_min: f64,
    /// ℓ
    pub ell: f64,
    /// ρ c_p
    pub heat_capacity: f64,
    pub species: Vec<SpeciesNumbers>,
}

impl ModelNumbers {
    pub fn from_model(model: &MaterialModel) -> Result<Self> {
        let b = &model.bounds;
        let need = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::IncompleteModel(format!("{name} must be positive, got {v}")))
            }
        };
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::IncompleteModel(format!("{name} must be nonnegative, got {v}")))
            }
        };
        let ell = model.radiation.exponent;
        if !(ell >= 2.0) {
            return Err(Error::IncompleteModel(format!("radiation exponent ℓ = {ell} must be ≥ 2")));
        }
        let species = model
            .species
            .iter()
            .map(|s| {
                let sb = &s.bounds;
                Ok(SpeciesNumbers {
                    name: s.name.clone(),
                    diffusion_min: need(&format!("{}.diffusion_min", s.name), sb.diffusion_min)?,
                    soret: nonneg(&format!("{}.soret_max", s.name), sb.soret_max)?,
                    dufour: nonneg(&format!("{}.dufour_max", s.name), sb.dufour_max)?,
                    transference: nonneg(&format!("{}.transference_max", s.name), sb.transference_max)?,
                    growth: nonneg(&format!("{}.growth", s.name), sb.growth)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sigma_min: need("sigma_min", b.sigma_min)?,
            sigma_max: need("sigma_max", b.sigma_max)?,
            seebeck: nonneg("seebeck_max", b.seebeck_max)?,
            peltier: nonneg("peltier_max", b.peltier_max)?,
            conductivity_min: need("conductivity_min", b.conductivity_min)?,
            radiation_min: need("radiation_min", b.radiation_min)?,
            ell,
            heat_capacity: need("ρ c_p", model.constants.volumetric_heat_capacity())?,
            species,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_interval_mesh;
    use crate::materials::{nacl_model, NaclOptions};
    use approx::assert_relative_eq;

    #[test]
    fn uniform_norms_scale_with_measure() {
        let d = UniformData {
            domain: Domain {
                volume: 4.0,
                electrode_area: 9.0,
                wall_area: 16.0,
            },
            current: 2.0,
            species_sources: vec![1.0],
            initial_concentrations: vec![3.0],
            initial_temperature: 5.0,
            wall_source: 1.0,
            electrode_source: 0.5,
        };
        assert_relative_eq!(d.surface_current(2.0), 6.0);
        assert_relative_eq!(d.initial_temperature(2.0), 10.0);
        assert_relative_eq!(d.wall_source(2.0), 4.0);
        assert_relative_eq!(d.initial_concentration(0, 1.0), 12.0);
        assert_relative_eq!(time_norm(3.0, 2.0, 4.0), 6.0);
    }

    #[test]
    fn mesh_and_uniform_agree_for_constant_data() {
        let model = nacl_model(&NaclOptions::default());
        let mesh = build_interval_mesh(0.05, 20, BoundaryTag::Anode, BoundaryTag::Cathode).unwrap();
        let md = MeshData::new(&mesh, &model);
        let ud = UniformData::from_model(&model, md.domain());
        for q in [2.0, 2.5] {
            assert_relative_eq!(md.surface_current(q), ud.surface_current(q), max_relative = 1e-12);
            assert_relative_eq!(md.initial_temperature(q), ud.initial_temperature(q), max_relative = 1e-12);
            assert_relative_eq!(md.species_source(1, q), ud.species_source(1, q), max_relative = 1e-12);
            assert_relative_eq!(md.initial_concentration(0, q), ud.initial_concentration(0, q), max_relative = 1e-12);
        }
    }

    #[test]
    fn missing_bounds_are_reported() {
        let mut model = nacl_model(&NaclOptions::default());
        model.bounds.conductivity_min = 0.0;
        assert!(matches!(ModelNumbers::from_model(&model), Err(Error::IncompleteModel(_))));
    }
}
