//! Explicit existence certificate: the constants of the fixed-point argument,
//! its smallness conditions and the radii of the invariant set.

pub mod apriori;
pub mod constants;
pub mod data;
pub mod formulas;
pub mod poly;
pub mod regression;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use apriori::{a_priori_bounds, h_functional, AprioriBounds, AuxiliaryTemperature, ParabolicNorms};
pub use constants::{Domain, EmbeddingConstants, Symbols};
pub use data::{DataNorms, MeshData, ModelNumbers, SpeciesNumbers, UniformData};
pub use formulas::{
    elliptic_constants, radiation_factor, species_constants, thermal_constants, z_factor, EllipticConstants,
    SpeciesConstants, ThermalConstants,
};
pub use poly::{Poly, Scalar, Symbol};
pub use regression::{nacl_regression, RegressionRow, RegressionTable};

use crate::error::Result;
use crate::materials::MaterialModel;
use data::time_norm;

pub const THERMAL_CONDITION: &str = "ℬ₀ < 1";
pub const FIRST_SPECIES_CONDITION: &str = "ℬ₁(D₁')# < 1";

fn subscript(i: usize) -> String {
    i.to_string().chars().map(|d| char::from_u32(0x2080 + d.to_digit(10).unwrap_or(0)).unwrap_or(d)).collect()
}

fn recurrence_label(i: usize) -> String {
    let k = subscript(i);
    format!("ℬ{k}(D{k}')#(1 − Σ_{{j<{k}}} ℬⱼ/𝒫ⱼ') < 1")
}

/// One strict inequality with its value and margin `1 − value`.
/// `value` is `None` when an earlier condition failed and it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    pub value: Option<f64>,
    pub margin: Option<f64>,
    pub holds: bool,
}

impl Condition {
    fn new(label: String, value: Option<f64>) -> Self {
        let margin = value.map(|v| 1.0 - v);
        Self {
            label,
            value,
            margin,
            holds: margin.is_some_and(|m| m > 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesReport {
    pub name: String,
    pub g_cal: f64,
    pub x: f64,
    pub y: f64,
    pub q_cal: f64,
    pub q_sharp: f64,
    pub a0: f64,
    pub a: f64,
    /// ℬᵢ; undefined when ℬ₀ ≥ 1.
    pub b: Option<f64>,
    pub dufour: f64,
    /// 𝒫ᵢ'
    pub slope: Option<f64>,
    /// Non-radius addends of the species estimate.
    pub data_constant: f64,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResiduals {
    /// |𝒫(R)| / 𝒫(0)
    pub thermal: f64,
    /// |𝒫ᵢ(Rᵢ)| / 𝒫ᵢ(0)
    pub species: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub embedding: EmbeddingConstants,
    pub domain: Domain,
    pub a_sharp: f64,
    pub b_sharp: f64,
    pub b0: f64,
    pub b: f64,
    pub species: Vec<SpeciesReport>,
    pub conditions: Vec<Condition>,
    pub certified: bool,
    /// Label of the first failing condition.
    pub reason: Option<String>,
    /// 1 − ℬ₀
    pub margin: f64,
    /// Smallest margin over the defined conditions.
    pub min_margin: f64,
    /// Non-radius addends of the temperature estimate.
    pub thermal_data_constant: f64,
    pub radius: Option<f64>,
    pub residuals: Option<RadiusResiduals>,
    /// Whether (R, Rᵢ) also satisfy the coupled self-map inequalities.
    pub self_map: Option<bool>,
    /// 𝓗(k_#, b_#, p) for the temperature data.
    pub h: f64,
    /// 𝓗₀(0, 0)
    pub h0: f64,
    pub h_sharp: f64,
}

/// Slopes `𝒫ᵢ'` of the recurrence: `s₁ = 1 − ℬ₁D₁'`,
/// `sᵢ = 1 − ℬᵢDᵢ'(1 − Σ_{j<i} ℬⱼ/sⱼ)`. Stops after the first nonpositive one.
pub fn recurrence_slopes(b: &[f64], dufour: &[f64]) -> Vec<f64> {
    let mut slopes = Vec::with_capacity(b.len());
    let mut acc = 0.0;
    for (bi, di) in b.iter().zip(dufour) {
        let s = 1.0 - bi * di * (1.0 - acc);
        slopes.push(s);
        if !(s > 0.0) {
            break;
        }
        acc += bi / s;
    }
    slopes
}

/// Evaluates every constant and smallness condition for `model`.
pub fn check_smallness(model: &MaterialModel, ec: &EmbeddingConstants, data: &dyn DataNorms) -> Result<CertificateReport> {
    ec.validate()?;
    let m = ModelNumbers::from_model(model)?;
    Ok(check_numbers(&m, ec, data))
}

/// Same as [`check_smallness`] starting from already extracted bounds.
pub fn check_numbers(m: &ModelNumbers, ec: &EmbeddingConstants, data: &dyn DataNorms) -> CertificateReport {
    let domain = data.domain();
    let (p, t) = (ec.p, ec.t);
    let s = Symbols::numeric(ec, m.ell, domain.volume);
    let ell = elliptic_constants(m, ec, &s, data);
    let th = thermal_constants(m, &s, &ell);
    let species: Vec<SpeciesConstants<f64>> =
        (0..m.species.len()).map(|i| species_constants(m, i, ec, &s, &ell, data)).collect();
    let aux = AuxiliaryTemperature::new(m, ec, data);

    let g2 = data.surface_current(2.0);
    let kg = s.th * ec.elliptic_trace * g2;
    let vol_pq = EmbeddingConstants::power(domain.volume, 1.0 - 1.0 / p);
    let pp = p / (p - 1.0);
    let growth = ec.growth();

    let data_constants: Vec<f64> = species
        .iter()
        .zip(&m.species)
        .enumerate()
        .map(|(i, (sc, sp))| {
            let d = sp.diffusion_min;
            let ts = sp.transference * m.sigma_max;
            let gamma_dual = time_norm(data.species_source(i, pp), pp, t);
            s.v * (data.initial_concentration(i, p)
                + sc.q_sharp * gamma_dual
                + (((p - 1.0) / d).sqrt() * ts + sp.growth * ec.k_trp * vol_pq * ec.poincare_p) * ell.b_sharp)
                + s.c / d
                    * ((d * growth).sqrt() * data.initial_concentration(i, 2.0)
                        + sc.g_cal
                        + sc.y * ell.b_sharp
                        + sc.x / m.sigma_min * kg)
        })
        .collect();

    let (k, b, rc, l) = (m.conductivity_min, m.radiation_min, m.heat_capacity, m.ell);
    let lp = l / (l - 1.0);
    let gw = time_norm(data.wall_source(lp), lp, t);
    let ge = time_norm(data.electrode_source(2.0), 2.0, t);
    let theta2 = data.initial_temperature(2.0);
    let n = f64::from(ec.n);
    let energy = rc * theta2 * theta2
        + 2.0 * (l - 1.0) / (l * b.powf(1.0 / (l - 1.0))) * gw.powf(lp)
        + (2.0 / k + 1.0 / rc) * ec.k_tr2 * ec.k_tr2 * domain.volume.powf(1.0 / n) * ge * ge;
    let pisig = m.peltier * m.sigma_max;
    let thermal_data_constant = (growth / b).powf(1.0 / l)
        * (energy.powf(1.0 / l) + pisig / (k.powf(1.0 / l) * m.sigma_min) * s.tq * ec.elliptic_trace * g2)
        + s.c / k
            * ((rc * k * growth).sqrt() * theta2
                + aux.h_sharp
                + pisig * z_factor(kg / m.sigma_min, k / rc, ell.b_sharp, t));

    let mut conditions = vec![Condition::new(THERMAL_CONDITION.into(), Some(th.b0))];
    let thermal_ok = th.b0 < 1.0;
    let b_i: Vec<Option<f64>> = species
        .iter()
        .map(|sc| thermal_ok.then(|| sc.a0 * th.b / (1.0 - th.b0) + sc.a))
        .collect();
    let dufour: Vec<f64> = m.species.iter().map(|sp| sp.dufour).collect();
    let slopes: Vec<Option<f64>> = if thermal_ok {
        let bs: Vec<f64> = b_i.iter().map(|x| x.unwrap_or(f64::NAN)).collect();
        let sl = recurrence_slopes(&bs, &dufour);
        (0..species.len()).map(|i| sl.get(i).copied()).collect()
    } else {
        vec![None; species.len()]
    };
    for (i, sl) in slopes.iter().enumerate() {
        let label = if i == 0 {
            FIRST_SPECIES_CONDITION.to_string()
        } else {
            recurrence_label(i + 1)
        };
        conditions.push(Condition::new(label, sl.map(|s| 1.0 - s)));
    }
    let certified = conditions.iter().all(|c| c.holds);
    let reason = conditions.iter().find(|c| !c.holds).map(|c| c.label.clone());
    let min_margin = conditions.iter().filter_map(|c| c.margin).fold(f64::INFINITY, f64::min);

    let (radius, radii, residuals, self_map) = if certified {
        let hat: Vec<f64> = species
            .iter()
            .zip(&data_constants)
            .map(|(sc, c)| c + sc.a0 * thermal_data_constant / (1.0 - th.b0))
            .collect();
        let radii: Vec<f64> = hat.iter().zip(&slopes).map(|(c, s)| c / s.unwrap_or(1.0)).collect();
        let coupled: f64 = dufour.iter().zip(&radii).map(|(d, r)| d * r).sum();
        let p0 = thermal_data_constant + th.b * coupled;
        let r = p0 / (1.0 - th.b0);
        let rel = |v: f64, scale: f64| if scale > 0.0 { v.abs() / scale } else { v.abs() };
        let res = RadiusResiduals {
            thermal: rel((1.0 - th.b0) * r - p0, p0),
            species: hat
                .iter()
                .zip(&slopes)
                .zip(&radii)
                .map(|((c, s), ri)| rel(s.unwrap_or(1.0) * ri - c, *c))
                .collect(),
        };
        let self_map = hat
            .iter()
            .zip(&b_i)
            .zip(&radii)
            .all(|((c, bi), ri)| *ri * (1.0 + 1e-12) >= c + bi.unwrap_or(0.0) * coupled);
        (Some(r), Some(radii), Some(res), Some(self_map))
    } else {
        (None, None, None, None)
    };

    let species_reports = species
        .iter()
        .enumerate()
        .map(|(i, sc)| SpeciesReport {
            name: m.species[i].name.clone(),
            g_cal: sc.g_cal,
            x: sc.x,
            y: sc.y,
            q_cal: sc.q_cal,
            q_sharp: sc.q_sharp,
            a0: sc.a0,
            a: sc.a,
            b: b_i[i],
            dufour: dufour[i],
            slope: slopes[i],
            data_constant: data_constants[i],
            radius: radii.as_ref().map(|r| r[i]),
        })
        .collect();

    let thermal_norms = |q: f64| {
        let qd = q / (q - 1.0);
        let we = (l + q - 2.0) / (l - 1.0);
        ParabolicNorms {
            initial: data.initial_temperature(q),
            drive: 0.0,
            flux: time_norm(data.electrode_source(q), q, t) / rc,
            flux_dual: time_norm(data.electrode_source(qd), qd, t) / rc,
            wall: time_norm(data.wall_source(q), q, t) / rc,
            wall_dual: time_norm(data.wall_source(qd), qd, t) / rc,
            wall_integral: time_norm(data.wall_source(we), we, t).powf(we) / rc.powf(we),
        }
    };
    let h = h_functional(k / rc, b / rc, l, p, ec, domain.volume, &thermal_norms(p));

    CertificateReport {
        embedding: ec.clone(),
        domain,
        a_sharp: ell.a_sharp,
        b_sharp: ell.b_sharp,
        b0: th.b0,
        b: th.b,
        species: species_reports,
        conditions,
        certified,
        reason,
        margin: 1.0 - th.b0,
        min_margin,
        thermal_data_constant,
        radius,
        residuals,
        self_map,
        h,
        h0: aux.h0(0.0, &vec![0.0; m.species.len()]),
        h_sharp: aux.h_sharp,
    }
}

impl CertificateReport {
    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6e}"));
        let _ = writeln!(out, "A# = {:.6e}   B# = {:.6e}", self.a_sharp, self.b_sharp);
        let _ = writeln!(out, "ℬ₀ = {:.6e}   ℬ = {:.6e}", self.b0, self.b);
        let _ = writeln!(out, "𝓗 = {:.6e}   𝓗₀(0,0) = {:.6e}   𝓗# = {:.6e}", self.h, self.h0, self.h_sharp);
        for s in &self.species {
            let _ = writeln!(
                out,
                "{:>6}: 𝒜⁰ = {:.6e}  𝒜 = {:.6e}  ℬᵢ = {}  (D')# = {:.4e}  slope = {}",
                s.name,
                s.a0,
                s.a,
                opt(s.b),
                s.dufour,
                opt(s.slope)
            );
        }
        let _ = writeln!(out, "conditions:");
        for c in &self.conditions {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  [{mark}] {:<40} value = {:<14} margin = {}", c.label, opt(c.value), opt(c.margin));
        }
        match (self.radius, &self.residuals) {
            (Some(r), Some(res)) => {
                let radii: Vec<String> = self.species.iter().map(|s| opt(s.radius)).collect();
                let _ = writeln!(out, "radii: R = {r:.6e}, Rᵢ = [{}]", radii.join(", "));
                let _ = writeln!(
                    out,
                    "residuals: 𝒫(R) {:.2e}, 𝒫ᵢ(Rᵢ) {:?}; self-map {}",
                    res.thermal,
                    res.species,
                    self.self_map.unwrap_or(false)
                );
            }
            _ => {
                let _ = writeln!(out, "radii: not defined");
            }
        }
        let _ = writeln!(
            out,
            "certified = {}{}",
            self.certified,
            self.reason.as_ref().map(|r| format!(" (fails {r})")).unwrap_or_default()
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{nacl_model, NaclOptions};
    use approx::assert_relative_eq;

    fn preset_domain() -> Domain {
        Domain {
            volume: 1.5e-3,
            electrode_area: 0.0338,
            wall_area: 0.0676,
        }
    }

    fn decoupled() -> MaterialModel {
        let mut model = nacl_model(&NaclOptions::default());
        model.bounds.peltier_max = 0.0;
        model.bounds.seebeck_max = 0.0;
        for s in &mut model.species {
            s.bounds.soret_max = 0.0;
            s.bounds.dufour_max = 0.0;
            s.bounds.growth = 0.0;
            s.bounds.transference_max = 0.0;
        }
        model
    }

    #[test]
    fn slopes_stop_at_first_failure() {
        let s = recurrence_slopes(&[2.0, 1.0, 1.0], &[1.0, 1.0, 1.0]);
        assert_eq!(s, vec![-1.0]);
        let s = recurrence_slopes(&[0.5, 0.5], &[1.0, 1.0]);
        assert_relative_eq!(s[0], 0.5);
        assert_relative_eq!(s[1], 1.0);
    }

    #[test]
    fn decoupled_model_certifies() {
        let model = decoupled();
        let data = UniformData::from_model(&model, preset_domain());
        let r = check_smallness(&model, &EmbeddingConstants::default(), &data).unwrap();
        assert_eq!(r.b0, 0.0);
        assert!(r.certified);
        assert!(r.radius.unwrap() > 0.0);
        let res = r.residuals.unwrap();
        assert!(res.thermal <= 1e-10);
        assert!(res.species.iter().all(|x| *x <= 1e-10));
        assert_eq!(r.self_map, Some(true));
    }

    #[test]
    fn inflated_peltier_fails_thermal_condition() {
        let mut model = nacl_model(&NaclOptions::default());
        model.bounds.peltier_max = 1.0;
        let data = UniformData::from_model(&model, preset_domain());
        let r = check_smallness(&model, &EmbeddingConstants::default(), &data).unwrap();
        assert!(r.b0 > 1.0);
        assert!(!r.certified);
        assert_eq!(r.reason.as_deref(), Some(THERMAL_CONDITION));
        assert!(r.species.iter().all(|s| s.b.is_none()));
        assert!(r.radius.is_none());
        assert!(r.render().contains("FAIL"));
    }

    #[test]
    fn preset_at_unit_time() {
        let model = nacl_model(&NaclOptions::default());
        let data = UniformData::from_model(&model, preset_domain());
        let r = check_smallness(&model, &EmbeddingConstants::default(), &data).unwrap();
        assert!(r.b0 > 0.2 && r.b0 < 0.35, "ℬ₀ = {}", r.b0);
        assert_eq!(r.conditions.len(), 3);
        let flags_match = r.conditions.iter().all(|c| c.holds == c.margin.is_some_and(|m| m > 0.0));
        assert!(flags_match);
        assert_eq!(r.certified, r.radius.is_some());
    }
}
