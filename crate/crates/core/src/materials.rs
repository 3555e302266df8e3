//! Transport and boundary coefficients with their declared bounds, plus the
//! molten-NaCl (Downs cell) preset.
//!
//! Every coefficient is a [`Law`] of position and temperature. Bounds are
//! declared next to the laws and checked by [`validate_hypotheses`]; the
//! solvers only evaluate laws, the certificate only reads bounds.

use serde::{Deserialize, Serialize};

use crate::geometry::{BoundaryTag, Mesh, Point};
use crate::species::ButlerVolmerParams;

pub const FARADAY: f64 = 9.6485e4;
pub const GAS_CONSTANT: f64 = 8.314;
pub const STEFAN_BOLTZMANN: f64 = 5.67e-8;

/// Relative slack used when comparing sampled values against declared bounds.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub faraday: f64,
    pub gas_constant: f64,
    pub stefan_boltzmann: f64,
    /// kg·m⁻³
    pub density: f64,
    /// J·kg⁻¹·K⁻¹
    pub heat_capacity: f64,
}

impl PhysicalConstants {
    pub fn with_medium(density: f64, heat_capacity: f64) -> Self {
        Self {
            faraday: FARADAY,
            gas_constant: GAS_CONSTANT,
            stefan_boltzmann: STEFAN_BOLTZMANN,
            density,
            heat_capacity,
        }
    }

    pub fn volumetric_heat_capacity(&self) -> f64 {
        self.density * self.heat_capacity
    }
}

/// A scalar coefficient law `f(x, θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Law {
    Constant { value: f64 },
    /// Piecewise constant along the first coordinate; `values.len() == breaks.len() + 1`.
    PiecewiseX { breaks: Vec<f64>, values: Vec<f64> },
    /// `Σ_k a_k θ^k`.
    Polynomial { coefficients: Vec<f64> },
    /// Linear interpolation in θ, constant outside the table.
    Tabulated { theta: Vec<f64>, values: Vec<f64> },
}

impl Law {
    pub fn constant(value: f64) -> Self {
        Law::Constant { value }
    }

    pub fn tabulated(theta: Vec<f64>, values: Vec<f64>) -> Self {
        Law::Tabulated { theta, values }
    }

    pub fn eval(&self, x: Point, theta: f64) -> f64 {
        match self {
            Law::Constant { value } => *value,
            Law::PiecewiseX { breaks, values } => {
                let k = breaks.iter().take_while(|&&b| x[0] >= b).count();
                values[k.min(values.len() - 1)]
            }
            Law::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, a| acc * theta + a),
            Law::Tabulated { theta: ts, values } => {
                if theta <= ts[0] {
                    return values[0];
                }
                let last = ts.len() - 1;
                if theta >= ts[last] {
                    return values[last];
                }
                let k = ts.partition_point(|&t| t <= theta) - 1;
                let s = (theta - ts[k]) / (ts[k + 1] - ts[k]);
                values[k] * (1.0 - s) + values[k + 1] * s
            }
        }
    }

    fn check_shape(&self) -> Option<String> {
        match self {
            Law::PiecewiseX { breaks, values } if values.len() != breaks.len() + 1 => {
                Some("piecewise law needs one more value than breaks".into())
            }
            Law::Polynomial { coefficients } if coefficients.is_empty() => Some("empty polynomial".into()),
            Law::Tabulated { theta, values } if theta.is_empty() || theta.len() != values.len() => {
                Some("table needs matching, non-empty columns".into())
            }
            Law::Tabulated { theta, .. } if theta.windows(2).any(|w| w[1] <= w[0]) => {
                Some("table temperatures must increase".into())
            }
            _ => None,
        }
    }
}

/// Peltier coefficient: either tied to Seebeck by `Π = αθ` or a free law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PeltierLaw {
    Kelvin,
    Free { law: Law },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConductivityTensor {
    Isotropic { law: Law },
    Diagonal { laws: Vec<Law> },
}

impl ConductivityTensor {
    pub fn eval(&self, x: Point, theta: f64) -> [[f64; 2]; 2] {
        match self {
            ConductivityTensor::Isotropic { law } => {
                let k = law.eval(x, theta);
                [[k, 0.0], [0.0, k]]
            }
            ConductivityTensor::Diagonal { laws } => {
                let kx = laws[0].eval(x, theta);
                let ky = laws.get(1).map_or(kx, |l| l.eval(x, theta));
                [[kx, 0.0], [0.0, ky]]
            }
        }
    }
}

/// Wall condition `q·n = h_R |θ|^{ℓ−2} θ − γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallRadiation {
    /// ℓ ≥ 2; ℓ = 5 is Stefan–Boltzmann.
    pub exponent: f64,
    /// h_R(x, θ)
    pub coefficient: Law,
    /// γ(x, θ), the absorbed incoming flux.
    pub source: Law,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceCurrent {
    pub anode: Law,
    pub cathode: Law,
}

impl SurfaceCurrent {
    pub fn eval(&self, tag: BoundaryTag, x: Point) -> f64 {
        match tag {
            BoundaryTag::Anode => self.anode.eval(x, 0.0),
            BoundaryTag::Cathode => self.cathode.eval(x, 0.0),
            _ => 0.0,
        }
    }
}

/// One electrode reaction consuming or producing a species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectrodeReaction {
    pub electrode: BoundaryTag,
    pub kinetics: ButlerVolmerParams,
    /// Multiplies the Butler–Volmer current; 1 keeps `−F z J·n = g`.
    #[serde(default = "one")]
    pub stoichiometry: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesBounds {
    /// (D_i)_#
    pub diffusion_min: f64,
    /// D_i^#, bounds F|z_i| D_i
    pub diffusion_max: f64,
    /// S_i^#, bounds |c S_i|
    pub soret_max: f64,
    /// (D_i')^#, bounds R θ² |D_i'|
    pub dufour_max: f64,
    /// t_i^#, with 0 ≤ t_i ≤ F|z_i| t_i^#
    pub transference_max: f64,
    /// g_i^#, linear growth of the electrode flux
    pub growth: f64,
    /// Constant envelope γ_i of the electrode flux; derived from the
    /// reactions' truncation when absent.
    #[serde(default)]
    pub source_envelope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSpec {
    pub name: String,
    pub valence: i32,
    pub diffusion: Law,
    pub soret: Law,
    pub dufour: Law,
    /// Transference number t_i(x).
    pub transference: Law,
    pub initial: Law,
    /// Upper end of the concentration range sampled by validation.
    pub concentration_max: f64,
    #[serde(default)]
    pub reactions: Vec<ElectrodeReaction>,
    pub bounds: SpeciesBounds,
}

impl SpeciesSpec {
    /// Sup of the truncated electrode flux over all admissible arguments.
    pub fn truncation_envelope(&self) -> f64 {
        self.reactions
            .iter()
            .map(|r| r.stoichiometry.abs() * r.kinetics.truncation_bound())
            .fold(0.0, f64::max)
    }

    pub fn source_envelope(&self) -> f64 {
        self.bounds.source_envelope.unwrap_or_else(|| self.truncation_envelope())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBounds {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub seebeck_max: f64,
    pub peltier_max: f64,
    pub conductivity_min: f64,
    pub conductivity_max: f64,
    /// b_#, b^#
    pub radiation_min: f64,
    pub radiation_max: f64,
    /// h_C^#
    pub cooling_max: f64,
    /// Constant envelope γ_w of the wall source.
    pub wall_source_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    pub constants: PhysicalConstants,
    pub species: Vec<SpeciesSpec>,
    /// σ(x, θ), S·m⁻¹
    pub conductivity: Law,
    /// α(x, θ), V·K⁻¹
    pub seebeck: Law,
    pub peltier: PeltierLaw,
    /// K(x, θ), W·m⁻¹·K⁻¹
    pub thermal_conductivity: ConductivityTensor,
    pub radiation: WallRadiation,
    /// h_C(x, θ) on the electrodes.
    pub cooling: Law,
    pub anode_temperature: f64,
    pub cathode_temperature: f64,
    pub surface_current: SurfaceCurrent,
    pub initial_temperature: Law,
    /// Coefficients are evaluated at the clamped temperature outside this range.
    #[serde(default)]
    pub temperature_range: Option<[f64; 2]>,
    pub bounds: ModelBounds,
}

/// All volumetric coefficients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub sigma: f64,
    pub seebeck: f64,
    pub peltier: f64,
    pub conductivity: [[f64; 2]; 2],
    pub diffusion: Vec<f64>,
    pub soret: Vec<f64>,
    pub dufour: Vec<f64>,
    pub transference: Vec<f64>,
    /// Set when θ was outside the admissible range and got clamped.
    pub clamped: bool,
}

impl MaterialModel {
    /// Temperature used for coefficient evaluation and whether it was clamped.
    pub fn admissible_temperature(&self, theta: f64) -> (f64, bool) {
        match self.temperature_range {
            Some([lo, _]) if theta < lo => (lo, true),
            Some([_, hi]) if theta > hi => (hi, true),
            _ => (theta, false),
        }
    }

    pub fn peltier_at(&self, x: Point, theta: f64) -> f64 {
        match &self.peltier {
            PeltierLaw::Kelvin => self.seebeck.eval(x, theta) * theta,
            PeltierLaw::Free { law } => law.eval(x, theta),
        }
    }

    pub fn external_temperature(&self, tag: BoundaryTag) -> f64 {
        match tag {
            BoundaryTag::Cathode => self.cathode_temperature,
            _ => self.anode_temperature,
        }
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }
}

/// Evaluates σ, α, Π, K, D_i, S_i, D_i', t_i at `(x, θ, c)`.
///
/// Outside the model's admissible temperature range the laws are evaluated
/// at the nearest endpoint and `clamped` is set.
pub fn evaluate_coefficients(model: &MaterialModel, x: Point, theta: f64, _c: &[f64]) -> CoefficientSet {
    let (th, clamped) = model.admissible_temperature(theta);
    CoefficientSet {
        sigma: model.conductivity.eval(x, th),
        seebeck: model.seebeck.eval(x, th),
        peltier: model.peltier_at(x, th),
        conductivity: model.thermal_conductivity.eval(x, th),
        diffusion: model.species.iter().map(|s| s.diffusion.eval(x, th)).collect(),
        soret: model.species.iter().map(|s| s.soret.eval(x, th)).collect(),
        dufour: model.species.iter().map(|s| s.dufour.eval(x, th)).collect(),
        transference: model.species.iter().map(|s| s.transference.eval(x, th)).collect(),
        clamped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NernstEinstein {
    /// m²·V⁻¹·s⁻¹
    pub mobility: f64,
    pub transference: f64,
}

/// `u = z D F / (R θ)` and `t = F z u c / σ`.
pub fn nernst_einstein(
    constants: &PhysicalConstants,
    valence: i32,
    diffusion: f64,
    theta: f64,
    concentration: f64,
    sigma: f64,
) -> crate::Result<NernstEinstein> {
    if !(theta > 0.0) {
        return Err(crate::Error::Domain(format!("temperature must be positive, got {theta}")));
    }
    if !(sigma > 0.0) {
        return Err(crate::Error::Domain(format!("conductivity must be positive, got {sigma}")));
    }
    let z = f64::from(valence);
    let mobility = z * diffusion * constants.faraday / (constants.gas_constant * theta);
    let transference = constants.faraday * z * mobility * concentration / sigma;
    Ok(NernstEinstein { mobility, transference })
}

/// A point where a declared inequality fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: &'static str,
    pub inequality: String,
    pub x: Point,
    pub theta: f64,
    pub concentration: Option<f64>,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// ∫_Γ g ds
    pub compatibility_defect: f64,
    /// ∫_Γ |g| ds
    pub current_magnitude: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, hypothesis: &str) -> usize {
        self.violations.iter().filter(|v| v.hypothesis == hypothesis).count()
    }
}

/// Relative tolerance on `|∫_Γ g ds| / ∫_Γ |g| ds`.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-8;

fn exceeds(value: f64, bound: f64) -> bool {
    !(value <= bound + BOUND_SLACK * bound.abs().max(f64::MIN_POSITIVE))
}

fn below(value: f64, bound: f64) -> bool {
    !(value >= bound - BOUND_SLACK * bound.abs().max(f64::MIN_POSITIVE))
}

struct Checker<'a> {
    out: &'a mut Vec<Violation>,
}

impl Checker<'_> {
    fn upper(&mut self, hypothesis: &'static str, what: &str, at: (Point, f64, Option<f64>), value: f64, bound: f64) {
        if exceeds(value, bound) {
            self.push(hypothesis, format!("{what} ≤ {bound:e}"), at, value, bound);
        }
    }

    fn lower(&mut self, hypothesis: &'static str, what: &str, at: (Point, f64, Option<f64>), value: f64, bound: f64) {
        if below(value, bound) {
            self.push(hypothesis, format!("{what} ≥ {bound:e}"), at, value, bound);
        }
    }

    fn push(&mut self, hypothesis: &'static str, inequality: String, at: (Point, f64, Option<f64>), value: f64, bound: f64) {
        self.out.push(Violation {
            hypothesis,
            inequality,
            x: at.0,
            theta: at.1,
            concentration: at.2,
            value,
            bound,
        });
    }
}

fn sample_range(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || hi <= lo {
        return vec![lo];
    }
    (0..count)
        .map(|k| if k + 1 == count { hi } else { lo + (hi - lo) * k as f64 / (count - 1) as f64 })
        .collect()
}

/// Samples every coefficient over mesh points × temperatures × concentrations
/// and reports each violated bound with a witness.
///
/// Temperatures cover the admissible range (250–1500 K when the model does
/// not declare one); concentrations cover `[0, concentration_max]`.
pub fn validate_hypotheses(model: &MaterialModel, mesh: &Mesh, sample_count: usize) -> ValidationReport {
    let mut violations = Vec::new();
    let mut chk = Checker { out: &mut violations };
    let b = &model.bounds;
    let k = &model.constants;
    let origin = ([0.0, 0.0], 0.0, None);

    for (name, value) in [
        ("σ_#", b.sigma_min),
        ("k_#", b.conductivity_min),
        ("b_#", b.radiation_min),
        ("F", k.faraday),
        ("R", k.gas_constant),
        ("ρ", k.density),
        ("c_p", k.heat_capacity),
    ] {
        if !(value > 0.0) {
            chk.push("bounds", format!("{name} > 0"), origin, value, 0.0);
        }
    }
    if !(model.radiation.exponent >= 2.0) {
        chk.push("H3", "ℓ ≥ 2".into(), origin, model.radiation.exponent, 2.0);
    }
    let mut laws: Vec<&Law> = vec![
        &model.conductivity,
        &model.seebeck,
        &model.radiation.coefficient,
        &model.radiation.source,
        &model.cooling,
        &model.initial_temperature,
        &model.surface_current.anode,
        &model.surface_current.cathode,
    ];
    for s in &model.species {
        laws.extend([&s.diffusion, &s.soret, &s.dufour, &s.transference, &s.initial]);
    }
    for law in laws {
        if let Some(msg) = law.check_shape() {
            chk.push("shape", msg, origin, f64::NAN, f64::NAN);
        }
    }
    if !chk.out.is_empty() && chk.out.iter().any(|v| v.hypothesis == "shape") {
        return ValidationReport {
            samples: 0,
            violations,
            compatibility_defect: f64::NAN,
            current_magnitude: f64::NAN,
        };
    }

    let [t_lo, t_hi] = model.temperature_range.unwrap_or([250.0, 1500.0]);
    let thetas = sample_range(t_lo, t_hi, sample_count.max(2));
    let mut points: Vec<Point> = mesh.nodes().to_vec();
    points.extend(mesh.cell_geometry().iter().map(|g| g.centroid));
    let mut samples = 0;

    for &x in &points {
        for &th in &thetas {
            let at = (x, th, None);
            let sigma = model.conductivity.eval(x, th);
            chk.lower("H1", "σ", at, sigma, b.sigma_min);
            chk.upper("H1", "σ", at, sigma, b.sigma_max);
            chk.upper("H1", "|α|", at, model.seebeck.eval(x, th).abs(), b.seebeck_max);
            chk.upper("H1", "|Π|", at, model.peltier_at(x, th).abs(), b.peltier_max);

            let kt = model.thermal_conductivity.eval(x, th);
            let dim = mesh.dim();
            let min_eig = if dim == 1 {
                kt[0][0]
            } else {
                let (a, d, off) = (kt[0][0], kt[1][1], 0.5 * (kt[0][1] + kt[1][0]));
                0.5 * (a + d) - (0.25 * (a - d).powi(2) + off * off).sqrt()
            };
            chk.lower("H2", "ξᵀKξ/|ξ|²", at, min_eig, b.conductivity_min);
            for row in kt.iter().take(dim) {
                for kjl in row.iter().take(dim) {
                    chk.upper("H2", "|K_jl|", at, kjl.abs(), b.conductivity_max);
                }
            }

            for s in &model.species {
                let d = s.diffusion.eval(x, th);
                let fz = k.faraday * f64::from(s.valence.abs());
                chk.lower("H1", &format!("D_{}", s.name), at, d, s.bounds.diffusion_min);
                chk.upper("H1", &format!("F|z|D_{}", s.name), at, fz * d, s.bounds.diffusion_max);
                let dp = s.dufour.eval(x, th);
                chk.upper(
                    "H1",
                    &format!("Rθ²|D'_{}|", s.name),
                    at,
                    k.gas_constant * th * th * dp.abs(),
                    s.bounds.dufour_max,
                );
                for c in sample_range(0.0, s.concentration_max, sample_count.max(2)) {
                    let atc = (x, th, Some(c));
                    chk.upper("H1", &format!("|c S_{}|", s.name), atc, (c * s.soret.eval(x, th)).abs(), s.bounds.soret_max);
                    samples += 1;
                }
            }
            samples += 1;
        }

        for s in &model.species {
            let t = s.transference.eval(x, 0.0);
            let at = (x, 0.0, None);
            chk.lower("H4", &format!("t_{}", s.name), at, t, 0.0);
            chk.upper(
                "H4",
                &format!("t_{}", s.name),
                at,
                t,
                k.faraday * f64::from(s.valence.abs()) * s.bounds.transference_max,
            );
            let c0 = s.initial.eval(x, 0.0);
            if !c0.is_finite() {
                chk.push("H8", format!("c_{}⁰ finite", s.name), at, c0, f64::NAN);
            }
        }
        let th0 = model.initial_temperature.eval(x, 0.0);
        if !th0.is_finite() {
            chk.push("H8", "θ₀ finite".into(), (x, 0.0, None), th0, f64::NAN);
        }
    }

    // boundary coefficients at face nodes
    for face in mesh.faces() {
        for &n in &face.nodes {
            let x = mesh.nodes()[n];
            for &th in &thetas {
                let at = (x, th, None);
                match face.tag {
                    BoundaryTag::Wall => {
                        let hr = model.radiation.coefficient.eval(x, th);
                        chk.lower("H3", "h_R", at, hr, b.radiation_min);
                        chk.upper("H3", "h_R", at, hr, b.radiation_max);
                        chk.upper("H6", "|γ|", at, model.radiation.source.eval(x, th).abs(), b.wall_source_max);
                    }
                    BoundaryTag::Anode | BoundaryTag::Cathode => {
                        let hc = model.cooling.eval(x, th);
                        chk.lower("H6", "h_C", at, hc, 0.0);
                        chk.upper("H6", "h_C", at, hc, b.cooling_max);
                    }
                    BoundaryTag::Outer => {}
                }
            }
        }
    }

    for s in &model.species {
        for r in &s.reactions {
            let p = &r.kinetics;
            let at = ([0.0, 0.0], 0.0, None);
            if !(p.transfer > 0.0 && p.transfer < 1.0) {
                chk.push("H7", format!("0 < β_{} < 1", s.name), at, p.transfer, 0.5);
            }
            if !(p.cap > 0.0) {
                chk.push("H7", format!("cap_{} > 0", s.name), at, p.cap, 0.0);
            }
        }
        // |g_i| ≤ γ_i + g_i^#(|θ| + |φ|) at sampled (θ, φ)
        let envelope = s.source_envelope();
        for &th in &thetas {
            for phi in sample_range(-10.0, 10.0, sample_count.max(2)) {
                for r in &s.reactions {
                    let Ok(g) = crate::species::butler_volmer_flux(&r.kinetics, &model.constants, th, phi) else {
                        continue;
                    };
                    let bound = envelope + s.bounds.growth * (th.abs() + phi.abs());
                    chk.upper("H7", &format!("|g_{}|", s.name), ([0.0, 0.0], th, None), (r.stoichiometry * g).abs(), bound);
                }
            }
        }
    }

    let mut defect = 0.0;
    let mut magnitude = 0.0;
    for face in mesh.faces().iter().filter(|f| f.tag.is_electrode()) {
        let share = face.area / face.nodes.len() as f64;
        for &n in &face.nodes {
            let g = model.surface_current.eval(face.tag, mesh.nodes()[n]);
            defect += g * share;
            magnitude += g.abs() * share;
        }
    }
    if defect.abs() > COMPATIBILITY_TOLERANCE * magnitude {
        chk.push("H5", "∫_Γ g ds = 0".into(), origin, defect, 0.0);
    }

    ValidationReport {
        samples,
        violations,
        compatibility_defect: defect,
        current_magnitude: magnitude,
    }
}

/// Standard potentials of the two half-reactions in the NaCl cell, V.
pub const NACL_REDUCTION_POTENTIAL: f64 = -2.71;
pub const NACL_OXIDATION_POTENTIAL: f64 = -1.36;

/// E⁰_cell = E⁰_red + E⁰_ox for 2 NaCl → 2 Na + Cl₂.
pub fn nacl_cell_potential() -> f64 {
    NACL_REDUCTION_POTENTIAL + NACL_OXIDATION_POTENTIAL
}

/// Tunable knobs of the molten-NaCl preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NaclOptions {
    /// α^#, V·K⁻¹; the Seebeck law is this constant.
    pub seebeck_max: f64,
    /// Upper end of the admissible range; Π^# = α^# θ_max unless overridden.
    pub theta_max: f64,
    pub theta_min: f64,
    pub peltier_max: Option<f64>,
    pub emissivity: f64,
    /// h_C, W·m⁻²·K⁻¹
    pub cooling: f64,
    pub cooling_max: f64,
    pub initial_temperature: f64,
    pub electrode_temperature: f64,
    pub wall_temperature: f64,
    /// Operating current density, A·m⁻².
    pub current_density: f64,
    /// Butler–Volmer exchange current density J_l, A·m⁻².
    pub exchange_current: f64,
    /// |φ_eq| at each electrode, in the zero-boundary-mean gauge. The default
    /// leaves the overpotential that carries the operating current across
    /// the default 5 cm gap. Other gaps L need about j·L/(2σ_#) − 0.045 V.
    pub equilibrium_potential: f64,
    pub cap: f64,
    pub initial_concentration: f64,
}

impl Default for NaclOptions {
    fn default() -> Self {
        Self {
            seebeck_max: 7.0e-5,
            theta_max: 1250.0,
            theta_min: 1080.0,
            peltier_max: None,
            emissivity: 0.2,
            cooling: 1000.0,
            cooling_max: 1820.0,
            initial_temperature: 1080.0,
            electrode_temperature: 1085.0,
            wall_temperature: 1080.0,
            current_density: 1.0e4,
            exchange_current: 1.0e4,
            equilibrium_potential: 0.650,
            cap: 30.0,
            initial_concentration: 2.5667e4,
        }
    }
}

/// Reciprocal of the Na⁺ Dufour bound, (D'_Na⁺)^# = 1 / 6.9281e5.
pub const NACL_DUFOUR_RECIPROCAL: f64 = 6.9281e5;

/// Molten NaCl between copper/nickel electrodes in a stainless-steel
/// container (Downs process), 1080–1250 K.
///
/// Na⁺ is consumed at the cathode and Cl⁻ at the anode. Both the Soret and
/// Dufour laws are constants chosen at their bounds over the admissible
/// range; transference numbers follow Nernst–Einstein at the initial state.
pub fn nacl_model(opts: &NaclOptions) -> MaterialModel {
    let constants = PhysicalConstants::with_medium(1500.0, 1197.8);
    let (t_lo, t_hi) = (opts.theta_min, opts.theta_max);
    let c0 = opts.initial_concentration;
    let sigma_min = 359.7;
    let sigma_max = 398.0;
    let table = |a: f64, b: f64| Law::tabulated(vec![t_lo, t_hi], vec![a, b]);

    let species = |name: &str,
                   valence: i32,
                   d_min: f64,
                   d_max_raw: f64,
                   soret: f64,
                   electrode: BoundaryTag,
                   phi_eq: f64| {
        let fz = constants.faraday * f64::from(valence.abs());
        let diffusion_max = d_max_raw * fz;
        let transference_max = diffusion_max * c0 / (constants.gas_constant * opts.initial_temperature * sigma_min);
        let transference = nernst_einstein(&constants, valence, d_min, opts.initial_temperature, c0, sigma_min)
            .map(|ne| ne.transference)
            .unwrap_or(0.0);
        let dufour_max = 1.0 / NACL_DUFOUR_RECIPROCAL;
        SpeciesSpec {
            name: name.to_string(),
            valence,
            diffusion: table(d_min, d_max_raw),
            soret: Law::constant(soret),
            dufour: Law::constant(dufour_max / (constants.gas_constant * t_hi * t_hi)),
            transference: Law::constant(transference),
            initial: Law::constant(c0),
            concentration_max: c0,
            reactions: vec![ElectrodeReaction {
                electrode,
                kinetics: ButlerVolmerParams {
                    exchange_current: opts.exchange_current,
                    transfer: 0.5,
                    electrons: 2,
                    equilibrium_potential: phi_eq,
                    cap: opts.cap,
                },
                stoichiometry: 1.0,
            }],
            bounds: SpeciesBounds {
                diffusion_min: d_min,
                diffusion_max,
                soret_max: soret * c0,
                dufour_max,
                transference_max,
                growth: 0.0,
                source_envelope: None,
            },
        }
    };

    let sb_eps = constants.stefan_boltzmann * opts.emissivity;
    let wall_source = sb_eps * opts.wall_temperature.powi(4);
    let peltier_max = opts.peltier_max.unwrap_or(opts.seebeck_max * t_hi);
    let j = opts.current_density;

    MaterialModel {
        species: vec![
            species("Na+", 1, 7.7e-9, 12e-9, 1.2e-12, BoundaryTag::Cathode, -opts.equilibrium_potential),
            species("Cl-", -1, 6.3e-9, 9.5e-9, 9.5e-11, BoundaryTag::Anode, opts.equilibrium_potential),
        ],
        conductivity: table(sigma_min, sigma_max),
        seebeck: Law::constant(opts.seebeck_max),
        peltier: PeltierLaw::Kelvin,
        thermal_conductivity: ConductivityTensor::Isotropic { law: table(0.6, 0.5) },
        radiation: WallRadiation {
            exponent: 5.0,
            coefficient: Law::constant(sb_eps),
            source: Law::constant(wall_source),
        },
        cooling: Law::constant(opts.cooling),
        anode_temperature: opts.electrode_temperature,
        cathode_temperature: opts.electrode_temperature,
        surface_current: SurfaceCurrent {
            anode: Law::constant(j),
            cathode: Law::constant(-j),
        },
        initial_temperature: Law::constant(opts.initial_temperature),
        temperature_range: Some([t_lo, t_hi]),
        bounds: ModelBounds {
            sigma_min,
            sigma_max,
            seebeck_max: opts.seebeck_max,
            peltier_max,
            conductivity_min: 0.5,
            conductivity_max: 0.6,
            radiation_min: sb_eps,
            radiation_max: sb_eps,
            cooling_max: opts.cooling_max,
            wall_source_max: wall_source,
        },
        constants,
    }
}

/// The NaCl preset model together with its default cell configuration.
pub fn nacl_preset() -> (MaterialModel, crate::config::CellConfig) {
    let config = crate::config::CellConfig::nacl_default();
    (nacl_model(&NaclOptions::default()), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_interval_mesh, build_rectangle_mesh, SideTags};
    use approx::assert_relative_eq;
    use BoundaryTag::*;

    fn nacl() -> MaterialModel {
        nacl_model(&NaclOptions::default())
    }

    #[test]
    fn laws_evaluate() {
        let x = [0.3, 0.0];
        assert_eq!(Law::constant(2.0).eval(x, 5.0), 2.0);
        let p = Law::Polynomial { coefficients: vec![1.0, 2.0, 3.0] };
        assert_relative_eq!(p.eval(x, 2.0), 17.0);
        let pw = Law::PiecewiseX { breaks: vec![0.25, 0.5], values: vec![1.0, 2.0, 3.0] };
        assert_eq!(pw.eval([0.1, 0.0], 0.0), 1.0);
        assert_eq!(pw.eval(x, 0.0), 2.0);
        assert_eq!(pw.eval([0.9, 0.0], 0.0), 3.0);
        let t = Law::tabulated(vec![0.0, 10.0, 20.0], vec![0.0, 1.0, 3.0]);
        assert_eq!(t.eval(x, -1.0), 0.0);
        assert_relative_eq!(t.eval(x, 5.0), 0.5);
        assert_relative_eq!(t.eval(x, 15.0), 2.0);
        assert_eq!(t.eval(x, 20.0), 3.0);
        assert_eq!(t.eval(x, 99.0), 3.0);
    }

    #[test]
    fn nacl_conductivity_in_bounds() {
        let m = nacl();
        let cs = evaluate_coefficients(&m, [0.05, 0.0], 1100.0, &[2.5667e4, 2.5667e4]);
        assert!((359.7..=398.0).contains(&cs.sigma));
        assert!(!cs.clamped);
    }

    #[test]
    fn constant_model_is_position_and_state_independent() {
        let mut m = nacl();
        m.conductivity = Law::constant(3.0);
        let a = evaluate_coefficients(&m, [0.0, 0.0], 1100.0, &[1.0, 1.0]);
        let b = evaluate_coefficients(&m, [0.1, 0.07], 1100.0, &[5.0, 0.0]);
        assert_eq!(a.sigma, 3.0);
        assert_eq!(a.sigma, b.sigma);
    }

    #[test]
    fn isotropic_conductivity_rayleigh_quotient() {
        let m = nacl();
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..100 {
            let theta = 1080.0 + 170.0 * (0.5 + 0.5 * next());
            let k = evaluate_coefficients(&m, [0.0, 0.0], theta, &[]).conductivity;
            let xi = [next(), next()];
            let q = xi[0] * (k[0][0] * xi[0] + k[0][1] * xi[1]) + xi[1] * (k[1][0] * xi[0] + k[1][1] * xi[1]);
            let r = q / (xi[0] * xi[0] + xi[1] * xi[1]);
            assert!((0.5 - 1e-12..=0.6 + 1e-12).contains(&r), "{r}");
        }
    }

    #[test]
    fn clamping_is_flagged() {
        let m = nacl();
        let cs = evaluate_coefficients(&m, [0.0, 0.0], 1400.0, &[]);
        assert!(cs.clamped);
        assert_eq!(cs.sigma, 398.0);
        let cs = evaluate_coefficients(&m, [0.0, 0.0], 900.0, &[]);
        assert!(cs.clamped);
        assert_eq!(cs.sigma, 359.7);
    }

    #[test]
    fn nernst_einstein_values() {
        let k = PhysicalConstants::with_medium(1.0, 1.0);
        let ne = nernst_einstein(&k, 1, 12e-9, 1073.15, 0.0, 359.7).unwrap();
        // zDF/(Rθ), evaluated by hand: 12e-9 · 96485 / (8.314 · 1073.15)
        assert_relative_eq!(ne.mobility, 1.2977e-7, max_relative = 1e-4);
        assert_eq!(ne.transference, 0.0);
        let ne = nernst_einstein(&k, 1, 12e-9, 1073.15, 2.5667e4, 359.7).unwrap();
        assert_relative_eq!(ne.transference, 0.893, max_relative = 1e-3);
        assert!(nernst_einstein(&k, 1, 12e-9, 0.0, 1.0, 1.0).is_err());
        assert!(nernst_einstein(&k, 1, 12e-9, -5.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn nernst_einstein_homogeneous_in_diffusion() {
        let k = PhysicalConstants::with_medium(1.0, 1.0);
        let a = nernst_einstein(&k, -2, 3e-9, 1100.0, 1e4, 380.0).unwrap();
        let b = nernst_einstein(&k, -2, 7.5e-9, 1100.0, 1e4, 380.0).unwrap();
        assert_relative_eq!(b.mobility, 2.5 * a.mobility, max_relative = 1e-14);
        assert_relative_eq!(b.transference, 2.5 * a.transference, max_relative = 1e-14);
        assert!(a.transference >= 0.0);
    }

    #[test]
    fn preset_values() {
        let m = nacl();
        let na = &m.species[0];
        assert_eq!(na.initial.eval([0.0, 0.0], 0.0), 2.5667e4);
        assert_relative_eq!(na.bounds.soret_max, 3.08e-8, max_relative = 1e-3);
        assert_eq!(1.0 / na.bounds.dufour_max, NACL_DUFOUR_RECIPROCAL);
        assert_relative_eq!(nacl_cell_potential(), -4.07, max_relative = 1e-14);
        assert_relative_eq!(m.constants.volumetric_heat_capacity(), 1500.0 * 1197.8);
        assert_relative_eq!(na.bounds.diffusion_max, FARADAY * 12e-9, max_relative = 1e-15);
        assert_eq!(m.radiation.exponent, 5.0);
        assert_relative_eq!(m.bounds.radiation_min, 5.67e-8 * 0.2, max_relative = 1e-15);
    }

    #[test]
    fn preset_satisfies_hypotheses() {
        let m = nacl();
        let mesh = build_interval_mesh(0.13, 16, Anode, Cathode).unwrap();
        let r = validate_hypotheses(&m, &mesh, 12);
        assert!(r.is_valid(), "{:#?}", r.violations);
        let mesh2 = build_rectangle_mesh(0.13, 0.13, 4, 4, SideTags::new(Anode, Cathode, Wall, Outer)).unwrap();
        let r = validate_hypotheses(&m, &mesh2, 6);
        assert!(r.is_valid(), "{:#?}", r.violations);
    }

    #[test]
    fn preset_kelvin_relation_holds() {
        let m = nacl();
        for k in 0..=20 {
            let th = 1080.0 + 8.5 * k as f64;
            let cs = evaluate_coefficients(&m, [0.0, 0.0], th, &[]);
            assert_relative_eq!(cs.peltier, cs.seebeck * th, max_relative = 1e-15);
        }
    }

    #[test]
    fn zero_conductivity_is_reported() {
        let mut m = nacl();
        m.conductivity = Law::constant(0.0);
        let mesh = build_interval_mesh(0.13, 4, Anode, Cathode).unwrap();
        let r = validate_hypotheses(&m, &mesh, 4);
        assert!(r.violations.iter().any(|v| v.hypothesis == "H1" && v.inequality.starts_with("σ ≥")));
    }

    #[test]
    fn unbalanced_current_is_reported() {
        let mut m = nacl();
        m.surface_current = SurfaceCurrent {
            anode: Law::constant(5.0),
            cathode: Law::constant(5.0),
        };
        let mesh = build_interval_mesh(0.13, 4, Anode, Cathode).unwrap();
        let r = validate_hypotheses(&m, &mesh, 4);
        assert_eq!(r.count("H5"), 1);
        assert_relative_eq!(r.compatibility_defect, 10.0);
    }

    #[test]
    fn sampled_coefficients_respect_bounds_when_valid() {
        let m = nacl();
        let mesh = build_interval_mesh(0.13, 8, Anode, Cathode).unwrap();
        assert!(validate_hypotheses(&m, &mesh, 8).is_valid());
        for node in mesh.nodes() {
            for k in 0..8 {
                let th = 1080.0 + 170.0 * k as f64 / 7.0;
                let cs = evaluate_coefficients(&m, *node, th, &[]);
                assert!(cs.sigma >= m.bounds.sigma_min && cs.sigma <= m.bounds.sigma_max);
                assert!(cs.peltier.abs() <= m.bounds.peltier_max * (1.0 + 1e-12));
                for (i, s) in m.species.iter().enumerate() {
                    assert!(cs.diffusion[i] >= s.bounds.diffusion_min);
                }
            }
        }
    }
}
