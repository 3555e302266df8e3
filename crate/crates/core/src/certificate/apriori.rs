//! A priori functionals of the scalar parabolic problem with radiation and
//! of the auxiliary temperature problem.

use serde::{Deserialize, Serialize};

use super::constants::EmbeddingConstants;
use super::data::{time_norm, DataNorms, ModelNumbers};

/// Norms of the data of `∂ₜu − ∇·(K∇u) = −∇·𝐟` with the radiation law on
/// Σ, flux `f` on Γ and source `H` on Σ, all taken at exponent `p`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParabolicNorms {
    /// ‖u₀‖_{p,Ω}
    pub initial: f64,
    /// ‖𝐟‖_{p,Q_T}
    pub drive: f64,
    /// ‖f‖_{p,Γ×T}
    pub flux: f64,
    /// ‖f‖_{p',Γ×T}
    pub flux_dual: f64,
    /// ‖H‖_{p,Σ_T}
    pub wall: f64,
    /// ‖H‖_{p',Σ_T}
    pub wall_dual: f64,
    /// ∫_{Σ_T} |H|^{(ℓ+p−2)/(ℓ−1)}
    pub wall_integral: f64,
}

fn dual(p: f64) -> f64 {
    p / (p - 1.0)
}

fn boundary_weight(k: f64, p: f64, ec: &EmbeddingConstants, volume: f64) -> f64 {
    let n = f64::from(ec.n);
    (p - 1.0)
        * ((p * p / (2.0 * k * (p - 1.0))).powf(1.0 / (p - 1.0)) + 1.0)
        * ec.k_tr2.powf(2.0 / (p - 1.0))
        * volume.powf(1.0 / ((p - 1.0) * n))
}

/// `𝓗(k_#, b_#, p)`; with `b_# = 0` the radiation term is dropped and the
/// boundary term acts on `H` (the flux `f` must then vanish).
pub fn h_functional(k: f64, b: f64, ell: f64, p: f64, ec: &EmbeddingConstants, volume: f64, d: &ParabolicNorms) -> f64 {
    let pp = dual(p);
    let base = d.initial.powf(p) + ((p - 1.0) / k).powf(p / 2.0) * d.drive.powf(p);
    let w = boundary_weight(k, p, ec, volume);
    if b == 0.0 {
        return base + w * d.wall_dual.powf(pp);
    }
    base + p * (ell - 1.0) / ((ell + p - 2.0) * b.powf((p - 1.0) / (ell - 1.0))) * d.wall_integral
        + w * d.flux_dual.powf(pp)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AprioriBounds {
    /// 𝓗(k_#, b_#, p)
    pub h: f64,
    /// 𝓗(k_#, b_#, 2)
    pub h2: f64,
    /// Bound on ess sup ‖u(t)‖_p^p.
    pub sup: f64,
    /// Bound on ‖u‖^{ℓ+p−2}_{ℓ+p−2,Σ_T}; infinite when b_# = 0.
    pub boundary: f64,
    /// Bound on ‖∇u‖_{p,Q_T}.
    pub gradient: f64,
}

/// The three estimates of the scalar problem. `at_p` and `at_2` hold the
/// data norms at exponents `ec.p` and 2.
pub fn a_priori_bounds(
    k: f64,
    b: f64,
    ell: f64,
    ec: &EmbeddingConstants,
    volume: f64,
    at_p: &ParabolicNorms,
    at_2: &ParabolicNorms,
) -> AprioriBounds {
    let (p, t) = (ec.p, ec.t);
    let h = h_functional(k, b, ell, p, ec, volume, at_p);
    let h2 = h_functional(k, b, ell, 2.0, ec, volume, at_2);
    let growth = ((p - 1.0) * t).exp();
    let boundary = if b > 0.0 {
        h * (1.0 + (p - 1.0) * t * growth) / b
    } else {
        f64::INFINITY
    };
    let gradient = ec.regularity / k
        * ((k * h2 * (1.0 + t * t.exp())).sqrt()
            + (1.0 + k).sqrt() * (at_p.drive + ec.k_tr2 * (at_p.flux + at_p.wall)));
    AprioriBounds {
        h,
        h2,
        sup: h * growth,
        boundary: if h == 0.0 { 0.0 } else { boundary },
        gradient,
    }
}

/// Data of the auxiliary temperature problem and its functionals `𝓗₀`, `𝓗#`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryTemperature {
    pub p: f64,
    /// ‖θ₀‖_{p,Ω}^p
    pub initial_term: f64,
    /// Factor of `(σ#Π# a + Σ Dⱼ' bⱼ)^p`.
    pub drive_factor: f64,
    pub sigma_peltier: f64,
    pub dufour: Vec<f64>,
    pub wall_term: f64,
    pub electrode_term: f64,
    /// 𝓗#
    pub h_sharp: f64,
}

impl AuxiliaryTemperature {
    pub fn new(m: &ModelNumbers, ec: &EmbeddingConstants, data: &dyn DataNorms) -> Self {
        let (p, t, ell) = (ec.p, ec.t, m.ell);
        let n = f64::from(ec.n);
        let (k, b, rc) = (m.conductivity_min, m.radiation_min, m.heat_capacity);
        let vol = data.domain().volume;
        let pp = dual(p);
        let ellp = dual(ell);
        let wall_exp = (ell + p - 2.0) / (ell - 1.0);
        let wall_integral = time_norm(data.wall_source(wall_exp), wall_exp, t).powf(wall_exp);
        let wall_term = p * (ell - 1.0) / (rc * (ell + p - 2.0) * b.powf((p - 1.0) / (ell - 1.0))) * wall_integral;
        let ge_dual = time_norm(data.electrode_source(pp), pp, t);
        let electrode_term = rc.powf(-pp)
            * ((p * p * (p - 1.0).powf(p - 2.0) / (2.0 * k / rc)).powf(1.0 / (p - 1.0)) + p - 1.0)
            * ec.k_tr2.powf(2.0 / (p - 1.0))
            * vol.powf(1.0 / ((p - 1.0) * n))
            * ge_dual.powf(pp);
        let gw_p = time_norm(data.wall_source(p), p, t);
        let ge_p = time_norm(data.electrode_source(p), p, t);
        let gw_l = time_norm(data.wall_source(ellp), ellp, t);
        let ge_2 = time_norm(data.electrode_source(2.0), 2.0, t);
        let h_sharp = (1.0 + k / rc).sqrt() * ec.k_tr2 * (gw_p + ge_p)
            + (k * ec.growth()).sqrt()
                * ((2.0 * (ell - 1.0) / (ell * b.powf(1.0 / (ell - 1.0)))).sqrt() * gw_l.powf(ellp / 2.0)
                    + (2.0 + k).sqrt() * ec.k_tr2 * vol.powf(1.0 / (2.0 * n)) * ge_2);
        Self {
            p,
            initial_term: data.initial_temperature(p).powf(p),
            drive_factor: rc.powf(-p / 2.0) * ((p - 1.0) / k).powf(p / 2.0),
            sigma_peltier: m.sigma_max * m.peltier,
            dufour: m.species.iter().map(|s| s.dufour).collect(),
            wall_term,
            electrode_term,
            h_sharp,
        }
    }

    /// `𝓗₀(a, 𝐛)`
    pub fn h0(&self, a: f64, b: &[f64]) -> f64 {
        let drive = self.sigma_peltier * a + self.dufour.iter().zip(b).map(|(d, x)| d * x).sum::<f64>();
        self.initial_term + self.drive_factor * drive.powf(self.p) + self.wall_term + self.electrode_term
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_data_gives_zero_bounds() {
        let ec = EmbeddingConstants::default();
        let z = ParabolicNorms::default();
        let b = a_priori_bounds(0.5, 1e-8, 5.0, &ec, 1.0, &z, &z);
        assert_eq!(b.h, 0.0);
        assert_eq!(b.sup, 0.0);
        assert_eq!(b.boundary, 0.0);
        assert_eq!(b.gradient, 0.0);
    }

    #[test]
    fn drive_only_case() {
        let ec = EmbeddingConstants::default();
        let d = ParabolicNorms {
            drive: 1.0,
            ..Default::default()
        };
        assert_relative_eq!(h_functional(1.0, 0.3, 5.0, 2.0, &ec, 1.0, &d), 1.0);
    }

    #[test]
    fn without_radiation_the_wall_enters_dually() {
        let ec = EmbeddingConstants::default();
        let d = ParabolicNorms {
            wall_dual: 1.0,
            wall_integral: 123.0,
            ..Default::default()
        };
        // (p−1)((p²/(2k(p−1)))^{1/(p−1)} + 1) K² |Ω|^{1/n} at p = 2, k = 1.
        assert_relative_eq!(h_functional(1.0, 0.0, 5.0, 2.0, &ec, 1.0, &d), 3.0);
        let b = a_priori_bounds(1.0, 0.0, 5.0, &ec, 1.0, &d, &d);
        assert!(b.boundary.is_infinite());
    }
}
