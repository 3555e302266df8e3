//! Closed-form constants of the fixed-point argument, generic over the
//! scalar type so the same code yields numbers or coefficient polynomials.

use super::constants::{EmbeddingConstants, Symbols};
use super::data::{time_norm, DataNorms, ModelNumbers, SpeciesNumbers};
use super::poly::Scalar;

fn k<S: Scalar>(v: f64) -> S {
    S::constant(v)
}

fn pw(x: f64, e: f64) -> f64 {
    EmbeddingConstants::power(x, e)
}

/// `𝒵(a, d, e) = a √(1 + T e^T) + e √(1 + d)`
pub fn z_factor(a: f64, d: f64, e: f64, t: f64) -> f64 {
    a * (1.0 + t * t.exp()).sqrt() + e * (1.0 + d).sqrt()
}

fn z_generic<S: Scalar>(a: S, d: f64, e: S, sq: &S) -> S {
    a * sq.clone() + e * (1.0 + d).sqrt()
}

#[derive(Debug, Clone)]
pub struct EllipticConstants<S> {
    /// A#
    pub a_sharp: S,
    /// B#
    pub b_sharp: S,
}

pub fn elliptic_constants<S: Scalar>(
    m: &ModelNumbers,
    ec: &EmbeddingConstants,
    s: &Symbols<S>,
    data: &dyn DataNorms,
) -> EllipticConstants<S> {
    let (p, n) = (ec.p, f64::from(ec.n));
    let vol = data.domain().volume;
    let sig = m.sigma_min;
    let a_sharp = (s.m1.clone() * pw(vol, 0.5 - 1.0 / p) + s.m2.clone() * (1.0 + sig).sqrt()) * (1.0 / sig);
    let g2 = data.surface_current(2.0);
    let gp = data.surface_current(p);
    let b_sharp = s.tp.clone()
        * (s.m1.clone() * s.k.clone() * g2 + s.m3.clone() * ((2.0 + 2f64.powf(-1.0 / n) * sig).sqrt() * gp))
        * (1.0 / sig);
    EllipticConstants { a_sharp, b_sharp }
}

/// Envelope σ#α#‖∇θ‖ + Σ Dⱼ#‖∇cⱼ‖ of the thermo-diffusive drive.
pub fn drive_envelope(m: &ModelNumbers, diffusion_max: &[f64], grad_theta: f64, grad_c: &[f64]) -> f64 {
    m.sigma_max * m.seebeck * grad_theta + diffusion_max.iter().zip(grad_c).map(|(d, g)| d * g).sum::<f64>()
}

#[derive(Debug, Clone)]
pub struct SpeciesConstants<S> {
    /// 𝒢ᵢ#
    pub g_cal: S,
    pub x: S,
    pub y: S,
    /// 𝒬ᵢ
    pub q_cal: S,
    /// Qᵢ#
    pub q_sharp: f64,
    /// 𝒜ᵢ⁰
    pub a0: S,
    /// 𝒜ᵢ
    pub a: S,
}

/// `Qᵢ#`
pub fn q_sharp(ec: &EmbeddingConstants, d: f64, volume: f64) -> f64 {
    let (p, n) = (ec.p, f64::from(ec.n));
    let inner = (p * p * (p - 1.0).powf(p - 2.0) / (2.0 * d)).powf(1.0 / (p - 1.0)) + p - 1.0;
    inner.powf(1.0 / p) * ec.k_tr2.powf(2.0 / p) * volume.powf(1.0 / (p * n))
}

pub fn species_constants<S: Scalar>(
    m: &ModelNumbers,
    i: usize,
    ec: &EmbeddingConstants,
    s: &Symbols<S>,
    ell: &EllipticConstants<S>,
    data: &dyn DataNorms,
) -> SpeciesConstants<S> {
    let sp: &SpeciesNumbers = &m.species[i];
    let (p, n, t) = (ec.p, f64::from(ec.n), ec.t);
    let vol = data.domain().volume;
    let d = sp.diffusion_min;
    let (ktr2, ktrp) = (ec.k_tr2, ec.k_trp);
    let (sig_lo, sig_hi, alpha) = (m.sigma_min, m.sigma_max, m.seebeck);
    let g = sp.growth;
    let ts = sp.transference * sig_hi;
    let vol_pq = pw(vol, 1.0 - 1.0 / p);
    let root_2d = ((2.0 + d) * vol.powf(1.0 / n)).sqrt();

    let gamma2 = time_norm(data.species_source(i, 2.0), 2.0, t);
    let gammap = time_norm(data.species_source(i, p), p, t);
    let g_cal = (s.sq.clone() * (root_2d * gamma2) + k::<S>((1.0 + d).sqrt() * gammap)) * ktr2;

    let x = s.sq.clone() * (ts + g * (2.0 + d).sqrt() * vol.powf((1.0 + 1.0 / n) / 2.0) * ktr2 * ktr2 * ec.poincare_2);
    let y = k::<S>((1.0 + d).sqrt() * (ts + g * ktr2 * ktrp * vol_pq * ec.poincare_p));
    let q_cal = (k::<S>((1.0 + d).sqrt() * ktrp * vol_pq) + s.sq.clone() * s.tr.clone() * (root_2d * ktr2 * vol_pq))
        * (ktr2 * g);
    let qs = q_sharp(ec, d, vol);

    let a_s = ell.a_sharp.clone();
    let sqd = ((p - 1.0) / d).sqrt();
    let coupling = sig_hi * alpha;
    let x_over = x.clone() * s.qt.clone() * (1.0 / sig_lo);

    let a0 = s.v.clone()
        * ((k::<S>(sp.soret) + a_s.clone() * (ts * sig_hi * alpha)) * sqd
            + (k::<S>(1.0) + a_s.clone() * (ec.poincare_p * coupling)) * (g * qs * ktrp * vol_pq))
        + s.c.clone()
            * (z_generic(s.qt.clone(), d, k(1.0), &s.sq) * sp.soret
                + q_cal.clone()
                + (x_over.clone() + y.clone() * a_s.clone()) * coupling)
            * (1.0 / d);
    let a = s.c.clone() * (x_over + y.clone() * a_s.clone()) * (1.0 / d)
        + a_s * s.v.clone() * (sqd * ts + g * qs * ktrp * vol_pq * ec.poincare_p);

    SpeciesConstants {
        g_cal,
        x,
        y,
        q_cal,
        q_sharp: qs,
        a0,
        a,
    }
}

#[derive(Debug, Clone)]
pub struct ThermalConstants<S> {
    /// ℬ₀
    pub b0: S,
    /// ℬ
    pub b: S,
}

/// `(b_# k_#)^{−1/ℓ}`
pub fn radiation_factor(m: &ModelNumbers) -> f64 {
    (m.radiation_min * m.conductivity_min).powf(-1.0 / m.ell)
}

pub fn thermal_constants<S: Scalar>(
    m: &ModelNumbers,
    s: &Symbols<S>,
    ell: &EllipticConstants<S>,
) -> ThermalConstants<S> {
    let kk = m.conductivity_min;
    let root = (1.0 + kk / m.heat_capacity).sqrt();
    let bracket = s.c.clone() * s.sq.clone() * (1.0 / kk) + s.w.clone() * radiation_factor(m);
    let pre = m.peltier * m.seebeck * m.sigma_max * m.sigma_max / m.sigma_min;
    let b0 = (s.c.clone() * ell.a_sharp.clone() * (root * m.sigma_min / kk) + bracket.clone() * s.qt.clone()) * pre;
    let b = s.c.clone() * (root / kk) * (k::<S>(1.0) + ell.a_sharp.clone() * (m.peltier * m.sigma_max))
        + bracket * s.qt.clone() * (1.0 + m.peltier * m.sigma_max / m.sigma_min);
    ThermalConstants { b0, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::constants::Domain;
    use crate::certificate::data::UniformData;
    use approx::assert_relative_eq;

    fn unit_data(current: f64) -> UniformData {
        UniformData {
            domain: Domain {
                volume: 1.0,
                electrode_area: 1.0,
                wall_area: 1.0,
            },
            current,
            species_sources: vec![0.0],
            initial_concentrations: vec![1.0],
            initial_temperature: 1.0,
            wall_source: 0.0,
            electrode_source: 0.0,
        }
    }

    fn numbers(sigma_min: f64) -> ModelNumbers {
        ModelNumbers {
            sigma_min,
            sigma_max: sigma_min,
            seebeck: 0.0,
            peltier: 0.0,
            conductivity_min: 1.0,
            radiation_min: 1.0,
            ell: 5.0,
            heat_capacity: 1.0,
            species: vec![SpeciesNumbers {
                name: "x".into(),
                diffusion_min: 1.0,
                soret: 0.0,
                dufour: 0.0,
                transference: 0.0,
                growth: 0.0,
            }],
        }
    }

    #[test]
    fn z_factor_values() {
        assert_eq!(z_factor(0.0, 7.0, 0.0, 1.0), 0.0);
        assert_relative_eq!(z_factor(2.0, 3.0, 1.5, 0.0), 2.0 + 3.0);
        assert_relative_eq!(z_factor(1.0, 3.0, 2.0, 1.0), (1.0 + std::f64::consts::E).sqrt() + 4.0);
        assert_relative_eq!(z_factor(1.0, 3.0, 2.0, 1.0), 5.9283, max_relative = 1e-5);
    }

    #[test]
    fn a_sharp_small_case() {
        let ec = EmbeddingConstants::default();
        let m = numbers(3.0);
        let s = Symbols::numeric(&ec, 5.0, 1.0);
        let e = elliptic_constants(&m, &ec, &s, &unit_data(0.0));
        assert_relative_eq!(e.a_sharp, 1.0);
        assert_eq!(e.b_sharp, 0.0);
        let e = elliptic_constants(&m, &ec, &s, &unit_data(2.0));
        assert!(e.b_sharp > 0.0);
    }

    #[test]
    fn decoupled_species_terms_vanish() {
        let ec = EmbeddingConstants::default();
        let m = numbers(3.0);
        let s = Symbols::numeric(&ec, 5.0, 1.0);
        let data = unit_data(1.0);
        let e = elliptic_constants(&m, &ec, &s, &data);
        let sc = species_constants(&m, 0, &ec, &s, &e, &data);
        assert_eq!(sc.x, 0.0);
        assert_eq!(sc.y, 0.0);
        assert_eq!(sc.g_cal, 0.0);
        assert_eq!(sc.q_cal, 0.0);
        assert_eq!(sc.a0, 0.0);
        assert_eq!(sc.a, 0.0);
        let th = thermal_constants(&m, &s, &e);
        assert_eq!(th.b0, 0.0);
        assert!(th.b > 0.0);
    }

    #[test]
    fn q_sharp_at_p2() {
        let ec = EmbeddingConstants::default();
        // ((4 / 2D) + 1)^{1/2} with D = 2 and unit constants.
        assert_relative_eq!(q_sharp(&ec, 2.0, 1.0), 2f64.sqrt());
    }
}
