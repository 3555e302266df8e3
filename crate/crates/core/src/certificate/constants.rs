use serde::{Deserialize, Serialize};

use super::poly::{Poly, Scalar, Symbol};
use crate::error::{Error, Result};

/// Analysis constants that enter the certificate but are not quantified by
/// the model: trace, Poincaré, regularity and exponent parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConstants {
    /// Trace constant K_{2n/(n+1)}.
    pub k_tr2: f64,
    /// Trace constant K_{pn/(n+p−1)}.
    pub k_trp: f64,
    pub poincare_2: f64,
    pub poincare_p: f64,
    /// 𝒞
    pub regularity: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    /// Elliptic trace constant K.
    pub elliptic_trace: f64,
    pub delta: f64,
    pub upsilon: f64,
    pub kappa: f64,
    pub p: f64,
    /// Space dimension of the continuous problem.
    pub n: u8,
    /// Final time T, s.
    pub t: f64,
}

impl Default for EmbeddingConstants {
    fn default() -> Self {
        Self {
            k_tr2: 1.0,
            k_trp: 1.0,
            poincare_2: 1.0,
            poincare_p: 1.0,
            regularity: 1.0,
            m1: 1.0,
            m2: 1.0,
            m3: 1.0,
            elliptic_trace: 1.0,
            delta: 0.5,
            upsilon: 2.0,
            kappa: 2.0,
            p: 2.0,
            n: 3,
            t: 1.0,
        }
    }
}

impl EmbeddingConstants {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k_tr2", self.k_tr2),
            ("k_trp", self.k_trp),
            ("poincare_2", self.poincare_2),
            ("poincare_p", self.poincare_p),
            ("regularity", self.regularity),
            ("m1", self.m1),
            ("m2", self.m2),
            ("m3", self.m3),
            ("elliptic_trace", self.elliptic_trace),
            ("delta", self.delta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("embedding constant {name} must be positive, got {v}")));
            }
        }
        if !(1..=3).contains(&self.n) {
            return Err(Error::Domain(format!("n must be 1, 2 or 3, got {}", self.n)));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::Domain(format!("T must be nonnegative, got {}", self.t)));
        }
        if !(self.upsilon > 1.0 && self.kappa > 1.0) {
            return Err(Error::Domain("υ and ϰ must exceed 1".into()));
        }
        let delta_cap = (2.0 / (f64::from(self.n) * (self.upsilon - 1.0))).min(1.0 / (self.kappa - 1.0));
        if self.delta >= delta_cap {
            return Err(Error::Domain(format!("δ = {} must stay below {delta_cap}", self.delta)));
        }
        if !(self.p >= 2.0 && self.p <= 2.0 + self.delta) {
            return Err(Error::Domain(format!("p = {} outside [2, 2 + δ]", self.p)));
        }
        Ok(())
    }

    /// `1 + T e^T`
    pub fn growth(&self) -> f64 {
        1.0 + self.t * self.t.exp()
    }

    /// `x^e`, exactly 1 when the exponent vanishes.
    pub fn power(x: f64, e: f64) -> f64 {
        if e == 0.0 {
            1.0
        } else {
            x.powf(e)
        }
    }

    /// Numeric value of every symbol for radiation exponent `ell` and
    /// domain volume `volume`.
    pub fn symbol_values(&self, ell: f64, volume: f64) -> [f64; super::poly::SYMBOL_COUNT] {
        let (p, t) = (self.p, self.t);
        let mut v = [0.0; super::poly::SYMBOL_COUNT];
        let half = 0.5 - 1.0 / p;
        v[Symbol::C.index()] = self.regularity;
        v[Symbol::M1.index()] = self.m1;
        v[Symbol::M2.index()] = self.m2;
        v[Symbol::M3.index()] = self.m3;
        v[Symbol::K.index()] = self.elliptic_trace;
        v[Symbol::Sq.index()] = self.growth().sqrt();
        v[Symbol::W.index()] = self.growth().powf(1.0 / ell);
        v[Symbol::V.index()] = (t * ((p - 1.0) * t).exp()).powf(1.0 / p);
        v[Symbol::Tp.index()] = t.powf(1.0 / p);
        v[Symbol::Th.index()] = t.sqrt();
        v[Symbol::Tq.index()] = Self::power(t, 1.0 - 1.0 / p);
        v[Symbol::Qt.index()] = Self::power(t * volume, half);
        v[Symbol::Tr.index()] = Self::power(t, half);
        v
    }
}

/// Measures of the continuous domain the certificate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    /// |Ω|
    pub volume: f64,
    /// |Γ| = |Γ_a| + |Γ_c|
    pub electrode_area: f64,
    /// |Γ_w|
    pub wall_area: f64,
}

/// The constants and time factors as scalars of type `S`.
#[derive(Debug, Clone)]
pub struct Symbols<S> {
    pub c: S,
    pub m1: S,
    pub m2: S,
    pub m3: S,
    pub k: S,
    pub sq: S,
    pub w: S,
    pub v: S,
    pub tp: S,
    pub th: S,
    pub tq: S,
    pub qt: S,
    pub tr: S,
}

impl Symbols<f64> {
    pub fn numeric(ec: &EmbeddingConstants, ell: f64, volume: f64) -> Self {
        let v = ec.symbol_values(ell, volume);
        let at = |s: Symbol| v[s.index()];
        Self {
            c: at(Symbol::C),
            m1: at(Symbol::M1),
            m2: at(Symbol::M2),
            m3: at(Symbol::M3),
            k: at(Symbol::K),
            sq: at(Symbol::Sq),
            w: at(Symbol::W),
            v: at(Symbol::V),
            tp: at(Symbol::Tp),
            th: at(Symbol::Th),
            tq: at(Symbol::Tq),
            qt: at(Symbol::Qt),
            tr: at(Symbol::Tr),
        }
    }
}

impl Symbols<Poly> {
    /// Every constant as an indeterminate; factors whose exponent vanishes
    /// at the given `p` are the constant 1.
    pub fn symbolic(p: f64) -> Self {
        let half_zero = 0.5 - 1.0 / p == 0.0;
        let sym = |s: Symbol, one: bool| if one { Poly::constant(1.0) } else { Poly::symbol(s) };
        Self {
            c: Poly::symbol(Symbol::C),
            m1: Poly::symbol(Symbol::M1),
            m2: Poly::symbol(Symbol::M2),
            m3: Poly::symbol(Symbol::M3),
            k: Poly::symbol(Symbol::K),
            sq: Poly::symbol(Symbol::Sq),
            w: Poly::symbol(Symbol::W),
            v: Poly::symbol(Symbol::V),
            tp: Poly::symbol(Symbol::Tp),
            th: Poly::symbol(Symbol::Th),
            tq: Poly::symbol(Symbol::Tq),
            qt: sym(Symbol::Qt, half_zero),
            tr: sym(Symbol::Tr, half_zero),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        EmbeddingConstants::default().validate().unwrap();
    }

    #[test]
    fn rejects_p_outside_window() {
        let ec = EmbeddingConstants {
            p: 2.6,
            ..Default::default()
        };
        assert!(ec.validate().is_err());
        let ec = EmbeddingConstants {
            delta: 0.7,
            ..Default::default()
        };
        assert!(ec.validate().is_err());
        let ec = EmbeddingConstants {
            m2: 0.0,
            ..Default::default()
        };
        assert!(ec.validate().is_err());
    }

    #[test]
    fn half_exponents_are_exactly_one_at_p2() {
        let ec = EmbeddingConstants::default();
        let v = ec.symbol_values(5.0, 1.234e-3);
        assert_eq!(v[Symbol::Qt.index()], 1.0);
        assert_eq!(v[Symbol::Tr.index()], 1.0);
        assert_eq!(EmbeddingConstants::power(0.37, 0.0), 1.0);
        let s = Symbols::symbolic(2.0);
        assert_eq!(s.qt, Poly::constant(1.0));
    }

    #[test]
    fn time_factors_at_t1() {
        let ec = EmbeddingConstants::default();
        let v = ec.symbol_values(5.0, 1.0);
        let e = std::f64::consts::E;
        assert!((v[Symbol::Sq.index()] - (1.0 + e).sqrt()).abs() < 1e-15);
        assert!((v[Symbol::V.index()] - e.sqrt()).abs() < 1e-15);
        assert!((v[Symbol::W.index()] - (1.0 + e).powf(0.2)).abs() < 1e-15);
    }
}
