//! Scalars for the certificate formulas: plain `f64`, or sparse polynomials
//! in the analysis constants and time factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

/// Indeterminates carried in symbolic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Regularity constant 𝒞.
    C,
    M1,
    M2,
    M3,
    /// Elliptic trace constant K.
    K,
    /// `√(1 + T e^T)`
    Sq,
    /// `(1 + T e^T)^{1/ℓ}`
    W,
    /// `(T e^{(p−1)T})^{1/p}`
    V,
    /// `T^{1/p}`
    Tp,
    /// `T^{1/2}`
    Th,
    /// `T^{1−1/p}`
    Tq,
    /// `|Q_T|^{1/2−1/p}`
    Qt,
    /// `T^{1/2−1/p}`
    Tr,
}

pub const SYMBOL_COUNT: usize = 13;

impl Symbol {
    pub const ALL: [Symbol; SYMBOL_COUNT] = [
        Symbol::C,
        Symbol::M1,
        Symbol::M2,
        Symbol::M3,
        Symbol::K,
        Symbol::Sq,
        Symbol::W,
        Symbol::V,
        Symbol::Tp,
        Symbol::Th,
        Symbol::Tq,
        Symbol::Qt,
        Symbol::Tr,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Symbol::C => "𝒞",
            Symbol::M1 => "M₁",
            Symbol::M2 => "M₂",
            Symbol::M3 => "M₃",
            Symbol::K => "K",
            Symbol::Sq => "√(1+Teᵀ)",
            Symbol::W => "(1+Teᵀ)^{1/ℓ}",
            Symbol::V => "(Te^{(p−1)T})^{1/p}",
            Symbol::Tp => "T^{1/p}",
            Symbol::Th => "T^{1/2}",
            Symbol::Tq => "T^{1−1/p}",
            Symbol::Qt => "|Q_T|^{1/2−1/p}",
            Symbol::Tr => "T^{1/2−1/p}",
        }
    }
}

/// Arithmetic needed by the certificate formulas.
pub trait Scalar: Clone + fmt::Debug + Add<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> {
    fn constant(v: f64) -> Self;
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
}

pub type Exponents = [u8; SYMBOL_COUNT];

/// Sparse polynomial with `f64` coefficients; monomials are kept in a fixed
/// order so printing and comparison are deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Exponents, f64>,
}

impl Poly {
    pub fn symbol(s: Symbol) -> Self {
        let mut e = [0u8; SYMBOL_COUNT];
        e[s.index()] = 1;
        Self {
            terms: BTreeMap::from([(e, 1.0)]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial `Π s^k`; 0 when absent.
    pub fn coefficient(&self, monomial: &[(Symbol, u8)]) -> f64 {
        self.terms.get(&exponents(monomial)).copied().unwrap_or(0.0)
    }

    /// Substitutes values for every symbol.
    pub fn evaluate(&self, values: &[f64; SYMBOL_COUNT]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(values)
                    .fold(*c, |acc, (k, v)| acc * v.powi(i32::from(*k)))
            })
            .sum()
    }

    fn insert(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        }
    }
}

/// Exponent vector of a monomial given as `(symbol, power)` pairs.
pub fn exponents(monomial: &[(Symbol, u8)]) -> Exponents {
    let mut e = [0u8; SYMBOL_COUNT];
    for &(s, k) in monomial {
        e[s.index()] += k;
    }
    e
}

pub fn monomial_label(e: &Exponents) -> String {
    let parts: Vec<String> = Symbol::ALL
        .iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(s, k)| if *k == 1 { s.label().to_string() } else { format!("{}^{k}", s.label()) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

impl Scalar for Poly {
    fn constant(v: f64) -> Self {
        let mut p = Poly::default();
        p.insert([0; SYMBOL_COUNT], v);
        p
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            self.insert(e, c);
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.insert(e, ca * cb);
            }
        }
        out
    }
}

impl Mul<f64> for Poly {
    type Output = Poly;
    fn mul(mut self, rhs: f64) -> Poly {
        if rhs == 0.0 {
            return Poly::default();
        }
        for c in self.terms.values_mut() {
            *c *= rhs;
        }
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:.6e}·{}", monomial_label(e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn arithmetic() {
        let c = Poly::symbol(Symbol::C);
        let m = Poly::symbol(Symbol::M1);
        let p = (c.clone() + Poly::constant(2.0)) * (m.clone() * 3.0 + Poly::constant(1.0));
        assert_eq!(p.coefficient(&[(Symbol::C, 1), (Symbol::M1, 1)]), 3.0);
        assert_eq!(p.coefficient(&[(Symbol::C, 1)]), 1.0);
        assert_eq!(p.coefficient(&[(Symbol::M1, 1)]), 6.0);
        assert_eq!(p.coefficient(&[]), 2.0);
        assert_eq!(p.len(), 4);
        let mut v = [1.0; SYMBOL_COUNT];
        v[Symbol::C.index()] = 2.0;
        v[Symbol::M1.index()] = 5.0;
        assert_relative_eq!(p.evaluate(&v), 4.0 * 16.0);
    }

    #[test]
    fn cancellation_removes_terms() {
        let c = Poly::symbol(Symbol::C);
        let z = c.clone() + c * -1.0;
        assert!(z.is_empty());
        assert_eq!(format!("{z}"), "0");
        assert!((Poly::symbol(Symbol::K) * 0.0).is_empty());
    }

    #[test]
    fn labels() {
        let e = exponents(&[(Symbol::C, 1), (Symbol::M2, 2)]);
        assert_eq!(monomial_label(&e), "𝒞·M₂^2");
        assert_eq!(monomial_label(&[0; SYMBOL_COUNT]), "1");
    }
}
