//! Mode indices, friction, and the planar trigonometric factors.
//!
//! Each eigenfunction separates as `(U(z) Pu, V(z) Pv, W(z) P)` with
//!
//! ```text
//! Pu = a cos(mx) sin(ny) − b sin(mx) sin(ny) − c sin(mx) cos(ny) + d cos(mx) cos(ny)
//! Pv = a sin(mx) cos(ny) + b cos(mx) cos(ny) − c cos(mx) sin(ny) − d sin(mx) sin(ny)
//! P  = a sin(mx) sin(ny) + b cos(mx) sin(ny) + c cos(mx) cos(ny) + d sin(mx) cos(ny)
//! ```
//!
//! so that `∂x P = m Pu`, `∂y P = n Pv`, `∂x Pu = −m P` and `∂y Pv = −n P`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::planar::{Harmonic, ScalarField};
use crate::profile::{Trig, ZProfile};

/// Smallest friction accepted as `Finite`; use [`Friction::Navier`] below it.
pub const MIN_FINITE_BETA: f64 = 1e-12;

/// Which eigenvalue family an index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PressureClass {
    #[serde(rename = "const")]
    ConstantPressure,
    #[serde(rename = "nonconst")]
    NonConstantPressure,
}

impl PressureClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PressureClass::ConstantPressure => "const",
            PressureClass::NonConstantPressure => "nonconst",
        }
    }
}

impl fmt::Display for PressureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PressureClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const" | "constant" => Ok(PressureClass::ConstantPressure),
            "nonconst" | "nonconstant" => Ok(PressureClass::NonConstantPressure),
            other => Err(Error::InvalidInput(format!(
                "unknown pressure class '{other}' (expected const or nonconst)"
            ))),
        }
    }
}

/// The triple `(m, n, p)` with its pressure class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WaveIndex {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub pclass: PressureClass,
}

impl WaveIndex {
    pub fn new(m: u32, n: u32, p: u32, pclass: PressureClass) -> Result<Self> {
        let idx = Self { m, n, p, pclass };
        idx.validate()?;
        Ok(idx)
    }

    /// A constant-pressure index (always valid).
    pub fn constant(m: u32, n: u32, p: u32) -> Self {
        Self { m, n, p, pclass: PressureClass::ConstantPressure }
    }

    /// A non-constant-pressure index; requires `m² + n² > 0`.
    pub fn nonconstant(m: u32, n: u32, p: u32) -> Result<Self> {
        Self::new(m, n, p, PressureClass::NonConstantPressure)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pclass == PressureClass::NonConstantPressure && self.mu_squared() == 0 {
            return Err(Error::InvalidIndex(
                "the non-constant-pressure family requires m² + n² > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn mu_squared(&self) -> u64 {
        self.m as u64 * self.m as u64 + self.n as u64 * self.n as u64
    }

    pub fn mu(&self) -> f64 {
        (self.mu_squared() as f64).sqrt()
    }

    /// The index with `m` and `n` exchanged.
    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m, ..*self }
    }
}

impl fmt::Display for WaveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m, self.n, self.p, self.pclass)
    }
}

/// Friction coefficient β with the two limits as distinct cases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Friction {
    /// β = 0, perfect slip.
    Navier,
    /// 0 < β < ∞.
    Finite(f64),
    /// β = ∞, no slip.
    Dirichlet,
}

impl Friction {
    pub fn finite(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidFriction(format!("{beta} is not finite; use Dirichlet")));
        }
        if beta < MIN_FINITE_BETA {
            return Err(Error::InvalidFriction(format!(
                "{beta} is below {MIN_FINITE_BETA:e}; use Navier for β = 0"
            )));
        }
        Ok(Friction::Finite(beta))
    }

    /// Maps `0 → Navier`, `∞ → Dirichlet`, anything else to `Finite`.
    pub fn from_value(beta: f64) -> Result<Self> {
        if beta == 0.0 {
            Ok(Friction::Navier)
        } else if beta == f64::INFINITY {
            Ok(Friction::Dirichlet)
        } else {
            Self::finite(beta)
        }
    }

    /// β as a real number (0, β or ∞).
    pub fn value(&self) -> f64 {
        match *self {
            Friction::Navier => 0.0,
            Friction::Finite(b) => b,
            Friction::Dirichlet => f64::INFINITY,
        }
    }
}

impl fmt::Display for Friction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Friction::Navier => f.write_str("navier"),
            Friction::Finite(b) => write!(f, "{b}"),
            Friction::Dirichlet => f.write_str("dirichlet"),
        }
    }
}

impl FromStr for Friction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "navier" => Ok(Friction::Navier),
            "dirichlet" | "inf" | "infinity" => Ok(Friction::Dirichlet),
            t => {
                let beta: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidFriction(format!("cannot parse '{s}'")))?;
                Self::from_value(beta)
            }
        }
    }
}

impl Serialize for Friction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Friction::Navier => s.serialize_str("navier"),
            Friction::Finite(b) => s.serialize_f64(*b),
            Friction::Dirichlet => s.serialize_str("dirichlet"),
        }
    }
}

impl<'de> Deserialize<'de> for Friction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Beta(f64),
            Name(String),
        }
        let parsed = match Repr::deserialize(d)? {
            Repr::Beta(b) => Friction::from_value(b),
            Repr::Name(n) => n.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Coefficients `(a, b, c, d)` of the planar factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PlanarCoeffs {
    pub const A: Self = Self { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const B: Self = Self { a: 0.0, b: 1.0, c: 0.0, d: 0.0 };
    pub const C: Self = Self { a: 0.0, b: 0.0, c: 1.0, d: 0.0 };
    pub const D: Self = Self { a: 0.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let k = Self { a, b, c, d };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.a, self.b, self.c, self.d];
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("planar coefficients must be finite".into()));
        }
        if v.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidInput("planar coefficients are all zero".into()));
        }
        Ok(())
    }

    /// The four unit coefficient vectors.
    pub fn units() -> [Self; 4] {
        [Self::A, Self::B, Self::C, Self::D]
    }
}

/// Velocity or pressure slot of a planar factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    U,
    V,
    W,
}

/// A finite sum of weighted planar harmonics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlanarFactor {
    terms: Vec<(f64, Harmonic)>,
}

impl PlanarFactor {
    fn build(m: u32, n: u32, parts: [(f64, Trig, Trig); 4]) -> Self {
        let terms = parts
            .into_iter()
            .filter(|(w, _, _)| *w != 0.0)
            .filter_map(|(w, px, py)| Harmonic::new(px, m, py, n).map(|h| (w, h)))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, Harmonic)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|(w, h)| w * h.eval(x, y)).sum()
    }

    /// `∫_{T²} factor²` (terms are distinct orthogonal harmonics).
    pub fn l2_weight(&self) -> f64 {
        self.terms.iter().map(|(w, h)| w * w * h.norm_sq()).sum()
    }

    /// `profile(z) · factor(x, y)` as a scalar field.
    pub fn with_profile(&self, profile: &ZProfile) -> ScalarField {
        let mut f = ScalarField::zero();
        for (w, h) in &self.terms {
            f.add_term(*h, profile, *w);
        }
        f
    }
}

/// The three planar factors `(Pu, Pv, P)`.
pub fn planar_factors(index: &WaveIndex, k: &PlanarCoeffs) -> (PlanarFactor, PlanarFactor, PlanarFactor) {
    use Trig::{Cos, Sin};
    let (m, n) = (index.m, index.n);
    let pu = PlanarFactor::build(m, n, [(k.a, Cos, Sin), (-k.b, Sin, Sin), (-k.c, Sin, Cos), (k.d, Cos, Cos)]);
    let pv = PlanarFactor::build(m, n, [(k.a, Sin, Cos), (k.b, Cos, Cos), (-k.c, Cos, Sin), (-k.d, Sin, Sin)]);
    let p = PlanarFactor::build(m, n, [(k.a, Sin, Sin), (k.b, Cos, Sin), (k.c, Cos, Cos), (k.d, Sin, Cos)]);
    (pu, pv, p)
}

/// `∫_{T²} (factor)²` for the chosen component.
pub fn planar_l2_weight(index: &WaveIndex, coeffs: &PlanarCoeffs, component: Component) -> f64 {
    let (pu, pv, p) = planar_factors(index, coeffs);
    match component {
        Component::U => pu.l2_weight(),
        Component::V => pv.l2_weight(),
        Component::W => p.l2_weight(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn constant_factor() {
        let idx = WaveIndex::constant(0, 0, 0);
        let (pu, pv, p) = planar_factors(&idx, &PlanarCoeffs::D);
        assert_abs_diff_eq!(pu.eval(0.3, 1.2), 1.0);
        assert!(pv.is_zero() && p.is_zero());
    }

    #[test]
    fn unit_a_factor() {
        let idx = WaveIndex::constant(1, 1, 0);
        let (pu, pv, p) = planar_factors(&idx, &PlanarCoeffs::A);
        let (x, y) = (0.7, 2.1);
        assert_abs_diff_eq!(pu.eval(x, y), x.cos() * y.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(pv.eval(x, y), x.sin() * y.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.eval(x, y), x.sin() * y.sin(), epsilon = 1e-15);
    }

    #[test]
    fn all_ones_at_origin() {
        let idx = WaveIndex::constant(1, 2, 0);
        let k = PlanarCoeffs::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let (pu, pv, p) = planar_factors(&idx, &k);
        assert_abs_diff_eq!(pu.eval(0.0, 0.0), 1.0);
        assert_abs_diff_eq!(pv.eval(0.0, 0.0), 1.0);
        assert_abs_diff_eq!(p.eval(0.0, 0.0), 1.0);
    }

    #[test]
    fn weights() {
        let w = |m, n, k: PlanarCoeffs| planar_l2_weight(&WaveIndex::constant(m, n, 0), &k, Component::U);
        assert_abs_diff_eq!(w(1, 1, PlanarCoeffs::A), PI * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(w(0, 0, PlanarCoeffs::D), 4.0 * PI * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(w(0, 1, PlanarCoeffs::A), 2.0 * PI * PI, epsilon = 1e-12);
    }

    #[test]
    fn friction_parsing() {
        assert_eq!("navier".parse::<Friction>().unwrap(), Friction::Navier);
        assert_eq!("inf".parse::<Friction>().unwrap(), Friction::Dirichlet);
        assert_eq!("0".parse::<Friction>().unwrap(), Friction::Navier);
        assert_eq!("2.5".parse::<Friction>().unwrap(), Friction::Finite(2.5));
        assert!(Friction::finite(1e-13).is_err());
        assert!(Friction::finite(-1.0).is_err());
        let json = serde_json::to_string(&[Friction::Navier, Friction::Finite(1.0), Friction::Dirichlet]).unwrap();
        assert_eq!(json, r#"["navier",1.0,"dirichlet"]"#);
        let back: Vec<Friction> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[1], Friction::Finite(1.0));
    }

    #[test]
    fn nonconstant_needs_positive_mu() {
        assert!(WaveIndex::nonconstant(0, 0, 1).is_err());
        assert!(WaveIndex::nonconstant(0, 1, 0).is_ok());
    }
}
