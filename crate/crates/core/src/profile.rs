//! Closed-form functions of the wall-normal coordinate.
//!
//! A [`ZProfile`] is a finite sum of atoms `c · z^k · H(κz) · T(σz)` with
//! `H ∈ {cosh, sinh}` and `T ∈ {cos, sin}`. Setting `κ = 0` (with `cosh`)
//! or `σ = 0` (with `cos`) recovers the pure trigonometric, pure hyperbolic,
//! monomial and constant atoms. The set is closed under differentiation and
//! multiplication, so eigenfunction profiles, convective products and
//! Neumann corrections all stay symbolic and evaluate exactly at the walls.

use serde::{Deserialize, Serialize};

use crate::quadrature;

/// Hyperbolic factor of an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hyp {
    Cosh,
    Sinh,
}

/// Trigonometric factor of an atom; also used for planar parities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Trig {
    Cos,
    Sin,
}

impl Hyp {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Hyp::Cosh => t.cosh(),
            Hyp::Sinh => t.sinh(),
        }
    }

    fn derivative(self) -> Hyp {
        match self {
            Hyp::Cosh => Hyp::Sinh,
            Hyp::Sinh => Hyp::Cosh,
        }
    }
}

impl Trig {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Trig::Cos => t.cos(),
            Trig::Sin => t.sin(),
        }
    }

    /// `d/dt T(t) = sign · T'(t)`.
    pub fn derivative(self) -> (f64, Trig) {
        match self {
            Trig::Cos => (-1.0, Trig::Sin),
            Trig::Sin => (1.0, Trig::Cos),
        }
    }
}

/// One term `coef · z^power · hyp(kappa z) · trig(sigma z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub coef: f64,
    pub power: u32,
    pub hyp: Hyp,
    pub kappa: f64,
    pub trig: Trig,
    pub sigma: f64,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

impl Atom {
    pub fn new(coef: f64, power: u32, hyp: Hyp, kappa: f64, trig: Trig, sigma: f64) -> Self {
        Self { coef, power, hyp, kappa, trig, sigma }
    }

    /// Normalizes signs of the frequencies and drops atoms that vanish identically.
    fn canonical(mut self) -> Option<Self> {
        if self.kappa < 0.0 {
            self.kappa = -self.kappa;
            if self.hyp == Hyp::Sinh {
                self.coef = -self.coef;
            }
        }
        if self.sigma < 0.0 {
            self.sigma = -self.sigma;
            if self.trig == Trig::Sin {
                self.coef = -self.coef;
            }
        }
        let vanishes = self.coef == 0.0
            || (self.hyp == Hyp::Sinh && self.kappa == 0.0)
            || (self.trig == Trig::Sin && self.sigma == 0.0);
        (!vanishes).then_some(self)
    }

    fn same_shape(&self, other: &Atom) -> bool {
        self.power == other.power
            && self.hyp == other.hyp
            && self.trig == other.trig
            && close(self.kappa, other.kappa)
            && close(self.sigma, other.sigma)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coef * z.powi(self.power as i32) * self.hyp.eval(self.kappa * z) * self.trig.eval(self.sigma * z)
    }

    fn derivative(&self) -> [Atom; 3] {
        let poly = Atom {
            coef: self.coef * self.power as f64,
            power: self.power.saturating_sub(1),
            ..*self
        };
        let hyp = Atom {
            coef: self.coef * self.kappa,
            hyp: self.hyp.derivative(),
            ..*self
        };
        let (sign, trig) = self.trig.derivative();
        let tri = Atom {
            coef: sign * self.coef * self.sigma,
            trig,
            ..*self
        };
        [poly, hyp, tri]
    }

    fn product(&self, other: &Atom) -> [Atom; 4] {
        let (k1, k2) = (self.kappa, other.kappa);
        let (s1, s2) = (self.sigma, other.sigma);
        // H1(k1 z) H2(k2 z) = w_p H(k1+k2) + w_m H(k1-k2)
        let (hyp, hp, hm) = match (self.hyp, other.hyp) {
            (Hyp::Cosh, Hyp::Cosh) => (Hyp::Cosh, 0.5, 0.5),
            (Hyp::Sinh, Hyp::Sinh) => (Hyp::Cosh, 0.5, -0.5),
            (Hyp::Sinh, Hyp::Cosh) => (Hyp::Sinh, 0.5, 0.5),
            (Hyp::Cosh, Hyp::Sinh) => (Hyp::Sinh, 0.5, -0.5),
        };
        let (trig, tp, tm) = match (self.trig, other.trig) {
            (Trig::Cos, Trig::Cos) => (Trig::Cos, 0.5, 0.5),
            (Trig::Sin, Trig::Sin) => (Trig::Cos, -0.5, 0.5),
            (Trig::Sin, Trig::Cos) => (Trig::Sin, 0.5, 0.5),
            (Trig::Cos, Trig::Sin) => (Trig::Sin, 0.5, -0.5),
        };
        let c = self.coef * other.coef;
        let power = self.power + other.power;
        let mk = |w: f64, kappa: f64, sigma: f64| Atom { coef: c * w, power, hyp, kappa, trig, sigma };
        [
            mk(hp * tp, k1 + k2, s1 + s2),
            mk(hp * tm, k1 + k2, s1 - s2),
            mk(hm * tp, k1 - k2, s1 + s2),
            mk(hm * tm, k1 - k2, s1 - s2),
        ]
    }
}

/// A finite linear combination of [`Atom`]s, kept in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZProfile {
    atoms: Vec<Atom>,
}

impl ZProfile {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut merged: Vec<(Atom, f64)> = Vec::new();
        for atom in atoms.into_iter().filter_map(Atom::canonical) {
            match merged.iter_mut().find(|(m, _)| m.same_shape(&atom)) {
                Some((m, scale)) => {
                    m.coef += atom.coef;
                    *scale += atom.coef.abs();
                }
                None => merged.push((atom, atom.coef.abs())),
            }
        }
        // Cancellation down to rounding level is treated as exact.
        let mut atoms: Vec<Atom> = merged
            .into_iter()
            .filter(|(a, scale)| a.coef.abs() > 4.0 * f64::EPSILON * scale)
            .map(|(a, _)| a)
            .collect();
        atoms.sort_by(|a, b| {
            (a.power, a.hyp, a.trig)
                .cmp(&(b.power, b.hyp, b.trig))
                .then(a.kappa.total_cmp(&b.kappa))
                .then(a.sigma.total_cmp(&b.sigma))
        });
        Self { atoms }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_atoms([Atom::new(c, 0, Hyp::Cosh, 0.0, Trig::Cos, 0.0)])
    }

    /// `c · z^k`.
    pub fn monomial(c: f64, k: u32) -> Self {
        Self::from_atoms([Atom::new(c, k, Hyp::Cosh, 0.0, Trig::Cos, 0.0)])
    }

    pub fn cos(sigma: f64) -> Self {
        Self::from_atoms([Atom::new(1.0, 0, Hyp::Cosh, 0.0, Trig::Cos, sigma)])
    }

    pub fn sin(sigma: f64) -> Self {
        Self::from_atoms([Atom::new(1.0, 0, Hyp::Cosh, 0.0, Trig::Sin, sigma)])
    }

    pub fn cosh(kappa: f64) -> Self {
        Self::from_atoms([Atom::new(1.0, 0, Hyp::Cosh, kappa, Trig::Cos, 0.0)])
    }

    pub fn sinh(kappa: f64) -> Self {
        Self::from_atoms([Atom::new(1.0, 0, Hyp::Sinh, kappa, Trig::Cos, 0.0)])
    }

    pub fn trig(trig: Trig, sigma: f64) -> Self {
        match trig {
            Trig::Cos => Self::cos(sigma),
            Trig::Sin => Self::sin(sigma),
        }
    }

    pub fn hyp(hyp: Hyp, kappa: f64) -> Self {
        match hyp {
            Hyp::Cosh => Self::cosh(kappa),
            Hyp::Sinh => Self::sinh(kappa),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.atoms.iter().map(|a| a.eval(z)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_atoms(self.atoms.iter().map(|a| Atom { coef: a.coef * c, ..*a }))
    }

    pub fn add(&self, other: &ZProfile) -> Self {
        Self::from_atoms(self.atoms.iter().chain(other.atoms.iter()).copied())
    }

    /// `self + c · other`.
    pub fn axpy(&self, c: f64, other: &ZProfile) -> Self {
        Self::from_atoms(
            self.atoms
                .iter()
                .copied()
                .chain(other.atoms.iter().map(|a| Atom { coef: a.coef * c, ..*a })),
        )
    }

    pub fn sub(&self, other: &ZProfile) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn mul(&self, other: &ZProfile) -> Self {
        Self::from_atoms(
            self.atoms
                .iter()
                .flat_map(|a| other.atoms.iter().flat_map(move |b| a.product(b))),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::from_atoms(self.atoms.iter().flat_map(Atom::derivative))
    }

    /// Largest frequency (trigonometric or hyperbolic) present.
    pub fn max_frequency(&self) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc.max(a.kappa).max(a.sigma))
    }

    /// Largest absolute coefficient, a cheap size indicator.
    pub fn max_coef(&self) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc.max(a.coef.abs()))
    }

    /// `∫_{-1}^{1} self · other dz` by Gauss–Legendre quadrature.
    pub fn integrate_product(&self, other: &ZProfile) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        let rule = quadrature::rule_for_frequency(self.max_frequency() + other.max_frequency());
        rule.integrate(|z| self.eval(z) * other.eval(z))
    }

    /// `∫_{-1}^{1} self dz` by Gauss–Legendre quadrature.
    pub fn integrate(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        quadrature::rule_for_frequency(self.max_frequency()).integrate(|z| self.eval(z))
    }
}
