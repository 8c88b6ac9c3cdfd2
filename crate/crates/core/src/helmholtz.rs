//! Convective products, the Neumann profile solver and the Leray projection.
//!
//! The scalar potential of the Helmholtz–Weyl split separates per planar
//! harmonic `h` with `|h|² = q²` into `υ″ − q²υ = (∇·F)_h`, `υ′(±1) = F_h·ẑ(±1)`,
//! solved in closed form on the atom basis.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{build_mode, EigenMode};
use crate::planar::{Harmonic, PlanarField, ScalarField};
use crate::profile::{Atom, Hyp, Trig, ZProfile};
use crate::quadrature::{self, QuadratureRule};
use crate::spectral::{Friction, PlanarCoeffs, PressureClass, WaveIndex};

/// `(A · ∇) B` for the velocities of two modes.
pub fn convect(a: &EigenMode, b: &EigenMode) -> PlanarField {
    a.velocity().convect(&b.velocity())
}

/// A complex polynomial times `exp(r z)`.
struct ExpPoly {
    r: Complex64,
    poly: Vec<Complex64>,
}

fn is_resonant(c0: Complex64, r: Complex64) -> bool {
    c0.norm() < 1e-12 * r.norm_sqr().max(1.0)
}

/// `P` with `(D² − q²)(P e^{rz}) = z^k e^{rz}`, i.e. `P″ + 2rP′ + (r² − q²)P = z^k`.
fn particular_poly(r: Complex64, q2: f64, k: usize) -> Vec<Complex64> {
    let c0 = r * r - q2;
    let zero = Complex64::new(0.0, 0.0);
    if !is_resonant(c0, r) {
        let mut p = vec![zero; k + 1];
        for j in (0..=k).rev() {
            let mut acc = if j == k { Complex64::new(1.0, 0.0) } else { zero };
            if j + 1 <= k {
                acc -= 2.0 * r * (j as f64 + 1.0) * p[j + 1];
            }
            if j + 2 <= k {
                acc -= (j as f64 + 2.0) * (j as f64 + 1.0) * p[j + 2];
            }
            p[j] = acc / c0;
        }
        p
    } else if r.norm() > 1e-12 {
        // Coefficient of z^j: 2r(j+1)p_{j+1} + (j+2)(j+1)p_{j+2} = δ_{jk}; p_0 = 0.
        let mut p = vec![zero; k + 2];
        for j in (0..=k).rev() {
            let mut acc = if j == k { Complex64::new(1.0, 0.0) } else { zero };
            if j + 2 <= k + 1 {
                acc -= (j as f64 + 2.0) * (j as f64 + 1.0) * p[j + 2];
            }
            p[j + 1] = acc / (2.0 * r * (j as f64 + 1.0));
        }
        p
    } else {
        let mut p = vec![zero; k + 3];
        p[k + 2] = Complex64::new(1.0 / ((k as f64 + 1.0) * (k as f64 + 2.0)), 0.0);
        p
    }
}

/// Splits an atom into complex exponentials `w · z^k · e^{rz}`.
fn exponentials(a: &Atom) -> Vec<(Complex64, Complex64)> {
    let half = Complex64::new(0.5, 0.0);
    let hyp = match a.hyp {
        Hyp::Cosh => [(a.kappa, half), (-a.kappa, half)],
        Hyp::Sinh => [(a.kappa, half), (-a.kappa, -half)],
    };
    let trig = match a.trig {
        Trig::Cos => [(a.sigma, half), (-a.sigma, half)],
        Trig::Sin => [(a.sigma, Complex64::new(0.0, -0.5)), (-a.sigma, Complex64::new(0.0, 0.5))],
    };
    let mut out = Vec::with_capacity(4);
    for &(k, wh) in &hyp {
        for &(s, wt) in &trig {
            out.push((Complex64::new(k, s), a.coef * wh * wt));
        }
    }
    out
}

/// Real part of `Σ c_j z^j e^{rz}` as atoms.
fn real_atoms(term: &ExpPoly, out: &mut Vec<Atom>) {
    let (kappa, sigma) = (term.r.re, term.r.im);
    for (j, c) in term.poly.iter().enumerate() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for hyp in [Hyp::Cosh, Hyp::Sinh] {
            out.push(Atom::new(c.re, j as u32, hyp, kappa, Trig::Cos, sigma));
            out.push(Atom::new(-c.im, j as u32, hyp, kappa, Trig::Sin, sigma));
        }
    }
}

/// A particular solution of `υ″ − q²υ = rhs`.
fn particular(rhs: &ZProfile, q2: f64) -> ZProfile {
    let mut atoms = Vec::new();
    for a in rhs.atoms() {
        for (r, w) in exponentials(a) {
            let poly = particular_poly(r, q2, a.power as usize).into_iter().map(|c| c * w).collect();
            real_atoms(&ExpPoly { r, poly }, &mut atoms);
        }
    }
    ZProfile::from_atoms(atoms)
}

/// Solves `υ″ − k2·υ = rhs` with `υ′(−1) = flux_lo`, `υ′(1) = flux_hi`.
///
/// For `k2 = 0` the solution has zero mean and the data must satisfy
/// `∫ rhs = flux_hi − flux_lo`.
pub fn neumann_profile_flux(rhs: &ZProfile, k2: f64, flux_lo: f64, flux_hi: f64) -> Result<ZProfile> {
    if !(k2 >= 0.0 && k2.is_finite()) {
        return Err(Error::InvalidInput(format!("k2 must be a non-negative finite real, got {k2}")));
    }
    let up = particular(rhs, k2);
    let dp = up.derivative();
    let gap_hi = flux_hi - dp.eval(1.0);
    let gap_lo = flux_lo - dp.eval(-1.0);
    if k2 > 0.0 {
        let q = k2.sqrt();
        let a = (gap_hi - gap_lo) / (2.0 * q * q.sinh());
        let b = (gap_hi + gap_lo) / (2.0 * q * q.cosh());
        Ok(up.axpy(a, &ZProfile::cosh(q)).axpy(b, &ZProfile::sinh(q)))
    } else {
        let scale = 1.0 + flux_hi.abs() + flux_lo.abs() + rhs.max_coef();
        if (gap_hi - gap_lo).abs() > 1e-9 * scale {
            return Err(Error::InvalidInput(format!(
                "incompatible Neumann data: ∫rhs differs from the flux jump by {:e}",
                gap_lo - gap_hi
            )));
        }
        let sol = up.axpy(0.5 * (gap_hi + gap_lo), &ZProfile::monomial(1.0, 1));
        let mean = sol.integrate() / 2.0;
        Ok(sol.axpy(-mean, &ZProfile::constant(1.0)))
    }
}

/// Solves `υ″ − k2·υ = rhs` with `υ′(±1) = 0`.
pub fn neumann_profile(rhs: &ZProfile, k2: f64) -> Result<ZProfile> {
    neumann_profile_flux(rhs, k2, 0.0, 0.0)
}

/// The potential `φ` with `Δφ = ∇·F` and `∂_ν φ = F·ν` on the walls.
pub fn scalar_potential(field: &PlanarField) -> Result<ScalarField> {
    let div = field.divergence();
    let mut harmonics: Vec<Harmonic> = div.terms().map(|(h, _)| *h).collect();
    harmonics.extend(field.w().terms().map(|(h, _)| *h));
    harmonics.sort();
    harmonics.dedup();
    let mut phi = ScalarField::zero();
    for h in harmonics {
        let rhs = div.term(&h).cloned().unwrap_or_default();
        let (lo, hi) = field.w().term(&h).map_or((0.0, 0.0), |w| (w.eval(-1.0), w.eval(1.0)));
        let profile = neumann_profile_flux(&rhs, h.wavenumber_sq(), lo, hi)?;
        phi.add_term(h, &profile, 1.0);
    }
    Ok(phi)
}

/// Projection onto divergence-free fields with zero normal trace: `F − ∇φ`.
pub fn leray_project(field: &PlanarField) -> Result<PlanarField> {
    let phi = scalar_potential(field)?;
    Ok(field.sub(&PlanarField::gradient(&phi)))
}

/// `∫_Ω (A·∇)B · C` by analytic planar integrals and `z`-quadrature.
pub fn triple_product(a: &EigenMode, b: &EigenMode, c: &EigenMode) -> f64 {
    convect(a, b).inner(&c.velocity())
}

fn coeff_eq(x: f64, y: f64, scale: f64) -> bool {
    (x - y).abs() <= 1e-12 * scale
}

fn coeff_scale(k: &PlanarCoeffs) -> f64 {
    k.a.abs().max(k.b.abs()).max(k.c.abs()).max(k.d.abs())
}

/// The single-mode hypothesis `a = −c`, `b = d`.
pub fn satisfies_hp(k: &PlanarCoeffs) -> bool {
    let s = coeff_scale(k);
    coeff_eq(k.a, -k.c, s) && coeff_eq(k.b, k.d, s)
}

/// The three coefficient patterns under which the projected nonlinearity
/// vanishes on a whole family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hp3Branch {
    /// `c = d = 0`.
    CD,
    /// `c = b = 0`.
    CB,
    /// `c = a = 0`.
    CA,
}

impl Hp3Branch {
    pub const ALL: [Hp3Branch; 3] = [Hp3Branch::CD, Hp3Branch::CB, Hp3Branch::CA];

    pub fn admits(self, k: &PlanarCoeffs) -> bool {
        let s = coeff_scale(k);
        let zero = |v: f64| v.abs() <= 1e-12 * s;
        zero(k.c)
            && match self {
                Hp3Branch::CD => zero(k.d),
                Hp3Branch::CB => zero(k.b),
                Hp3Branch::CA => zero(k.a),
            }
    }

    /// The unit coefficient vectors spanning the branch.
    pub fn units(self) -> [PlanarCoeffs; 2] {
        match self {
            Hp3Branch::CD => [PlanarCoeffs::A, PlanarCoeffs::B],
            Hp3Branch::CB => [PlanarCoeffs::A, PlanarCoeffs::D],
            Hp3Branch::CA => [PlanarCoeffs::B, PlanarCoeffs::D],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hp3Branch::CD => "c=d=0",
            Hp3Branch::CB => "c=b=0",
            Hp3Branch::CA => "c=a=0",
        }
    }
}

/// A branch admitted by every coefficient vector, if any.
pub fn common_hp3_branch(coeffs: &[PlanarCoeffs]) -> Option<Hp3Branch> {
    Hp3Branch::ALL.into_iter().find(|b| coeffs.iter().all(|k| b.admits(k)))
}

type Sampled = BTreeMap<Harmonic, Vec<f64>>;

fn sample_scalar(f: &ScalarField, rule: &QuadratureRule) -> Sampled {
    f.terms()
        .map(|(h, p)| (*h, rule.nodes.iter().map(|&z| p.eval(z)).collect()))
        .collect()
}

/// A velocity and its gradient sampled at quadrature nodes, for fast
/// triple-product tensors.
pub struct SampledMode {
    vel: [Sampled; 3],
    grad: [[Sampled; 3]; 3],
}

impl SampledMode {
    pub fn new(field: &PlanarField, rule: &QuadratureRule) -> Self {
        Self {
            vel: std::array::from_fn(|i| sample_scalar(&field.comps[i], rule)),
            grad: std::array::from_fn(|i| std::array::from_fn(|j| sample_scalar(&field.comps[i].partial(j), rule))),
        }
    }
}

/// `(A·∇)B` on the quadrature nodes.
pub struct SampledConvection {
    comps: [Sampled; 3],
}

impl SampledConvection {
    pub fn new(a: &SampledMode, b: &SampledMode) -> Self {
        let mut comps: [Sampled; 3] = Default::default();
        for (i, comp) in comps.iter_mut().enumerate() {
            for j in 0..3 {
                for (ha, sa) in &a.vel[j] {
                    for (hb, sb) in &b.grad[i][j] {
                        for (w, h) in ha.product(hb) {
                            let slot = comp.entry(h).or_insert_with(|| vec![0.0; sa.len()]);
                            for ((s, x), y) in slot.iter_mut().zip(sa).zip(sb) {
                                *s += w * x * y;
                            }
                        }
                    }
                }
            }
        }
        Self { comps }
    }

    /// `∫_Ω (A·∇)B · C`.
    pub fn inner(&self, c: &SampledMode, rule: &QuadratureRule) -> f64 {
        let mut total = 0.0;
        for i in 0..3 {
            for (h, sc) in &c.vel[i] {
                if let Some(s) = self.comps[i].get(h) {
                    let z: f64 = rule.weights.iter().zip(s).zip(sc).map(|((w, x), y)| w * x * y).sum();
                    total += h.norm_sq() * z;
                }
            }
        }
        total
    }
}

/// A Gauss–Legendre rule resolving triple products of the given modes.
pub fn rule_for_modes(modes: &[EigenMode]) -> &'static QuadratureRule {
    let f = modes
        .iter()
        .map(|m| m.u_profile.max_frequency().max(m.v_profile.max_frequency()).max(m.w_profile.max_frequency()))
        .fold(0.0, f64::max);
    quadrature::rule_for_frequency(3.0 * f)
}

/// `N[i][j][k] = ∫ (u_i·∇)u_j · u_k`, flattened row-major.
pub fn triple_tensor(modes: &[EigenMode]) -> Vec<f64> {
    use rayon::prelude::*;
    let k = modes.len();
    let rule = rule_for_modes(modes);
    let sampled: Vec<SampledMode> = modes.iter().map(|m| SampledMode::new(&m.velocity(), rule)).collect();
    (0..k * k)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let conv = SampledConvection::new(&sampled[ij / k], &sampled[ij % k]);
            sampled.iter().map(move |c| conv.inner(c, rule)).collect::<Vec<_>>()
        })
        .collect()
}

/// Largest triple product found per branch in an exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hp3Sweep {
    pub friction: Friction,
    pub modes: usize,
    pub branches: Vec<Hp3BranchResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hp3BranchResult {
    pub branch: Hp3Branch,
    pub triples: usize,
    pub max_abs: f64,
}

/// Constant-pressure modes with `m, n ≤ max_mn`, `p ≤ max_p` under `friction`,
/// built with each unit coefficient vector in `units`.
pub fn unit_modes(friction: Friction, max_mn: u32, max_p: u32, units: &[PlanarCoeffs]) -> Result<Vec<EigenMode>> {
    let mut out = Vec::new();
    for m in 0..=max_mn {
        for n in 0..=max_mn {
            for p in 0..=max_p {
                let idx = WaveIndex { m, n, p, pclass: PressureClass::ConstantPressure };
                if friction == Friction::Dirichlet && p == 0 {
                    continue;
                }
                for k in units {
                    match build_mode(&idx, friction, k) {
                        Ok(mode) => out.push(mode),
                        Err(Error::ZeroMode(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive check that triple products vanish on each hp3 branch.
///
/// Triple products are trilinear in the coefficient vectors, so checking
/// every triple of unit-coefficient modes within a branch covers all
/// coefficient choices in that branch, including different coefficients
/// per mode.
pub fn hp3_sweep(friction: Friction, max_mn: u32, max_p: u32) -> Result<Hp3Sweep> {
    use rayon::prelude::*;
    let modes = unit_modes(friction, max_mn, max_p, &[PlanarCoeffs::A, PlanarCoeffs::B, PlanarCoeffs::D])?;
    let rule = rule_for_modes(&modes);
    let sampled: Vec<SampledMode> = modes.iter().map(|m| SampledMode::new(&m.velocity(), rule)).collect();
    let member: Vec<[bool; 3]> = modes
        .iter()
        .map(|m| std::array::from_fn(|b| Hp3Branch::ALL[b].admits(&m.coeffs)))
        .collect();
    let k = modes.len();
    let per_pair: Vec<[(usize, f64); 3]> = (0..k * k)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / k, ij % k);
            let mut acc = [(0usize, 0.0f64); 3];
            let live: Vec<usize> = (0..3).filter(|&b| member[i][b] && member[j][b]).collect();
            if live.is_empty() {
                return acc;
            }
            let conv = SampledConvection::new(&sampled[i], &sampled[j]);
            for (l, c) in sampled.iter().enumerate() {
                let t = conv.inner(c, rule).abs();
                for &b in &live {
                    if member[l][b] {
                        acc[b].0 += 1;
                        acc[b].1 = acc[b].1.max(t);
                    }
                }
            }
            acc
        })
        .collect();
    let branches = Hp3Branch::ALL
        .iter()
        .enumerate()
        .map(|(b, &branch)| Hp3BranchResult {
            branch,
            triples: per_pair.iter().map(|a| a[b].0).sum(),
            max_abs: per_pair.iter().fold(0.0, |m, a| m.max(a[b].1)),
        })
        .collect();
    Ok(Hp3Sweep { friction, modes: k, branches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_gives_zero() {
        assert!(neumann_profile(&ZProfile::zero(), 5.0).unwrap().is_zero());
    }

    #[test]
    fn polynomial_rhs() {
        let rhs = ZProfile::monomial(1.0, 2);
        let u = neumann_profile(&rhs, 2.0).unwrap();
        let res = u.derivative().derivative().axpy(-2.0, &u).sub(&rhs);
        for z in [-1.0, -0.3, 0.4, 1.0] {
            assert!(res.eval(z).abs() < 1e-12);
        }
        assert!(u.derivative().eval(1.0).abs() < 1e-12);
        assert!(u.derivative().eval(-1.0).abs() < 1e-12);
    }

    #[test]
    fn resonant_hyperbolic_rhs() {
        let rhs = ZProfile::cosh(2.0);
        let u = neumann_profile(&rhs, 4.0).unwrap();
        let res = u.derivative().derivative().axpy(-4.0, &u).sub(&rhs);
        for z in [-0.9, 0.0, 0.7] {
            assert!(res.eval(z).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_wavenumber_requires_compatibility() {
        assert!(neumann_profile(&ZProfile::constant(1.0), 0.0).is_err());
        let u = neumann_profile(&ZProfile::cos(std::f64::consts::PI), 0.0).unwrap();
        assert!(u.integrate().abs() < 1e-13);
    }

    #[test]
    fn hp_predicates() {
        assert!(satisfies_hp(&PlanarCoeffs::new(1.0, 2.0, -1.0, 2.0).unwrap()));
        assert!(!satisfies_hp(&PlanarCoeffs::A));
        assert_eq!(common_hp3_branch(&[PlanarCoeffs::A, PlanarCoeffs::B]), Some(Hp3Branch::CD));
        assert_eq!(common_hp3_branch(&[PlanarCoeffs::C]), None);
    }
}
