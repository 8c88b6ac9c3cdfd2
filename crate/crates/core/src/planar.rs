//! Separable fields on the channel `T² × (-1, 1)`.
//!
//! A [`ScalarField`] is a finite sum `Σ Z_h(z) · h(x, y)` over planar
//! harmonics `h = X(kx·x) · Y(ky·y)` with `X, Y ∈ {cos, sin}`. Each harmonic
//! appears at most once, so distinct terms are L²(T²)-orthogonal and inner
//! products reduce to a planar weight times a wall-normal integral.
//! [`PlanarField`] bundles three scalar fields as a velocity.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::profile::{Trig, ZProfile};

/// A planar basis function `X(kx x) · Y(ky y)`; never identically zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Harmonic {
    pub kx: u32,
    pub px: Trig,
    pub ky: u32,
    pub py: Trig,
}

/// Folds `T(k t)` with signed `k` into a non-negative wavenumber.
fn fold(t: Trig, k: i64) -> Option<(f64, Trig, u32)> {
    match (t, k) {
        (Trig::Sin, 0) => None,
        (Trig::Sin, k) if k < 0 => Some((-1.0, Trig::Sin, (-k) as u32)),
        (t, k) => Some((1.0, t, k.unsigned_abs() as u32)),
    }
}

/// `T1(k1 t) T2(k2 t)` as a sum of two single trig functions.
fn product_1d(t1: Trig, k1: u32, t2: Trig, k2: u32) -> Vec<(f64, Trig, u32)> {
    let (k1, k2) = (k1 as i64, k2 as i64);
    let parts = match (t1, t2) {
        (Trig::Cos, Trig::Cos) => [(0.5, Trig::Cos, k1 - k2), (0.5, Trig::Cos, k1 + k2)],
        (Trig::Sin, Trig::Sin) => [(0.5, Trig::Cos, k1 - k2), (-0.5, Trig::Cos, k1 + k2)],
        (Trig::Sin, Trig::Cos) => [(0.5, Trig::Sin, k1 + k2), (0.5, Trig::Sin, k1 - k2)],
        (Trig::Cos, Trig::Sin) => [(0.5, Trig::Sin, k1 + k2), (-0.5, Trig::Sin, k1 - k2)],
    };
    parts
        .into_iter()
        .filter_map(|(w, t, k)| fold(t, k).map(|(s, t, k)| (w * s, t, k)))
        .collect()
}

/// `∫_0^{2π} T(k t)² dt` for a non-vanishing factor.
fn norm_1d(t: Trig, k: u32) -> f64 {
    match (t, k) {
        (Trig::Cos, 0) => 2.0 * PI,
        _ => PI,
    }
}

impl Harmonic {
    /// Returns `None` when the product vanishes identically (a `sin(0·t)` factor).
    pub fn new(px: Trig, kx: u32, py: Trig, ky: u32) -> Option<Self> {
        let zero = (px == Trig::Sin && kx == 0) || (py == Trig::Sin && ky == 0);
        (!zero).then_some(Self { kx, px, ky, py })
    }

    /// The constant harmonic `1`.
    pub fn constant() -> Self {
        Self { kx: 0, px: Trig::Cos, ky: 0, py: Trig::Cos }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.px.eval(self.kx as f64 * x) * self.py.eval(self.ky as f64 * y)
    }

    pub fn wavenumber_sq(&self) -> f64 {
        (self.kx as u64 * self.kx as u64 + self.ky as u64 * self.ky as u64) as f64
    }

    /// `∫_{T²} h² dx dy`.
    pub fn norm_sq(&self) -> f64 {
        norm_1d(self.px, self.kx) * norm_1d(self.py, self.ky)
    }

    /// `∂x h = factor · h'`, or `None` when the derivative vanishes.
    pub fn dx(&self) -> Option<(f64, Harmonic)> {
        let (sign, px) = self.px.derivative();
        Harmonic::new(px, self.kx, self.py, self.ky).map(|h| (sign * self.kx as f64, h))
    }

    pub fn dy(&self) -> Option<(f64, Harmonic)> {
        let (sign, py) = self.py.derivative();
        Harmonic::new(self.px, self.kx, py, self.ky).map(|h| (sign * self.ky as f64, h))
    }

    /// Product-to-sum expansion of `self · other`.
    pub fn product(&self, other: &Harmonic) -> Vec<(f64, Harmonic)> {
        let xs = product_1d(self.px, self.kx, other.px, other.kx);
        let ys = product_1d(self.py, self.ky, other.py, other.ky);
        let mut out = Vec::with_capacity(4);
        for &(wx, px, kx) in &xs {
            for &(wy, py, ky) in &ys {
                out.push((wx * wy, Harmonic { kx, px, ky, py }));
            }
        }
        out
    }
}

/// Sample points for sup-norm checks: uniform in `x, y`, uniform with endpoints in `z`.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub zs: Vec<f64>,
}

impl SampleGrid {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Self {
        let periodic = |n: usize| (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let zs = (0..nz)
            .map(|i| if nz == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (nz - 1) as f64 })
            .collect();
        Self { xs: periodic(nx), ys: periodic(ny), zs }
    }

    /// The 16 × 16 × 96 grid used by residual checks.
    pub fn standard() -> Self {
        Self::new(16, 16, 96)
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len() * self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A finite sum of separable terms `Z_h(z) · h(x, y)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarField {
    terms: BTreeMap<Harmonic, ZProfile>,
}

impl ScalarField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn separable(h: Harmonic, profile: ZProfile) -> Self {
        let mut f = Self::zero();
        f.add_term(h, &profile, 1.0);
        f
    }

    /// Adds `weight · profile · h`, merging with an existing term.
    pub fn add_term(&mut self, h: Harmonic, profile: &ZProfile, weight: f64) {
        if weight == 0.0 || profile.is_zero() {
            return;
        }
        let merged = match self.terms.get(&h) {
            Some(old) => old.axpy(weight, profile),
            None => profile.scale(weight),
        };
        if merged.is_zero() {
            self.terms.remove(&h);
        } else {
            self.terms.insert(h, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Harmonic, &ZProfile)> {
        self.terms.iter()
    }

    pub fn term(&self, h: &Harmonic) -> Option<&ZProfile> {
        self.terms.get(h)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn axpy(&self, c: f64, other: &ScalarField) -> Self {
        let mut out = self.clone();
        for (h, p) in &other.terms {
            out.add_term(*h, p, c);
        }
        out
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::zero().axpy(c, self)
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        let mut out = Self::zero();
        for (h1, p1) in &self.terms {
            for (h2, p2) in &other.terms {
                let pz = p1.mul(p2);
                for (w, h) in h1.product(h2) {
                    out.add_term(h, &pz, w);
                }
            }
        }
        out
    }

    pub fn dx(&self) -> Self {
        let mut out = Self::zero();
        for (h, p) in &self.terms {
            if let Some((w, dh)) = h.dx() {
                out.add_term(dh, p, w);
            }
        }
        out
    }

    pub fn dy(&self) -> Self {
        let mut out = Self::zero();
        for (h, p) in &self.terms {
            if let Some((w, dh)) = h.dy() {
                out.add_term(dh, p, w);
            }
        }
        out
    }

    pub fn dz(&self) -> Self {
        let mut out = Self::zero();
        for (h, p) in &self.terms {
            out.add_term(*h, &p.derivative(), 1.0);
        }
        out
    }

    /// `∂(self)/∂x_i` for `i ∈ {0, 1, 2}`.
    pub fn partial(&self, axis: usize) -> Self {
        match axis {
            0 => self.dx(),
            1 => self.dy(),
            2 => self.dz(),
            _ => panic!("axis {axis} out of range"),
        }
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for (h, p) in &self.terms {
            let lap = p.derivative().derivative().axpy(-h.wavenumber_sq(), p);
            out.add_term(*h, &lap, 1.0);
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.terms.iter().map(|(h, p)| h.eval(x, y) * p.eval(z)).sum()
    }

    /// Wall trace at `z` as a field with constant profiles.
    pub fn trace(&self, z: f64) -> Self {
        let mut out = Self::zero();
        for (h, p) in &self.terms {
            out.add_term(*h, &ZProfile::constant(p.eval(z)), 1.0);
        }
        out
    }

    /// `∫_Ω self · other`.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        self.terms
            .iter()
            .filter_map(|(h, p)| other.terms.get(h).map(|q| h.norm_sq() * p.integrate_product(q)))
            .sum()
    }

    /// `∫_{T²} self(·, ·, z) · other(·, ·, z)` at a fixed height.
    pub fn inner_at(&self, other: &ScalarField, z: f64) -> f64 {
        self.terms
            .iter()
            .filter_map(|(h, p)| other.terms.get(h).map(|q| h.norm_sq() * p.eval(z) * q.eval(z)))
            .sum()
    }

    /// Values on a sample grid, indexed `[(iz * ny + iy) * nx + ix]`.
    pub fn sample(&self, grid: &SampleGrid) -> Vec<f64> {
        let (nx, ny, nz) = (grid.xs.len(), grid.ys.len(), grid.zs.len());
        let mut out = vec![0.0; nx * ny * nz];
        for (h, p) in &self.terms {
            let zv: Vec<f64> = grid.zs.iter().map(|&z| p.eval(z)).collect();
            let xv: Vec<f64> = grid.xs.iter().map(|&x| h.px.eval(h.kx as f64 * x)).collect();
            let yv: Vec<f64> = grid.ys.iter().map(|&y| h.py.eval(h.ky as f64 * y)).collect();
            for (iz, zval) in zv.iter().enumerate() {
                for (iy, yval) in yv.iter().enumerate() {
                    let zy = zval * yval;
                    let row = &mut out[(iz * ny + iy) * nx..(iz * ny + iy + 1) * nx];
                    for (o, xval) in row.iter_mut().zip(&xv) {
                        *o += zy * xval;
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self, grid: &SampleGrid) -> f64 {
        self.sample(grid).into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A velocity field `(u, v, w)` of separable terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlanarField {
    pub comps: [ScalarField; 3],
}

impl PlanarField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(u: ScalarField, v: ScalarField, w: ScalarField) -> Self {
        Self { comps: [u, v, w] }
    }

    pub fn u(&self) -> &ScalarField {
        &self.comps[0]
    }

    pub fn v(&self) -> &ScalarField {
        &self.comps[1]
    }

    pub fn w(&self) -> &ScalarField {
        &self.comps[2]
    }

    fn map2(&self, other: &PlanarField, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        Self {
            comps: std::array::from_fn(|i| f(&self.comps[i], &other.comps[i])),
        }
    }

    pub fn add(&self, other: &PlanarField) -> Self {
        self.map2(other, ScalarField::add)
    }

    pub fn sub(&self, other: &PlanarField) -> Self {
        self.map2(other, ScalarField::sub)
    }

    pub fn axpy(&self, c: f64, other: &PlanarField) -> Self {
        self.map2(other, |a, b| a.axpy(c, b))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            comps: std::array::from_fn(|i| self.comps[i].scale(c)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarField::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.comps.iter().map(ScalarField::len).sum()
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        std::array::from_fn(|i| self.comps[i].eval(x, y, z))
    }

    pub fn divergence(&self) -> ScalarField {
        self.comps[0].dx().add(&self.comps[1].dy()).add(&self.comps[2].dz())
    }

    pub fn gradient(phi: &ScalarField) -> Self {
        Self::new(phi.dx(), phi.dy(), phi.dz())
    }

    pub fn laplacian(&self) -> Self {
        Self {
            comps: std::array::from_fn(|i| self.comps[i].laplacian()),
        }
    }

    /// `(self · ∇) other`.
    pub fn convect(&self, other: &PlanarField) -> Self {
        let mut out = PlanarField::zero();
        for j in 0..3 {
            if self.comps[j].is_zero() {
                continue;
            }
            for i in 0..3 {
                let d = other.comps[i].partial(j);
                if !d.is_zero() {
                    out.comps[i] = out.comps[i].add(&self.comps[j].mul(&d));
                }
            }
        }
        out
    }

    /// `∫_Ω self · other`.
    pub fn inner(&self, other: &PlanarField) -> f64 {
        (0..3).map(|i| self.comps[i].inner(&other.comps[i])).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Largest component magnitude over a sample grid.
    pub fn max_abs(&self, grid: &SampleGrid) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs(grid)))
    }
}
