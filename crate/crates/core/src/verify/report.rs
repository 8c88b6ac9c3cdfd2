//! Verification suites producing machine-readable check records.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    analytic_profile_eigs, boundary_residual, divergence_residual, divergence_residual_field, fd_oracle_eigs,
    gram_defect, gram_matrix, inner_product, pde_residual, poincare_check, strain_identity,
};
use crate::error::{Error, Result};
use crate::helmholtz::{self, convect, leray_project, triple_product};
use crate::modes::{build_mode, eigenspace_basis, enumerate_spectrum, EigenMode, Family};
use crate::planar::{Harmonic, PlanarField, SampleGrid, ScalarField};
use crate::profile::{Trig, ZProfile};
use crate::spectral::{Friction, PlanarCoeffs, PressureClass, WaveIndex};

/// One verification outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub index: Option<String>,
    pub friction: Option<Friction>,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: &str, index: Option<String>, friction: Option<Friction>, value: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            index,
            friction,
            value,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Modes,
    Helmholtz,
    Oracle,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modes" => Ok(Suite::Modes),
            "helmholtz" => Ok(Suite::Helmholtz),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!(
                "unknown suite '{other}' (expected modes, helmholtz, oracle or all)"
            ))),
        }
    }
}

/// Suite parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub friction: Friction,
    /// Bound on `m, n` in mode sweeps.
    pub max_index: u32,
    /// Bound on `p` in mode sweeps.
    pub max_p: u32,
    /// Replaces every tolerance when set.
    pub tol: Option<f64>,
    /// Oracle grid size.
    pub grid: usize,
    /// Also measure the oracle convergence order on 500/1000/2000 cells.
    pub convergence: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            friction: Friction::Finite(1.0),
            max_index: 4,
            max_p: 3,
            tol: None,
            grid: 2000,
            convergence: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub friction: Friction,
    pub seed: u64,
    pub pass: bool,
    pub records: Vec<CheckRecord>,
}

struct Recorder<'a> {
    opts: &'a SuiteOptions,
    records: Vec<CheckRecord>,
}

impl Recorder<'_> {
    fn push(&mut self, check: &str, index: Option<String>, value: f64, tol: f64) {
        let tol = self.opts.tol.unwrap_or(tol);
        self.records.push(CheckRecord::new(check, index, Some(self.opts.friction), value, tol));
    }

    /// A record that passes when `value ≥ floor`.
    fn push_floor(&mut self, check: &str, index: Option<String>, value: f64, floor: f64) {
        let mut r = CheckRecord::new(check, index, Some(self.opts.friction), value, floor);
        r.pass = value.is_finite() && value >= floor;
        self.records.push(r);
    }
}

/// Running maximum with its witness label.
#[derive(Default)]
struct Worst {
    value: f64,
    label: Option<String>,
}

impl Worst {
    fn see(&mut self, v: f64, label: impl FnOnce() -> String) {
        if v > self.value || self.label.is_none() || v.is_nan() {
            self.value = v;
            self.label = Some(label());
        }
    }
}

fn mode_label(m: &EigenMode) -> String {
    let k = m.coeffs;
    format!("{} a={} b={} c={} d={}", m.index, k.a, k.b, k.c, k.d)
}

/// All modes of the sweep: `m, n ≤ max_index`, `p ≤ max_p`, both classes, unit coefficients.
pub fn sweep_modes(friction: Friction, max_index: u32, max_p: u32) -> Result<Vec<EigenMode>> {
    let mut out = Vec::new();
    for m in 0..=max_index {
        for n in 0..=max_index {
            for p in 0..=max_p {
                for pclass in [PressureClass::ConstantPressure, PressureClass::NonConstantPressure] {
                    let idx = WaveIndex { m, n, p, pclass };
                    let skip = match pclass {
                        PressureClass::ConstantPressure => friction == Friction::Dirichlet && p == 0,
                        PressureClass::NonConstantPressure => m + n == 0 || friction == Friction::Navier,
                    };
                    if skip {
                        continue;
                    }
                    for k in PlanarCoeffs::units() {
                        match build_mode(&idx, friction, &k) {
                            Ok(mode) => out.push(mode),
                            Err(Error::ZeroMode(_)) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The first `count` orthonormal modes of the merged spectrum, eigenspace by eigenspace.
pub fn leading_modes(friction: Friction, count: usize) -> Result<Vec<EigenMode>> {
    let mut modes = Vec::new();
    let mut j = count;
    loop {
        modes.clear();
        for e in enumerate_spectrum(friction, Family::Merged, j)? {
            for w in &e.witnesses {
                modes.extend(eigenspace_basis(&w.index, friction, w.permuted)?);
            }
        }
        if modes.len() >= count {
            modes.truncate(count);
            return Ok(modes);
        }
        j *= 2;
    }
}

fn modes_suite(rec: &mut Recorder) -> Result<()> {
    let f = rec.opts.friction;
    let modes = sweep_modes(f, rec.opts.max_index, rec.opts.max_p)?;
    let (mut pde, mut bc, mut div, mut norm, mut strain) =
        (Worst::default(), Worst::default(), Worst::default(), Worst::default(), Worst::default());
    for m in &modes {
        pde.see(pde_residual(m), || mode_label(m));
        bc.see(boundary_residual(m), || mode_label(m));
        div.see(divergence_residual(m), || mode_label(m));
        norm.see((inner_product(m, m) - 1.0).abs(), || mode_label(m));
        let (s, g) = strain_identity(&m.velocity());
        strain.see((s - g).abs() / g.max(1.0), || mode_label(m));
    }
    rec.push("pde_residual", pde.label, pde.value, 1e-8);
    rec.push("boundary_residual", bc.label, bc.value, 1e-10);
    rec.push("divergence_residual", div.label, div.value, 1e-10);
    rec.push("normalization", norm.label, norm.value, 1e-8);
    rec.push("strain_identity", strain.label, strain.value, 1e-8);

    let lead = leading_modes(f, 15)?;
    let (d, o) = gram_defect(&gram_matrix(&lead));
    rec.push("gram_diagonal", Some("first 15 merged modes".into()), d, 1e-8);
    rec.push("gram_off_diagonal", Some("first 15 merged modes".into()), o, 1e-8);

    // The first nonzero-energy eigenmode attains the Poincaré constant.
    let first = lead
        .iter()
        .find(|m| f != Friction::Navier || m.eigenvalue > 0.0)
        .ok_or_else(|| Error::InvalidInput("no admissible mode for the Poincaré check".into()))?;
    let report = poincare_check(f, &[first.velocity()], 1e-8)?;
    let extremal = (report.ratios[0] - report.constant).abs() / report.constant;
    rec.push("poincare_extremal", Some(mode_label(first)), extremal, 1e-8);
    let samples: Vec<PlanarField> = lead.iter().take(6).map(EigenMode::velocity).collect();
    let combined = samples.iter().fold(PlanarField::zero(), |acc, s| acc.add(s));
    let report = poincare_check(f, &[combined], 1e-8)?;
    let worst = report.ratios.iter().fold(0.0, |m: f64, r| m.max(r / report.constant));
    rec.push("poincare_bound", Some("sum of six leading modes".into()), worst, 1.0 + 1e-8);
    Ok(())
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> PlanarCoeffs {
    loop {
        let k = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if let Ok(c) = PlanarCoeffs::new(k[0], k[1], k[2], k[3]) {
            return c;
        }
    }
}

fn random_const_mode(rng: &mut ChaCha8Rng, f: Friction, max: u32) -> Result<EigenMode> {
    loop {
        let p0 = u32::from(f == Friction::Dirichlet);
        let idx = WaveIndex::constant(rng.gen_range(0..=max), rng.gen_range(1..=max), rng.gen_range(p0..=p0 + 2));
        match build_mode(&idx, f, &random_coeffs(rng)) {
            Ok(m) => return Ok(m),
            Err(Error::ZeroMode(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn field_defect(a: &PlanarField, b: &PlanarField) -> f64 {
    a.sub(b).max_abs(&SampleGrid::new(8, 8, 33))
}

fn helmholtz_suite(rec: &mut Recorder) -> Result<()> {
    let f = rec.opts.friction;
    let mut rng = ChaCha8Rng::seed_from_u64(rec.opts.seed);
    let (mut idem, mut orth, mut divf, mut trace, mut anti, mut cons) = (
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
        Worst::default(),
    );
    for t in 0..20 {
        let a = random_const_mode(&mut rng, f, 3)?;
        let b = random_const_mode(&mut rng, f, 3)?;
        let c = random_const_mode(&mut rng, f, 3)?;
        let label = || format!("sample {t}: {} · ∇ {}", a.index, b.index);
        let phi = convect(&a, &b);
        let p = leray_project(&phi)?;
        let pp = leray_project(&p)?;
        idem.see(field_defect(&pp, &p), label);
        orth.see(phi.sub(&p).inner(&p).abs(), label);
        divf.see(divergence_residual_field(&p), label);
        let wall = [-1.0, 1.0]
            .iter()
            .map(|&z| p.w().trace(z).max_abs(&SampleGrid::new(8, 8, 1)))
            .fold(0.0, f64::max);
        trace.see(wall, label);
        let abc = triple_product(&a, &b, &c);
        anti.see((abc + triple_product(&a, &c, &b)).abs(), label);
        cons.see((abc - p.inner(&c.velocity())).abs(), label);
    }
    rec.push("leray_idempotence", idem.label, idem.value, 1e-10);
    rec.push("leray_orthogonality", orth.label, orth.value, 1e-10);
    rec.push("leray_divergence", divf.label, divf.value, 1e-10);
    rec.push("leray_normal_trace", trace.label, trace.value, 1e-12);
    rec.push("triple_antisymmetry", anti.label, anti.value, 1e-10);
    rec.push("triple_consistency", cons.label, cons.value, 1e-10);

    let h = Harmonic::new(Trig::Sin, 1, Trig::Sin, 1).expect("nonzero harmonic");
    let g = PlanarField::gradient(&ScalarField::separable(h, ZProfile::cosh(2f64.sqrt())));
    let killed = leray_project(&g)?.max_abs(&SampleGrid::standard());
    rec.push("leray_gradient_kill", Some("grad(cosh(√2 z) sin x sin y)".into()), killed, 1e-10);

    let sweep = helmholtz::hp3_sweep(f, 3, 2)?;
    for b in &sweep.branches {
        rec.push(
            "hp3_vanishing",
            Some(format!("{} over {} triples", b.branch.as_str(), b.triples)),
            b.max_abs,
            1e-10,
        );
    }
    let witness = non_hp3_witness(f)?;
    rec.push_floor("non_hp3_nonzero", Some("c-only coefficients, m,n ≤ 2".into()), witness, 1e-4);
    Ok(())
}

/// Largest `|∫(A·∇)B·C|` over modes with coefficients `a = b = d = 0`.
pub fn non_hp3_witness(friction: Friction) -> Result<f64> {
    let modes = helmholtz::unit_modes(friction, 2, 1, &[PlanarCoeffs::C])?;
    let t = helmholtz::triple_tensor(&modes);
    Ok(t.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
}

/// Sample wavevectors for the oracle suite.
pub const ORACLE_SAMPLES: [(u32, u32); 5] = [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2)];

/// Largest deviation of the three lowest oracle eigenvalues from the roots.
pub fn oracle_delta(m: u32, n: u32, f: Friction, grid: usize) -> Result<f64> {
    let fd = fd_oracle_eigs(m, n, f, grid)?;
    let exact = analytic_profile_eigs(m, n, f, 3)?;
    Ok(fd.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// `error(500) / error(2000)`; about 16 for a second-order scheme.
pub fn oracle_order_ratio(m: u32, n: u32, f: Friction) -> Result<f64> {
    Ok(oracle_delta(m, n, f, 500)? / oracle_delta(m, n, f, 2000)?)
}

fn oracle_suite(rec: &mut Recorder) -> Result<()> {
    let f = rec.opts.friction;
    let tol = if rec.opts.grid >= 2000 { 2e-3 } else { 4e-3 };
    for (m, n) in ORACLE_SAMPLES {
        let label = Some(format!("(m={m}, n={n}), N={}", rec.opts.grid));
        rec.push("fd_oracle_delta", label, oracle_delta(m, n, f, rec.opts.grid)?, tol);
        if rec.opts.convergence && f != Friction::Navier {
            let r = oracle_order_ratio(m, n, f)?;
            rec.push("fd_order_ratio_deviation", Some(format!("(m={m}, n={n}) ratio {r:.3}")), (r - 16.0).abs(), 2.0);
        }
    }
    Ok(())
}

/// Runs a suite; `pass` is the conjunction of all records.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rec = Recorder { opts, records: Vec::new() };
    match suite {
        Suite::Modes => modes_suite(&mut rec)?,
        Suite::Helmholtz => helmholtz_suite(&mut rec)?,
        Suite::Oracle => oracle_suite(&mut rec)?,
        Suite::All => {
            modes_suite(&mut rec)?;
            helmholtz_suite(&mut rec)?;
            oracle_suite(&mut rec)?;
        }
    }
    let pass = rec.records.iter().all(|r| r.pass);
    Ok(SuiteReport { suite, friction: opts.friction, seed: opts.seed, pass, records: rec.records })
}
