//! Truncated Faedo–Galerkin evolution in the Stokes eigenbasis.
//!
//! With an orthonormal basis `u_k` the unforced Navier–Stokes system
//! projects to `dA_k/dt = −λ_k A_k − Σ_ij N_ijk A_i A_j` with
//! `N_ijk = ∫ (u_i·∇)u_j · u_k`. The pressure carries no degree of freedom
//! in the constant-pressure basis and is reported as zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::helmholtz::{self, common_hp3_branch, satisfies_hp};
use crate::modes::{build_mode, EigenMode};
use crate::spectral::{Friction, PlanarCoeffs, PressureClass, WaveIndex};

/// Largest admissible `dt · λ_max` for the explicit scheme.
pub const STABILITY_LIMIT: f64 = 2.5;
/// Coefficient norm treated as blow-up.
pub const BLOWUP_NORM: f64 = 1e6;

/// How planar coefficients are assigned to basis indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffPolicy {
    Uniform(PlanarCoeffs),
    PerMode(Vec<PlanarCoeffs>),
}

impl CoeffPolicy {
    fn get(&self, k: usize) -> Result<PlanarCoeffs> {
        match self {
            CoeffPolicy::Uniform(c) => Ok(*c),
            CoeffPolicy::PerMode(v) => v
                .get(k)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("no coefficients for basis entry {k}"))),
        }
    }
}

/// Basis, eigenvalues and the assembled nonlinear tensor.
#[derive(Clone, Debug)]
pub struct GalerkinSystem {
    pub friction: Friction,
    pub basis: Vec<EigenMode>,
    pub eigenvalues: Vec<f64>,
    /// `N[i][j][k]` flattened row-major.
    pub tensor: Vec<f64>,
}

/// Time and coefficient vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalerkinState {
    pub t: f64,
    pub coeffs: Vec<f64>,
}

impl GalerkinSystem {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> f64 {
        let m = self.len();
        self.tensor[(i * m + j) * m + k]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    /// `max |N_ijk + N_ikj|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let m = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    worst = worst.max((self.n(i, j, k) + self.n(i, k, j)).abs());
                }
            }
        }
        worst
    }

    pub fn max_nonlinear(&self) -> f64 {
        self.tensor.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Right-hand side `−λ_k A_k − Σ N_ijk A_i A_j`.
    pub fn rhs(&self, a: &[f64]) -> Vec<f64> {
        let m = self.len();
        let mut out: Vec<f64> = a.iter().zip(&self.eigenvalues).map(|(x, l)| -l * x).collect();
        for i in 0..m {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..m {
                let aij = a[i] * a[j];
                if aij == 0.0 {
                    continue;
                }
                let row = &self.tensor[(i * m + j) * m..(i * m + j + 1) * m];
                for (o, n) in out.iter_mut().zip(row) {
                    *o -= n * aij;
                }
            }
        }
        out
    }
}

/// Builds the basis (sorted by eigenvalue) and assembles the tensor.
pub fn assemble(indices: &[WaveIndex], friction: Friction, policy: &CoeffPolicy) -> Result<GalerkinSystem> {
    if indices.is_empty() {
        return Err(Error::InvalidCount("the Galerkin basis must not be empty".into()));
    }
    let mut basis = Vec::with_capacity(indices.len());
    for (k, idx) in indices.iter().enumerate() {
        if idx.pclass != PressureClass::ConstantPressure {
            return Err(Error::InvalidCase(format!(
                "basis index {idx} is not in the constant-pressure family"
            )));
        }
        basis.push(build_mode(idx, friction, &policy.get(k)?)?);
    }
    basis.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    let eigenvalues = basis.iter().map(|m| m.eigenvalue).collect();
    let tensor = helmholtz::triple_tensor(&basis);
    Ok(GalerkinSystem { friction, basis, eigenvalues, tensor })
}

fn axpy(a: &[f64], c: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

/// One classical RK4 step.
pub fn rk4_step(sys: &GalerkinSystem, a: &[f64], dt: f64) -> Vec<f64> {
    let k1 = sys.rhs(a);
    let k2 = sys.rhs(&axpy(a, 0.5 * dt, &k1));
    let k3 = sys.rhs(&axpy(a, 0.5 * dt, &k2));
    let k4 = sys.rhs(&axpy(a, dt, &k3));
    (0..a.len())
        .map(|i| a[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates to `t_end` with fixed step `dt`, keeping every `stride`-th state.
pub fn integrate(
    sys: &GalerkinSystem,
    initial: &GalerkinState,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Vec<GalerkinState>> {
    if initial.coeffs.len() != sys.len() {
        return Err(Error::InvalidInput(format!(
            "initial state has {} coefficients, basis has {}",
            initial.coeffs.len(),
            sys.len()
        )));
    }
    if initial.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("initial coefficients must be finite".into()));
    }
    if !(dt > 0.0 && t_end > 0.0 && dt.is_finite() && t_end.is_finite()) || stride == 0 {
        return Err(Error::InvalidInput("T, dt and stride must be positive".into()));
    }
    let product = dt * sys.lambda_max();
    if product >= STABILITY_LIMIT {
        return Err(Error::StabilityViolation(product));
    }
    let steps = (t_end / dt).round() as usize;
    if ((steps as f64) * dt - t_end).abs() > 1e-9 * t_end || steps % stride != 0 {
        return Err(Error::InvalidInput(format!(
            "T = {t_end} must be a multiple of the output interval dt·stride = {}",
            dt * stride as f64
        )));
    }
    let mut out = vec![initial.clone()];
    let mut a = initial.coeffs.clone();
    for s in 1..=steps {
        a = rk4_step(sys, &a, dt);
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > BLOWUP_NORM {
            return Err(Error::BlowupDetected(initial.t + s as f64 * dt));
        }
        if s % stride == 0 {
            out.push(GalerkinState { t: initial.t + s as f64 * dt, coeffs: a.clone() });
        }
    }
    Ok(out)
}

/// One row of the energy report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub t: f64,
    /// `½‖v‖² = ½ Σ A_k²`.
    pub energy: f64,
    /// `2‖𝔻v‖² + β‖v_τ‖²_Γ = Σ λ_k A_k²`.
    pub dissipation: f64,
    /// `E(t_n) − E(t_{n−1}) + ∫ D dt` over the preceding interval (0 on the first row).
    pub balance_residual: f64,
}

/// Energy, dissipation and the discrete energy balance along a trajectory.
pub fn energy_report(sys: &GalerkinSystem, trajectory: &[GalerkinState]) -> Vec<EnergyRecord> {
    let energy = |a: &[f64]| 0.5 * a.iter().map(|x| x * x).sum::<f64>();
    let dissipation = |a: &[f64]| a.iter().zip(&sys.eigenvalues).map(|(x, l)| l * x * x).sum::<f64>();
    // dD/dt = 2 Σ λ_k A_k dA_k/dt, used for a Hermite-cubic integral of D.
    let slope = |a: &[f64]| {
        let r = sys.rhs(a);
        2.0 * a.iter().zip(&r).zip(&sys.eigenvalues).map(|((x, y), l)| l * x * y).sum::<f64>()
    };
    let mut out = Vec::with_capacity(trajectory.len());
    for (n, s) in trajectory.iter().enumerate() {
        let (e, d) = (energy(&s.coeffs), dissipation(&s.coeffs));
        let balance = if n == 0 {
            0.0
        } else {
            let prev = &trajectory[n - 1];
            let h = s.t - prev.t;
            let integral = 0.5 * h * (dissipation(&prev.coeffs) + d)
                + h * h / 12.0 * (slope(&prev.coeffs) - slope(&s.coeffs));
            e - energy(&prev.coeffs) + integral
        };
        out.push(EnergyRecord { t: s.t, energy: e, dissipation: d, balance_residual: balance });
    }
    out
}

/// Closed-form solution families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExplicitFamily {
    /// Modes with `m = 0` only.
    Mono,
    /// One mode with `a = −c`, `b = d`.
    Single,
    /// Modes sharing one of the `c = 0` coefficient patterns.
    Hp3,
}

/// Checks the hypotheses of `family` on the given basis.
pub fn check_hypotheses(family: ExplicitFamily, modes: &[EigenMode]) -> Result<()> {
    let fail = |msg: String| Err(Error::HypothesisViolated(msg));
    if let Some(m) = modes.iter().find(|m| m.index.pclass != PressureClass::ConstantPressure) {
        return fail(format!("mode {} is not in the constant-pressure family", m.index));
    }
    match family {
        ExplicitFamily::Mono => match modes.iter().find(|m| m.index.m != 0) {
            Some(m) => fail(format!("mode {} has m ≠ 0", m.index)),
            None => Ok(()),
        },
        ExplicitFamily::Single => {
            if modes.len() != 1 {
                return fail(format!("a single mode is required, got {}", modes.len()));
            }
            if !satisfies_hp(&modes[0].coeffs) {
                return fail("coefficients violate a = −c, b = d".into());
            }
            Ok(())
        }
        ExplicitFamily::Hp3 => {
            let coeffs: Vec<PlanarCoeffs> = modes.iter().map(|m| m.coeffs).collect();
            match common_hp3_branch(&coeffs) {
                Some(_) => Ok(()),
                None => fail("no common pattern c=d=0, c=b=0 or c=a=0".into()),
            }
        }
    }
}

/// `A_k(t) = γ_k e^{−λ_k t}` under the family's hypotheses.
pub fn explicit_solution(family: ExplicitFamily, modes: &[EigenMode], gammas: &[f64], t: f64) -> Result<GalerkinState> {
    check_hypotheses(family, modes)?;
    if gammas.len() != modes.len() {
        return Err(Error::InvalidInput(format!("{} amplitudes for {} modes", gammas.len(), modes.len())));
    }
    Ok(decay(&modes.iter().map(|m| m.eigenvalue).collect::<Vec<_>>(), gammas, t))
}

/// `γ_k e^{−λ_k t}` without hypothesis checks.
pub fn decay(eigenvalues: &[f64], gammas: &[f64], t: f64) -> GalerkinState {
    GalerkinState {
        t,
        coeffs: eigenvalues.iter().zip(gammas).map(|(l, g)| g * (-l * t).exp()).collect(),
    }
}

/// Initial amplitudes in a manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    Gammas(Vec<f64>),
    /// Independent uniform amplitudes in `[−amplitude, amplitude]` drawn from the seed.
    Random { amplitude: f64 },
}

/// A basis entry in a manifest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestIndex {
    pub m: u32,
    pub n: u32,
    pub p: u32,
}

fn default_stride() -> usize {
    1
}

/// A reproducible simulation request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub friction: Friction,
    pub indices: Vec<ManifestIndex>,
    pub coeffs: CoeffPolicy,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    #[serde(default)]
    pub seed: u64,
    pub initial: InitialData,
    /// Keep only the first `truncate` entries as the basis.
    #[serde(default)]
    pub truncate: Option<usize>,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

/// Everything produced by a manifest run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub system: GalerkinSystem,
    pub trajectory: Vec<GalerkinState>,
    pub energy: Vec<EnergyRecord>,
    /// `Σ_{k > K} λ_k γ_k²` of the dropped entries.
    pub dropped_tail: f64,
}

impl RunManifest {
    /// Amplitudes for every listed index (before truncation).
    pub fn gammas(&self) -> Result<Vec<f64>> {
        match &self.initial {
            InitialData::Gammas(g) => {
                if g.len() != self.indices.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} amplitudes for {} indices",
                        g.len(),
                        self.indices.len()
                    )));
                }
                Ok(g.clone())
            }
            InitialData::Random { amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok((0..self.indices.len()).map(|_| amplitude * rng.gen_range(-1.0..=1.0)).collect())
            }
        }
    }

    pub fn run(&self) -> Result<RunOutput> {
        let gammas = self.gammas()?;
        let indices: Vec<WaveIndex> = self
            .indices
            .iter()
            .map(|i| WaveIndex::new(i.m, i.n, i.p, PressureClass::ConstantPressure))
            .collect::<Result<_>>()?;
        let keep = self.truncate.unwrap_or(indices.len()).min(indices.len());
        let mut dropped_tail = 0.0;
        for (k, idx) in indices.iter().enumerate().skip(keep) {
            let lambda = crate::eigen::eigenvalue(idx, self.friction)?.value;
            dropped_tail += lambda * gammas[k] * gammas[k];
        }
        let system = assemble(&indices[..keep], self.friction, &self.coeffs)?;
        // The basis is sorted by eigenvalue; carry amplitudes along.
        let mut order: Vec<usize> = (0..keep).collect();
        let unsorted: Vec<f64> = indices[..keep]
            .iter()
            .map(|i| crate::eigen::eigenvalue(i, self.friction).map(|e| e.value))
            .collect::<Result<_>>()?;
        order.sort_by(|&a, &b| unsorted[a].total_cmp(&unsorted[b]));
        let initial = GalerkinState { t: 0.0, coeffs: order.iter().map(|&k| gammas[k]).collect() };
        let trajectory = integrate(&system, &initial, self.t_end, self.dt, self.stride)?;
        let energy = energy_report(&system, &trajectory);
        Ok(RunOutput { system, trajectory, energy, dropped_tail })
    }
}

/// Significant digits in numeric CSV output.
pub const CSV_DIGITS: usize = 12;

/// `t, A_1..A_K, energy, dissipation` per sampled state.
pub fn trajectory_csv(out: &RunOutput) -> String {
    let k = out.system.len();
    let mut s = String::from("t");
    for i in 1..=k {
        s.push_str(&format!(",A_{i}"));
    }
    s.push_str(",energy,dissipation\n");
    for (state, e) in out.trajectory.iter().zip(&out.energy) {
        s.push_str(&format::sig(state.t, CSV_DIGITS));
        for a in &state.coeffs {
            s.push(',');
            s.push_str(&format::sig(*a, CSV_DIGITS));
        }
        s.push_str(&format!(
            ",{},{}\n",
            format::sig(e.energy, CSV_DIGITS),
            format::sig(e.dissipation, CSV_DIGITS)
        ));
    }
    s
}

/// `t, energy, dissipation, balance_residual` per sampled state.
pub fn energy_csv(out: &RunOutput) -> String {
    let mut s = String::from("t,energy,dissipation,balance_residual\n");
    for e in &out.energy {
        s.push_str(&format!(
            "{},{},{},{}\n",
            format::sig(e.t, CSV_DIGITS),
            format::sig(e.energy, CSV_DIGITS),
            format::sig(e.dissipation, CSV_DIGITS),
            format::sig(e.balance_residual, CSV_DIGITS)
        ));
    }
    s
}
