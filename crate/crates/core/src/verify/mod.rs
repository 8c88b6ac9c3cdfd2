//! Independent checks of every analytic claim a mode makes.
//!
//! Residuals are evaluated on exact symbolic derivatives sampled over a
//! tensor grid; integrals use analytic planar weights and Gauss–Legendre
//! quadrature in `z`.

mod oracle;
mod report;

pub use oracle::{analytic_profile_eigs, fd_oracle_eigs, ORACLE_COUNT};
pub use report::{
    leading_modes, non_hp3_witness, oracle_delta, oracle_order_ratio, run_suite, sweep_modes, CheckRecord, Suite,
    SuiteOptions, SuiteReport, ORACLE_SAMPLES,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::modes::EigenMode;
use crate::planar::{PlanarField, SampleGrid, ScalarField};
use crate::spectral::Friction;

/// `∫_Ω A · B` over velocities.
pub fn inner_product(a: &EigenMode, b: &EigenMode) -> f64 {
    a.velocity().inner(&b.velocity())
}

/// Gram matrix of a list of modes.
pub fn gram_matrix(modes: &[EigenMode]) -> Vec<Vec<f64>> {
    let fields: Vec<PlanarField> = modes.iter().map(EigenMode::velocity).collect();
    fields
        .iter()
        .map(|a| fields.iter().map(|b| a.inner(b)).collect())
        .collect()
}

/// Largest deviation of a Gram matrix from the identity, split as (diagonal, off-diagonal).
pub fn gram_defect(gram: &[Vec<f64>]) -> (f64, f64) {
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((g - 1.0).abs());
            } else {
                off = off.max(g.abs());
            }
        }
    }
    (diag, off)
}

/// `−Δu + ∇q − λu` as a field.
pub fn stokes_residual(mode: &EigenMode) -> PlanarField {
    let u = mode.velocity();
    u.laplacian()
        .scale(-1.0)
        .add(&PlanarField::gradient(&mode.pressure()))
        .axpy(-mode.eigenvalue, &u)
}

/// Sup-norm of the Stokes residual on the standard grid.
pub fn pde_residual(mode: &EigenMode) -> f64 {
    stokes_residual(mode).max_abs(&SampleGrid::standard())
}

/// Wall residual of one tangential profile under `friction`.
fn tangential_defect(z: f64, value: f64, slope: f64, friction: Friction) -> f64 {
    let outward = z.signum();
    match friction {
        Friction::Navier => slope.abs(),
        Friction::Finite(beta) => (outward * slope + beta * value).abs(),
        Friction::Dirichlet => value.abs(),
    }
}

/// Boundary residual of the mode under an arbitrary wall rule.
pub fn boundary_residual_for(mode: &EigenMode, friction: Friction) -> f64 {
    let mut worst: f64 = 0.0;
    for z in [-1.0, 1.0] {
        for p in [&mode.u_profile, &mode.v_profile] {
            let d = p.derivative();
            worst = worst.max(tangential_defect(z, p.eval(z), d.eval(z), friction));
        }
        worst = worst.max(mode.w_profile.eval(z).abs());
    }
    worst
}

/// Boundary residual under the mode's own friction.
pub fn boundary_residual(mode: &EigenMode) -> f64 {
    boundary_residual_for(mode, mode.friction)
}

/// Sup-norm of `∇·F` on the standard grid.
pub fn divergence_residual_field(field: &PlanarField) -> f64 {
    field.divergence().max_abs(&SampleGrid::standard())
}

/// Sup-norm of the velocity divergence of a mode.
pub fn divergence_residual(mode: &EigenMode) -> f64 {
    divergence_residual_field(&mode.velocity())
}

/// `(2‖𝔻F‖², ‖∇F‖²)` by quadrature.
pub fn strain_identity(field: &PlanarField) -> (f64, f64) {
    let grads: Vec<Vec<ScalarField>> = (0..3)
        .map(|i| (0..3).map(|j| field.comps[i].partial(j)).collect())
        .collect();
    let mut grad_sq = 0.0;
    let mut strain_sq = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            grad_sq += grads[i][j].inner(&grads[i][j]);
            let sym = grads[i][j].add(&grads[j][i]);
            strain_sq += 0.25 * sym.inner(&sym);
        }
    }
    (2.0 * strain_sq, grad_sq)
}

/// `‖F_τ‖²_Γ`: tangential wall energy summed over both walls.
pub fn wall_energy(field: &PlanarField) -> f64 {
    [-1.0, 1.0]
        .iter()
        .map(|&z| field.u().inner_at(field.u(), z) + field.v().inner_at(field.v(), z))
        .sum()
}

/// The bilinear form `2‖𝔻F‖² + β‖F_τ‖²_Γ` (β = 0 for the no-slip case, where `F_τ = 0`).
pub fn dissipation_form(field: &PlanarField, friction: Friction) -> f64 {
    let (strain, _) = strain_identity(field);
    match friction {
        Friction::Finite(beta) => strain + beta * wall_energy(field),
        _ => strain,
    }
}

/// Outcome of a Poincaré-inequality check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    pub friction: Friction,
    /// The sharp constant `1/λ₀` for the admissible class.
    pub constant: f64,
    /// `‖v‖² / (2‖𝔻v‖² + β‖v_τ‖²_Γ)` per sample field.
    pub ratios: Vec<f64>,
    pub pass: bool,
}

/// Sharp Poincaré constant: `1/λ₀(β)`, `4/π²` without slip, `1` for perfect slip
/// on fields orthogonal to the constants.
pub fn poincare_constant(friction: Friction) -> Result<f64> {
    use crate::spectral::WaveIndex;
    Ok(match friction {
        Friction::Navier => 1.0,
        Friction::Dirichlet => 4.0 / std::f64::consts::PI.powi(2),
        Friction::Finite(_) => 1.0 / crate::eigen::eigenvalue(&WaveIndex::constant(0, 0, 0), friction)?.value,
    })
}

/// Removes the `z`-independent constant velocity, the perfect-slip kernel.
fn without_kernel(field: &PlanarField) -> PlanarField {
    use crate::planar::Harmonic;
    let mut out = field.clone();
    for comp in out.comps.iter_mut().take(2) {
        if let Some(p) = comp.term(&Harmonic::constant()) {
            let mean = p.integrate() / 2.0;
            comp.add_term(Harmonic::constant(), &crate::profile::ZProfile::constant(mean), -1.0);
        }
    }
    out
}

/// Verifies `‖v‖² ≤ C₀ (2‖𝔻v‖² + β‖v_τ‖²_Γ)` on each sample, plus `C₀ > 4/π²` for finite β.
pub fn poincare_check(friction: Friction, samples: &[PlanarField], rel_tol: f64) -> Result<PoincareReport> {
    let constant = poincare_constant(friction)?;
    let mut pass = match friction {
        Friction::Finite(_) => constant > 4.0 / std::f64::consts::PI.powi(2),
        _ => true,
    };
    let mut ratios = Vec::with_capacity(samples.len());
    for s in samples {
        let v = if friction == Friction::Navier { without_kernel(s) } else { s.clone() };
        let energy = v.norm_sq();
        if energy == 0.0 {
            ratios.push(0.0);
            continue;
        }
        let ratio = energy / dissipation_form(&v, friction);
        pass &= ratio <= constant * (1.0 + rel_tol);
        ratios.push(ratio);
    }
    Ok(PoincareReport { friction, constant, ratios, pass })
}
