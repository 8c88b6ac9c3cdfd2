//! Eigenvalues of the Stokes operator, family by family.
//!
//! With `μ² = m² + n²` and `s = √(λ − μ²)`, every eigenvalue is a root of a
//! scalar equation in `s` on an interval of length π/2:
//!
//! * constant pressure, finite β: `s ∈ (pπ/2, (p+1)π/2)`, root of either
//!   `tan s = −s/β` or `cot s = s/β`;
//! * non-constant pressure, finite β: `s ∈ ((p+1)π/2, (p+2)π/2)`, root of
//!   `s tan s = −Λ/β − μ tanh μ` or `s cot s = Λ/β + μ coth μ`;
//! * non-constant pressure, no slip: the same interval with the `β → ∞`
//!   limits `s tan s = −μ tanh μ` or `s cot s = μ coth μ`;
//! * constant pressure with β = 0 or β = ∞: `s = pπ/2` in closed form.
//!
//! Each equation is evaluated in a product form (multiplied through by
//! `cos s` or `sin s`) that is smooth on the closed interval. Exactly one
//! branch changes sign inside a bracket; it is picked by its endpoint signs.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;
use crate::spectral::{Friction, PressureClass, WaveIndex};

/// Relative tolerance on `s`.
pub const ROOT_REL_TOL: f64 = 1e-13;
/// Iteration cap for a single root.
pub const ROOT_MAX_ITER: u32 = 200;

/// Transcendental family a bracket belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketFamily {
    LambdaConstP,
    LambdaBigNonConstP,
    DirichletLambdaBig,
}

/// Open interval `(lo, hi)` in λ containing exactly one eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueBracket {
    pub lo: f64,
    pub hi: f64,
    pub family: BracketFamily,
}

impl EigenvalueBracket {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lo < lambda && lambda < self.hi
    }
}

/// Which of the two equations of a family the root satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Tan,
    Cot,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Tan => "tan",
            Branch::Cot => "cot",
        }
    }
}

/// A solved eigenvalue with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    /// `√(λ − μ²)`.
    pub s: f64,
    /// `None` for the closed-form families.
    pub branch: Option<Branch>,
    /// Normalized residual of the satisfied branch (0 for closed forms).
    pub residual: f64,
    pub iterations: u32,
}

/// `tanh μ`, saturated for large arguments.
fn tanh_sat(mu: f64) -> f64 {
    if mu > 30.0 {
        1.0
    } else {
        mu.tanh()
    }
}

/// Branch residual functions in `s` for one family, normalized to O(1).
#[derive(Clone, Copy, Debug)]
enum Equation {
    ConstP { beta: f64 },
    NonConstP { beta: f64, mu: f64 },
    NonConstPDirichlet { mu: f64 },
}

impl Equation {
    fn residual(&self, branch: Branch, s: f64) -> f64 {
        let (sn, cs) = s.sin_cos();
        match (*self, branch) {
            (Equation::ConstP { beta }, Branch::Tan) => (s * cs + beta * sn) / (s + beta),
            (Equation::ConstP { beta }, Branch::Cot) => (beta * cs - s * sn) / (s + beta),
            (Equation::NonConstP { beta, mu }, Branch::Tan) => {
                let k = s * s + mu * mu + beta * mu * tanh_sat(mu);
                (beta * s * sn + k * cs) / (beta * s + k)
            }
            (Equation::NonConstP { beta, mu }, Branch::Cot) => {
                let k = s * s + mu * mu + beta * mu / tanh_sat(mu);
                (beta * s * cs - k * sn) / (beta * s + k)
            }
            (Equation::NonConstPDirichlet { mu }, Branch::Tan) => {
                let k = mu * tanh_sat(mu);
                (s * sn + k * cs) / (s + k)
            }
            (Equation::NonConstPDirichlet { mu }, Branch::Cot) => {
                let k = mu / tanh_sat(mu);
                (s * cs - k * sn) / (s + k)
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Equation::ConstP { beta } => format!("constant-pressure family, beta={beta}"),
            Equation::NonConstP { beta, mu } => format!("non-constant-pressure family, beta={beta}, mu={mu}"),
            Equation::NonConstPDirichlet { mu } => format!("no-slip non-constant-pressure family, mu={mu}"),
        }
    }
}

/// Picks the branch that changes sign on `(s_lo, s_hi)` and solves it.
fn solve_in(eq: Equation, s_lo: f64, s_hi: f64) -> Result<(f64, Branch, f64, u32)> {
    let width = s_hi - s_lo;
    for shrink in [1e-9, 1e-12, 1e-15] {
        let (a, b) = (s_lo + shrink * width, s_hi - shrink * width);
        let changes: Vec<Branch> = [Branch::Tan, Branch::Cot]
            .into_iter()
            .filter(|&br| {
                let (fa, fb) = (eq.residual(br, a), eq.residual(br, b));
                fa.signum() != fb.signum() && fa != 0.0 && fb != 0.0
            })
            .collect();
        match changes.as_slice() {
            [br] => {
                let br = *br;
                let root = roots::brent(|s| eq.residual(br, s), a, b, ROOT_REL_TOL, ROOT_MAX_ITER)?;
                return Ok((root.x, br, eq.residual(br, root.x).abs(), root.iterations));
            }
            [] => continue,
            _ => {
                return Err(Error::NoRootInBracket {
                    what: format!("{} (both branches change sign)", eq.describe()),
                    lo: s_lo,
                    hi: s_hi,
                })
            }
        }
    }
    Err(Error::NoRootInBracket { what: eq.describe(), lo: s_lo, hi: s_hi })
}

fn s_interval(index: &WaveIndex) -> (f64, f64) {
    let p = index.p as f64;
    match index.pclass {
        PressureClass::ConstantPressure => (p * FRAC_PI_2, (p + 1.0) * FRAC_PI_2),
        PressureClass::NonConstantPressure => ((p + 1.0) * FRAC_PI_2, (p + 2.0) * FRAC_PI_2),
    }
}

fn finish(index: &WaveIndex, (s, branch, residual, iterations): (f64, Branch, f64, u32)) -> Eigenvalue {
    Eigenvalue {
        value: index.mu_squared() as f64 + s * s,
        s,
        branch: Some(branch),
        residual,
        iterations,
    }
}

fn require_class(index: &WaveIndex, class: PressureClass) -> Result<()> {
    index.validate()?;
    if index.pclass != class {
        return Err(Error::InvalidCase(format!("index {index} is not in the {class} family")));
    }
    Ok(())
}

fn require_beta(beta: f64) -> Result<f64> {
    match Friction::finite(beta)? {
        Friction::Finite(b) => Ok(b),
        _ => unreachable!(),
    }
}

/// Constant-pressure eigenvalue `λ_{m,n,p}(β)` for finite β.
pub fn solve_lambda(index: &WaveIndex, beta: f64) -> Result<Eigenvalue> {
    require_class(index, PressureClass::ConstantPressure)?;
    let beta = require_beta(beta)?;
    let (lo, hi) = s_interval(index);
    Ok(finish(index, solve_in(Equation::ConstP { beta }, lo, hi)?))
}

/// Non-constant-pressure eigenvalue `Λ_{m,n,p}(β)` for finite β.
pub fn solve_lambda_big(index: &WaveIndex, beta: f64) -> Result<Eigenvalue> {
    require_class(index, PressureClass::NonConstantPressure)?;
    let beta = require_beta(beta)?;
    let (lo, hi) = s_interval(index);
    Ok(finish(index, solve_in(Equation::NonConstP { beta, mu: index.mu() }, lo, hi)?))
}

/// Non-constant-pressure eigenvalue with no-slip walls.
pub fn solve_lambda_big_dirichlet(index: &WaveIndex) -> Result<Eigenvalue> {
    require_class(index, PressureClass::NonConstantPressure)?;
    let (lo, hi) = s_interval(index);
    Ok(finish(index, solve_in(Equation::NonConstPDirichlet { mu: index.mu() }, lo, hi)?))
}

/// `μ² + π²p²/4`, the perfect-slip spectrum.
pub fn lambda_navier(index: &WaveIndex) -> f64 {
    let s = index.p as f64 * FRAC_PI_2;
    index.mu_squared() as f64 + s * s
}

/// `μ² + π²p²/4` for `p ≥ 1`, the no-slip constant-pressure spectrum.
pub fn lambda_dirichlet(index: &WaveIndex) -> Result<f64> {
    if index.p == 0 {
        return Err(Error::InvalidIndex(
            "the no-slip constant-pressure family starts at p = 1".into(),
        ));
    }
    Ok(lambda_navier(index))
}

/// The bracket used for a transcendental solve; `None` for closed forms.
pub fn bracket(index: &WaveIndex, friction: Friction) -> Result<Option<EigenvalueBracket>> {
    index.validate()?;
    let family = match (index.pclass, friction) {
        (PressureClass::ConstantPressure, Friction::Finite(_)) => BracketFamily::LambdaConstP,
        (PressureClass::ConstantPressure, _) => return Ok(None),
        (PressureClass::NonConstantPressure, Friction::Finite(_)) => BracketFamily::LambdaBigNonConstP,
        (PressureClass::NonConstantPressure, Friction::Dirichlet) => BracketFamily::DirichletLambdaBig,
        (PressureClass::NonConstantPressure, Friction::Navier) => return Err(navier_nonconst()),
    };
    let (s_lo, s_hi) = s_interval(index);
    let mu2 = index.mu_squared() as f64;
    Ok(Some(EigenvalueBracket { lo: mu2 + s_lo * s_lo, hi: mu2 + s_hi * s_hi, family }))
}

fn navier_nonconst() -> Error {
    Error::InvalidCase("with β = 0 the pressure is always constant; no non-constant-pressure family".into())
}

/// Dispatches to the family matching `(index.pclass, friction)`.
pub fn eigenvalue(index: &WaveIndex, friction: Friction) -> Result<Eigenvalue> {
    index.validate()?;
    let closed = |value: f64| Eigenvalue {
        value,
        s: index.p as f64 * FRAC_PI_2,
        branch: None,
        residual: 0.0,
        iterations: 0,
    };
    match (index.pclass, friction) {
        (PressureClass::ConstantPressure, Friction::Navier) => Ok(closed(lambda_navier(index))),
        (PressureClass::ConstantPressure, Friction::Dirichlet) => Ok(closed(lambda_dirichlet(index)?)),
        (PressureClass::ConstantPressure, Friction::Finite(b)) => solve_lambda(index, b),
        (PressureClass::NonConstantPressure, Friction::Finite(b)) => solve_lambda_big(index, b),
        (PressureClass::NonConstantPressure, Friction::Dirichlet) => solve_lambda_big_dirichlet(index),
        (PressureClass::NonConstantPressure, Friction::Navier) => Err(navier_nonconst()),
    }
}

/// Eigenvalue of `index` along an ascending list of finite β.
pub fn beta_sweep(index: &WaveIndex, betas: &[f64]) -> Result<Vec<f64>> {
    if betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("betas must be strictly ascending".into()));
    }
    betas
        .iter()
        .map(|&b| eigenvalue(index, Friction::finite(b)?).map(|e| e.value))
        .collect()
}
