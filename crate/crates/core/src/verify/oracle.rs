//! Finite-difference eigenvalue oracle for one planar wavevector `(m, n)`.
//!
//! After separating `exp(i(mx + ny))` the channel problem splits into two
//! decoupled one-dimensional systems:
//!
//! * the component orthogonal to the wavevector, a scalar Robin problem
//!   `−G″ = θG` (eigenvalue `μ² + θ`), discretized on nodes with ghost-point
//!   boundary rows;
//! * the component along the wavevector with the vertical velocity and the
//!   pressure, `−F″ + μ²F + μQ = λF`, `−W″ + μ²W + Q′ = λW`, `W′ = μF`,
//!   discretized on a staggered grid (`F`, `Q` at cell midpoints, `W` at
//!   nodes) as a symmetric saddle-point problem.
//!
//! Neither system uses the transcendental equations. Eigenvalues are found
//! by bisection on Sylvester inertia counts of banded `LDLᵀ` factorizations,
//! so no dense eigensolver is needed and each count costs `O(N)`.

use crate::eigen;
use crate::error::{Error, Result};
use crate::spectral::{Friction, PressureClass, WaveIndex};

/// Number of eigenvalues returned by the oracle.
pub const ORACLE_COUNT: usize = 10;

/// Relative bisection tolerance.
const BISECT_TOL: f64 = 1e-13;

/// Symmetric banded matrix stored by upper diagonals: `band[k][d] = A[k][k+d]`.
struct Banded {
    band: Vec<Vec<f64>>,
    width: usize,
}

impl Banded {
    fn new(n: usize, width: usize) -> Self {
        Self { band: vec![vec![0.0; width + 1]; n], width }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.band[i][j - i] = v;
    }

    /// Number of negative pivots of an unpivoted `LDLᵀ`, which by Sylvester's
    /// law equals the number of negative eigenvalues.
    fn negative_count(&self) -> usize {
        let n = self.band.len();
        let w = self.width;
        let mut a = self.band.clone();
        let scale = a.iter().map(|r| r[0].abs()).fold(1.0, f64::max);
        let mut negatives = 0;
        for k in 0..n {
            let mut d = a[k][0];
            if d.abs() < 1e-14 * scale {
                d = -1e-14 * scale;
            }
            if d < 0.0 {
                negatives += 1;
            }
            let row: Vec<f64> = a[k][1..].to_vec();
            for i in 1..=w {
                if k + i >= n || row[i - 1] == 0.0 {
                    continue;
                }
                let li = row[i - 1] / d;
                for j in i..=w {
                    if k + j >= n {
                        break;
                    }
                    a[k + i][j - i] -= li * row[j - 1];
                }
            }
        }
        negatives
    }
}

/// Wall weight of the ghost reflection for a midpoint discretization.
fn reflection(friction: Friction, h: f64) -> f64 {
    match friction {
        Friction::Navier => 1.0,
        Friction::Finite(beta) => (1.0 - 0.5 * beta * h) / (1.0 + 0.5 * beta * h),
        Friction::Dirichlet => -1.0,
    }
}

/// Eigenvalues of the scalar problem below `sigma`.
fn scalar_count(friction: Friction, n: usize, sigma: f64) -> usize {
    let h = 2.0 / n as f64;
    let h2 = h * h;
    let (diag, mass): (Vec<f64>, Vec<f64>) = match friction {
        Friction::Dirichlet => (vec![2.0 / h2; n - 1], vec![1.0; n - 1]),
        _ => {
            let beta = match friction {
                Friction::Finite(b) => b,
                _ => 0.0,
            };
            let mut d = vec![2.0 / h2; n + 1];
            let mut m = vec![1.0; n + 1];
            d[0] = (1.0 + h * beta) / h2;
            d[n] = d[0];
            m[0] = 0.5;
            m[n] = 0.5;
            (d, m)
        }
    };
    let mut mat = Banded::new(diag.len(), 1);
    for i in 0..diag.len() {
        mat.set(i, i, diag[i] - sigma * mass[i]);
        if i + 1 < diag.len() {
            mat.set(i, i + 1, -1.0 / h2);
        }
    }
    mat.negative_count()
}

/// Eigenvalues of the staggered saddle-point problem below `sigma`.
fn coupled_count(mu: f64, friction: Friction, n: usize, sigma: f64) -> usize {
    let h = 2.0 / n as f64;
    let h2 = h * h;
    let r = reflection(friction, h);
    let f = |i: usize| 3 * i;
    let q = |i: usize| 3 * i + 1;
    let w = |j: usize| 3 * (j - 1) + 2;
    let size = 3 * n - 1;
    let mut mat = Banded::new(size, 3);
    for i in 0..n {
        let mut d = 2.0 / h2 + mu * mu - sigma;
        if i == 0 {
            d -= r / h2;
        }
        if i == n - 1 {
            d -= r / h2;
        }
        mat.set(f(i), f(i), d);
        if i + 1 < n {
            mat.set(f(i), f(i + 1), -1.0 / h2);
        }
        mat.set(f(i), q(i), mu);
        if i + 1 < n {
            mat.set(q(i), w(i + 1), -1.0 / h);
        }
        if i > 0 {
            mat.set(q(i), w(i), 1.0 / h);
        }
    }
    for j in 1..n {
        mat.set(w(j), w(j), 2.0 / h2 + mu * mu - sigma);
        if j + 1 < n {
            mat.set(w(j), w(j + 1), -1.0 / h2);
        }
    }
    mat.negative_count().saturating_sub(n)
}

/// The lowest `count` eigenvalues of a monotone counting function.
fn bisect_all(count: usize, start: f64, counter: impl Fn(f64) -> usize) -> Result<Vec<f64>> {
    let mut hi = start.max(1.0);
    let mut guard = 0;
    while counter(hi) < count {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence("oracle: spectrum bound not found".into()));
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut lo_floor = start.min(0.0) - 1.0;
    for k in 0..count {
        let (mut lo, mut up) = (lo_floor, hi);
        for _ in 0..400 {
            if up - lo <= BISECT_TOL * up.abs().max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + up);
            if counter(mid) > k {
                up = mid;
            } else {
                lo = mid;
            }
        }
        let value = 0.5 * (lo + up);
        out.push(value);
        lo_floor = lo;
    }
    Ok(out)
}

/// Lowest [`ORACLE_COUNT`] eigenvalues (with multiplicity across the two
/// subsystems) for wavenumbers `(m, n)` on a grid of `grid` cells.
pub fn fd_oracle_eigs(m: u32, n: u32, friction: Friction, grid: usize) -> Result<Vec<f64>> {
    if grid < 100 {
        return Err(Error::InvalidInput(format!("oracle grid must have at least 100 cells, got {grid}")));
    }
    let mu2 = (m as u64 * m as u64 + n as u64 * n as u64) as f64;
    let mu = mu2.sqrt();
    let mut all: Vec<f64> = bisect_all(ORACLE_COUNT, 1.0, |s| scalar_count(friction, grid, s))?
        .into_iter()
        .map(|t| t + mu2)
        .collect();
    if mu > 0.0 {
        all.extend(bisect_all(ORACLE_COUNT, mu2 + 1.0, |s| coupled_count(mu, friction, grid, s))?);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(ORACLE_COUNT);
    Ok(all)
}

/// The exact counterpart of [`fd_oracle_eigs`] from the transcendental solver.
pub fn analytic_profile_eigs(m: u32, n: u32, friction: Friction, count: usize) -> Result<Vec<f64>> {
    let mu2 = m as u64 * m as u64 + n as u64 * n as u64;
    let p0 = u32::from(friction == Friction::Dirichlet);
    let mut all = Vec::new();
    for p in p0..p0 + count as u32 {
        all.push(eigen::eigenvalue(&WaveIndex::constant(m, n, p), friction)?.value);
    }
    if mu2 > 0 {
        match friction {
            Friction::Navier => {
                // Perfect slip: the along-wavevector system repeats μ² + (pπ/2)², p ≥ 1.
                for p in 1..=count as u32 {
                    all.push(eigen::lambda_navier(&WaveIndex::constant(m, n, p)));
                }
            }
            _ => {
                for p in 0..count as u32 {
                    let idx = WaveIndex { m, n, p, pclass: PressureClass::NonConstantPressure };
                    all.push(eigen::eigenvalue(&idx, friction)?.value);
                }
            }
        }
    }
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_near_zero_friction() {
        let e = fd_oracle_eigs(0, 0, Friction::Finite(1e-8), 400).unwrap();
        assert!(e[0].abs() < 1e-6);
    }

    #[test]
    fn coarse_grid_tracks_roots() {
        let fd = fd_oracle_eigs(1, 1, Friction::Finite(10.0), 400).unwrap();
        let exact = analytic_profile_eigs(1, 1, Friction::Finite(10.0), ORACLE_COUNT).unwrap();
        for (a, b) in fd.iter().zip(&exact).take(4) {
            assert!((a - b).abs() < 5e-3 * b.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(fd_oracle_eigs(0, 0, Friction::Navier, 10).is_err());
    }
}
