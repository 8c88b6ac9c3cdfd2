//! Normalized eigenmodes, the ordered spectrum and its tables.
//!
//! Profiles use the real form `u = (U Pu, V Pv, W P)`, `q = Q P`, in which
//! incompressibility reads `W' = m U + n V` and the profile equations are
//!
//! ```text
//! U'' + s² U = m Q,   V'' + s² V = n Q,   W'' + s² W = Q',   Q'' = μ² Q.
//! ```

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::eigen::{self, Branch};
use crate::error::{Error, Result};
use crate::format;
use crate::lattice;
use crate::planar::{PlanarField, ScalarField};
use crate::profile::{Atom, Hyp, Trig, ZProfile};
use crate::spectral::{planar_factors, Friction, PlanarCoeffs, PlanarFactor, PressureClass, WaveIndex};

/// An eigenvalue together with its separable, L²-normalized eigenfunction.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenMode {
    pub index: WaveIndex,
    pub friction: Friction,
    pub eigenvalue: f64,
    pub branch: Option<Branch>,
    pub coeffs: PlanarCoeffs,
    pub u_profile: ZProfile,
    pub v_profile: ZProfile,
    pub w_profile: ZProfile,
    pub q_profile: ZProfile,
    /// L²(Ω) velocity norm before normalization.
    pub norm: f64,
}

impl EigenMode {
    pub fn factors(&self) -> (PlanarFactor, PlanarFactor, PlanarFactor) {
        planar_factors(&self.index, &self.coeffs)
    }

    pub fn velocity(&self) -> PlanarField {
        let (pu, pv, p) = self.factors();
        PlanarField::new(
            pu.with_profile(&self.u_profile),
            pv.with_profile(&self.v_profile),
            p.with_profile(&self.w_profile),
        )
    }

    pub fn pressure(&self) -> ScalarField {
        let (_, _, p) = self.factors();
        p.with_profile(&self.q_profile)
    }

    /// The same eigenfunction paired with a different eigenvalue.
    pub fn with_eigenvalue(&self, eigenvalue: f64) -> Self {
        Self { eigenvalue, ..self.clone() }
    }
}

/// Raw (unnormalized) profiles `U, V, W, Q`.
struct Profiles {
    u: ZProfile,
    v: ZProfile,
    w: ZProfile,
    q: ZProfile,
}

/// Constant-pressure profiles with `W = 0` from a single shape `Z`.
fn solenoidal_planar(index: &WaveIndex, z: ZProfile) -> Profiles {
    let (m, n) = (index.m, index.n);
    let (u, v) = match (m, n) {
        (0, 0) => (z.clone(), z),
        (0, _) => (z, ZProfile::zero()),
        (_, 0) => (ZProfile::zero(), z),
        _ => (z.clone(), z.scale(-(m as f64) / n as f64)),
    };
    Profiles { u, v, w: ZProfile::zero(), q: ZProfile::zero() }
}

/// Perfect-slip profiles; for `μ > 0, p ≥ 1` the vertical velocity is active.
fn navier_profiles(index: &WaveIndex) -> Profiles {
    let s = index.p as f64 * FRAC_PI_2;
    let even = index.p % 2 == 0;
    let (c, w) = if even {
        (ZProfile::cos(s), ZProfile::sin(s))
    } else {
        (ZProfile::sin(s), ZProfile::cos(s))
    };
    let (m, n) = (index.m as f64, index.n as f64);
    let (u, v) = match (index.m, index.n) {
        (0, 0) => return Profiles { u: c.clone(), v: c, w: ZProfile::zero(), q: ZProfile::zero() },
        (_, 0) => {
            let k = if even { s / m } else { -s / m };
            (c.scale(k), c)
        }
        _ => {
            let k = if even { (s - m) / n } else { -(m + s) / n };
            (c.clone(), c.scale(k))
        }
    };
    Profiles { u, v, w, q: ZProfile::zero() }
}

/// Pressure-driven profiles for `Λ = μ² + s²`, scaled by `1/cosh μ`.
///
/// Even branch: `Q ∝ sinh μz`, `W` even; odd branch: `Q ∝ cosh μz`, `W` odd.
/// The horizontal profiles are `U = m F`, `V = n F` with `F` fixed by
/// `W' = μ² F`; the wall conditions then hold exactly at the root.
fn pressure_profiles(index: &WaveIndex, lambda: f64, s: f64, branch: Branch) -> Profiles {
    let mu = index.mu();
    let t = mu.tanh();
    let sech = 1.0 / mu.cosh();
    let scaled = |hyp| ZProfile::from_atoms([Atom::new(sech, 0, hyp, mu, Trig::Cos, 0.0)]);
    let (f, w, q) = match branch {
        Branch::Tan => {
            let k = -s / (mu * s.cos());
            let f = scaled(Hyp::Sinh).axpy(-k, &ZProfile::sin(s));
            let w = scaled(Hyp::Cosh).axpy(-1.0 / s.cos(), &ZProfile::cos(s)).scale(mu);
            (f, w, scaled(Hyp::Sinh).scale(lambda))
        }
        Branch::Cot => {
            let k = s * t / (mu * s.sin());
            let f = scaled(Hyp::Cosh).axpy(-k, &ZProfile::cos(s));
            let w = scaled(Hyp::Sinh).axpy(-t / s.sin(), &ZProfile::sin(s)).scale(mu);
            (f, w, scaled(Hyp::Cosh).scale(lambda))
        }
    };
    Profiles {
        u: f.scale(index.m as f64),
        v: f.scale(index.n as f64),
        w,
        q,
    }
}

/// Builds the normalized eigenmode of `index` under `friction`.
pub fn build_mode(index: &WaveIndex, friction: Friction, coeffs: &PlanarCoeffs) -> Result<EigenMode> {
    index.validate()?;
    coeffs.validate()?;
    let ev = eigen::eigenvalue(index, friction)?;
    let raw = match (index.pclass, friction) {
        (PressureClass::ConstantPressure, Friction::Navier) => navier_profiles(index),
        (PressureClass::ConstantPressure, Friction::Dirichlet) => {
            let s = ev.s;
            let z = if index.p % 2 == 1 { ZProfile::cos(s) } else { ZProfile::sin(s) };
            solenoidal_planar(index, z)
        }
        (PressureClass::ConstantPressure, Friction::Finite(_)) => {
            let z = match ev.branch {
                Some(Branch::Cot) => ZProfile::cos(ev.s),
                _ => ZProfile::sin(ev.s),
            };
            solenoidal_planar(index, z)
        }
        (PressureClass::NonConstantPressure, _) => {
            let branch = ev.branch.expect("transcendental family carries a branch");
            pressure_profiles(index, ev.value, ev.s, branch)
        }
    };
    let (pu, pv, p) = planar_factors(index, coeffs);
    let norm_sq = pu.l2_weight() * raw.u.integrate_product(&raw.u)
        + pv.l2_weight() * raw.v.integrate_product(&raw.v)
        + p.l2_weight() * raw.w.integrate_product(&raw.w);
    if !(norm_sq > 1e-300 && norm_sq.is_finite()) {
        return Err(Error::ZeroMode(format!("index {index} with coefficients {coeffs:?}")));
    }
    let norm = norm_sq.sqrt();
    let inv = 1.0 / norm;
    Ok(EigenMode {
        index: *index,
        friction,
        eigenvalue: ev.value,
        branch: ev.branch,
        coeffs: *coeffs,
        u_profile: raw.u.scale(inv),
        v_profile: raw.v.scale(inv),
        w_profile: raw.w.scale(inv),
        q_profile: raw.q.scale(inv),
        norm,
    })
}

/// All nonzero modes spanned by the unit coefficient vectors of `index` and,
/// for `m ≠ n`, of its swap.
pub fn eigenspace_basis(index: &WaveIndex, friction: Friction, permuted: bool) -> Result<Vec<EigenMode>> {
    let mut indices = vec![*index];
    if permuted && index.m != index.n {
        indices.push(index.swapped());
    }
    let mut out = Vec::new();
    for idx in &indices {
        for k in PlanarCoeffs::units() {
            match build_mode(idx, friction, &k) {
                Ok(mode) => out.push(mode),
                Err(Error::ZeroMode(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Which families to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "const")]
    ConstantP,
    #[serde(rename = "nonconst")]
    NonConstantP,
    Merged,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const" | "constant" => Ok(Family::ConstantP),
            "nonconst" | "nonconstant" => Ok(Family::NonConstantP),
            "merged" | "all" => Ok(Family::Merged),
            other => Err(Error::InvalidInput(format!(
                "unknown family '{other}' (expected const, nonconst or merged)"
            ))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::ConstantP => "const",
            Family::NonConstantP => "nonconst",
            Family::Merged => "merged",
        })
    }
}

/// One index generating a spectrum value; `permuted` covers `(m,n)` and `(n,m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: WaveIndex,
    pub permuted: bool,
    pub multiplicity: u32,
}

impl Witness {
    /// Notation such as `λ_{0,0,1}` or `Λ⌢_{1,0,0}`.
    pub fn label(&self) -> String {
        let letter = match self.index.pclass {
            PressureClass::ConstantPressure => "λ",
            PressureClass::NonConstantPressure => "Λ",
        };
        let arc = if self.permuted { "⌢" } else { "" };
        format!("{letter}{arc}_{{{},{},{}}}", self.index.m, self.index.n, self.index.p)
    }
}

/// A distinct eigenvalue with its total multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: u32,
    pub witnesses: Vec<Witness>,
}

/// Multiplicity contributed by one witness with `m ≥ n`.
pub fn index_multiplicity(m: u32, n: u32) -> u32 {
    match (m, n) {
        (0, 0) => 2,
        _ if m == n => 4,
        _ => 8,
    }
}

/// Multiplicity of a value reached by every representation `μ² = m² + n²`.
///
/// Returns 0 for the non-constant-pressure family at `μ² = 0`, which is empty.
pub fn multiplicity_of_value(mu_squared: u64, class: PressureClass) -> u32 {
    if mu_squared == 0 {
        return match class {
            PressureClass::ConstantPressure => 2,
            PressureClass::NonConstantPressure => 0,
        };
    }
    4 * lattice::representations(mu_squared).len() as u32
}

/// Relative tolerance for treating two eigenvalues as one value.
pub fn same_value(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9 * a.abs().max(1.0)
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    lo: f64,
    m: u32,
    n: u32,
    p: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo
            .total_cmp(&other.lo)
            .then((self.m, self.n, self.p).cmp(&(other.m, other.n, other.p)))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lower end of the λ-interval of `(m, n, p)`: the value itself for closed forms.
fn lower_bound(class: PressureClass, m: u32, n: u32, p: u32) -> f64 {
    let mu2 = (m as u64 * m as u64 + n as u64 * n as u64) as f64;
    let s = match class {
        PressureClass::ConstantPressure => p as f64 * FRAC_PI_2,
        PressureClass::NonConstantPressure => (p as f64 + 1.0) * FRAC_PI_2,
    };
    mu2 + s * s
}

fn group(mut items: Vec<(f64, Witness)>) -> Vec<SpectrumEntry> {
    items.sort_by(|(va, wa), (vb, wb)| {
        va.total_cmp(vb).then_with(|| {
            let ka = (wa.index.mu_squared(), wa.index.m, wa.index.n, wa.index.p, wa.index.pclass);
            let kb = (wb.index.mu_squared(), wb.index.m, wb.index.n, wb.index.p, wb.index.pclass);
            ka.cmp(&kb)
        })
    });
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for (v, w) in items {
        match out.last_mut() {
            Some(e) if same_value(e.value, v) => {
                e.multiplicity += w.multiplicity;
                e.witnesses.push(w);
            }
            _ => out.push(SpectrumEntry { value: v, multiplicity: w.multiplicity, witnesses: vec![w] }),
        }
    }
    out
}

fn enumerate_class(friction: Friction, class: PressureClass, count: usize) -> Result<Vec<SpectrumEntry>> {
    let start = match (class, friction) {
        (PressureClass::NonConstantPressure, Friction::Navier) => return Ok(Vec::new()),
        (PressureClass::NonConstantPressure, _) => (1, 0, 0),
        (PressureClass::ConstantPressure, Friction::Dirichlet) => (0, 0, 1),
        (PressureClass::ConstantPressure, _) => (0, 0, 0),
    };
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    let push = |heap: &mut BinaryHeap<Reverse<Candidate>>, seen: &mut HashSet<(u32, u32, u32)>, m, n, p| {
        if seen.insert((m, n, p)) {
            heap.push(Reverse(Candidate { lo: lower_bound(class, m, n, p), m, n, p }));
        }
    };
    push(&mut heap, &mut seen, start.0, start.1, start.2);
    let mut found: Vec<(f64, Witness)> = Vec::new();
    while let Some(Reverse(next)) = heap.peek().copied() {
        if found.len() >= count {
            let groups = group(found.clone());
            if groups.len() >= count {
                let v = groups[count - 1].value;
                if next.lo > v && !same_value(v, next.lo) {
                    return Ok(groups.into_iter().take(count).collect());
                }
            }
        }
        heap.pop();
        let index = WaveIndex { m: next.m, n: next.n, p: next.p, pclass: class };
        let value = eigen::eigenvalue(&index, friction)?.value;
        found.push((
            value,
            Witness { index, permuted: next.m != next.n, multiplicity: index_multiplicity(next.m, next.n) },
        ));
        push(&mut heap, &mut seen, next.m + 1, next.n, next.p);
        if next.n < next.m {
            push(&mut heap, &mut seen, next.m, next.n + 1, next.p);
        }
        push(&mut heap, &mut seen, next.m, next.n, next.p + 1);
    }
    unreachable!("the candidate lattice is infinite")
}

/// The first `count` distinct eigenvalues of a family, with multiplicities.
pub fn enumerate_spectrum(friction: Friction, family: Family, count: usize) -> Result<Vec<SpectrumEntry>> {
    if count == 0 {
        return Err(Error::InvalidCount("at least one value must be requested".into()));
    }
    match family {
        Family::ConstantP => enumerate_class(friction, PressureClass::ConstantPressure, count),
        Family::NonConstantP => enumerate_class(friction, PressureClass::NonConstantPressure, count),
        Family::Merged => {
            let mut items = Vec::new();
            for class in [PressureClass::ConstantPressure, PressureClass::NonConstantPressure] {
                for e in enumerate_class(friction, class, count)? {
                    items.extend(e.witnesses.iter().map(|w| (e.value, *w)));
                }
            }
            Ok(group(items).into_iter().take(count).collect())
        }
    }
}

/// The spectrum expanded by multiplicity: `λ_1 ≤ λ_2 ≤ …` with `len = count`.
pub fn staircase(friction: Friction, family: Family, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidCount("at least one value must be requested".into()));
    }
    // Every value has multiplicity ≥ 2, so `count` distinct values always suffice.
    let entries = enumerate_spectrum(friction, family, count)?;
    Ok(entries
        .iter()
        .flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity as usize))
        .take(count)
        .collect())
}

/// One CSV row; entries with several witnesses produce one row per witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub j: usize,
    pub family: PressureClass,
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub permuted: bool,
    pub value: f64,
    pub multiplicity: u32,
}

/// Distinct eigenvalues with multiplicities and witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    pub friction: Friction,
    pub family: Family,
    pub entries: Vec<SpectrumEntry>,
}

/// Significant digits of table values.
pub const TABLE_DIGITS: usize = 6;

impl SpectrumTable {
    pub fn rows(&self) -> Vec<TableRow> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(j, e)| {
                e.witnesses.iter().map(move |w| TableRow {
                    j: j + 1,
                    family: w.index.pclass,
                    m: w.index.m,
                    n: w.index.n,
                    p: w.index.p,
                    permuted: w.permuted,
                    value: e.value,
                    multiplicity: e.multiplicity,
                })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,family,m,n,p,permuted,value,multiplicity\n");
        for r in self.rows() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.j,
                r.family,
                r.m,
                r.n,
                r.p,
                r.permuted,
                format::sig(r.value, TABLE_DIGITS),
                r.multiplicity
            ));
        }
        s
    }

    /// JSON with the same fields as the CSV; values carry the same rounding.
    pub fn to_json(&self, seed: Option<u64>) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows()
            .into_iter()
            .map(|r| {
                let rounded: f64 = format::sig(r.value, TABLE_DIGITS).parse().unwrap_or(r.value);
                serde_json::json!({
                    "j": r.j,
                    "family": r.family,
                    "m": r.m,
                    "n": r.n,
                    "p": r.p,
                    "permuted": r.permuted,
                    "value": rounded,
                    "multiplicity": r.multiplicity,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "friction": self.friction,
            "family": self.family,
            "seed": seed,
            "rows": rows,
        });
        serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
    }
}

/// Builds the table for the first `count` distinct values.
pub fn emit_table(friction: Friction, family: Family, count: usize) -> Result<SpectrumTable> {
    let entries = enumerate_spectrum(friction, family, count)?;
    Ok(SpectrumTable { friction, family, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_kernel_mode() {
        let m = build_mode(&WaveIndex::constant(0, 0, 0), Friction::Navier, &PlanarCoeffs::D).unwrap();
        assert_eq!(m.eigenvalue, 0.0);
        let expected = 1.0 / (8.0f64).sqrt() / std::f64::consts::PI;
        assert!((m.u_profile.eval(0.2) - expected).abs() < 1e-14);
        assert!((m.norm - 8f64.sqrt() * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn zero_mode_rejected() {
        let r = build_mode(&WaveIndex::constant(0, 0, 0), Friction::Finite(1.0), &PlanarCoeffs::A);
        assert!(matches!(r, Err(Error::ZeroMode(_))));
    }

    #[test]
    fn dirichlet_constant_pressure_starts_at_one() {
        let r = build_mode(&WaveIndex::constant(1, 0, 0), Friction::Dirichlet, &PlanarCoeffs::A);
        assert!(matches!(r, Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_of_value(0, PressureClass::ConstantPressure), 2);
        assert_eq!(multiplicity_of_value(1, PressureClass::ConstantPressure), 8);
        assert_eq!(multiplicity_of_value(2, PressureClass::ConstantPressure), 4);
        assert_eq!(multiplicity_of_value(325, PressureClass::ConstantPressure), 24);
    }

    #[test]
    fn navier_first_value() {
        let s = enumerate_spectrum(Friction::Navier, Family::ConstantP, 1).unwrap();
        assert_eq!(s[0].value, 0.0);
        assert_eq!(s[0].multiplicity, 2);
    }

    #[test]
    fn labels() {
        let w = Witness { index: WaveIndex::nonconstant(1, 0, 0).unwrap(), permuted: true, multiplicity: 8 };
        assert_eq!(w.label(), "Λ⌢_{1,0,0}");
    }

    #[test]
    fn zero_count_is_an_error() {
        assert!(matches!(emit_table(Friction::Navier, Family::ConstantP, 0), Err(Error::InvalidCount(_))));
    }
}
