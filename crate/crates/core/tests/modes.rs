use std::f64::consts::PI;

use slipchan::eigen::{self, lambda_dirichlet};
use slipchan::modes::{eigenspace_basis, emit_table, index_multiplicity, multiplicity_of_value, staircase};
use slipchan::spectral::{planar_factors, planar_l2_weight, Component};
use slipchan::verify::{
    boundary_residual, boundary_residual_for, divergence_residual, fd_oracle_eigs, gram_defect, gram_matrix,
    inner_product, leading_modes, pde_residual,
};
use slipchan::{build_mode, enumerate_spectrum, Error, Family, Friction, PlanarCoeffs, PressureClass, WaveIndex, ZProfile};

#[test]
fn planar_factor_examples() {
    let (pu, pv, p) = planar_factors(&WaveIndex::constant(0, 0, 0), &PlanarCoeffs::D);
    assert_eq!(pu.eval(0.3, 1.2), 1.0);
    assert!(pv.is_zero() && p.is_zero());
    let (pu, pv, p) = planar_factors(&WaveIndex::constant(1, 1, 0), &PlanarCoeffs::A);
    let (x, y) = (0.4, 1.1f64);
    assert!((pu.eval(x, y) - x.cos() * y.sin()).abs() < 1e-15);
    assert!((pv.eval(x, y) - x.sin() * y.cos()).abs() < 1e-15);
    assert!((p.eval(x, y) - x.sin() * y.sin()).abs() < 1e-15);
    let ones = PlanarCoeffs::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let (pu, pv, p) = planar_factors(&WaveIndex::constant(1, 2, 0), &ones);
    assert_eq!([pu.eval(0.0, 0.0), pv.eval(0.0, 0.0), p.eval(0.0, 0.0)], [1.0, 1.0, 1.0]);
}

#[test]
fn planar_weight_examples() {
    let w = |m, n, k: &PlanarCoeffs| planar_l2_weight(&WaveIndex::constant(m, n, 0), k, Component::U);
    assert!((w(1, 1, &PlanarCoeffs::A) - PI * PI).abs() < 1e-12);
    assert!((w(0, 0, &PlanarCoeffs::D) - 4.0 * PI * PI).abs() < 1e-12);
    assert!((w(0, 1, &PlanarCoeffs::A) - 2.0 * PI * PI).abs() < 1e-12);
}

#[test]
fn perfect_slip_constant_mode() {
    let m = build_mode(&WaveIndex::constant(0, 0, 0), Friction::Navier, &PlanarCoeffs::D).unwrap();
    assert_eq!(m.eigenvalue, 0.0);
    let u = m.velocity();
    let expect = 1.0 / (8.0 * PI * PI).sqrt();
    for (x, y, z) in [(0.1, 0.2, -0.9), (3.0, 5.0, 0.4)] {
        let v = u.eval(x, y, z);
        assert!((v[0] - expect).abs() < 1e-14 && v[1] == 0.0 && v[2] == 0.0);
    }
}

#[test]
fn constant_pressure_mode_has_cosine_profile() {
    let m = build_mode(&WaveIndex::constant(1, 1, 0), Friction::Finite(1.0), &PlanarCoeffs::A).unwrap();
    assert!(m.w_profile.is_zero());
    let s = (m.eigenvalue - 2.0).sqrt();
    let u0 = m.u_profile.eval(0.0);
    for z in [-1.0, -0.3, 0.5, 0.9] {
        assert!((m.u_profile.eval(z) / u0 - (s * z).cos()).abs() < 1e-13);
    }
}

#[test]
fn nonconstant_pressure_vertical_profile() {
    let idx = WaveIndex::nonconstant(1, 1, 0).unwrap();
    let m = build_mode(&idx, Friction::Finite(1.0), &PlanarCoeffs::A).unwrap();
    let mu = 2f64.sqrt();
    let s = (m.eigenvalue - 2.0).sqrt();
    let shape = |z: f64| s.cos() * (mu * z).cosh() - mu.cosh() * (s * z).cos();
    let ratio = m.w_profile.eval(0.2) / shape(0.2);
    for z in [-0.8, -0.1, 0.6] {
        assert!((m.w_profile.eval(z) - ratio * shape(z)).abs() < 1e-12 * ratio.abs().max(1.0));
    }
    assert!(m.w_profile.eval(1.0).abs() < 1e-12);
}

#[test]
fn multiplicity_examples() {
    assert_eq!(multiplicity_of_value(0, PressureClass::ConstantPressure), 2);
    assert_eq!(multiplicity_of_value(1, PressureClass::ConstantPressure), 8);
    assert_eq!(multiplicity_of_value(325, PressureClass::ConstantPressure), 24);
    assert_eq!(index_multiplicity(2, 2), 4);
}

#[test]
fn enumeration_examples() {
    let e = enumerate_spectrum(Friction::Finite(1.0), Family::ConstantP, 10).unwrap();
    let want = [0.74, 1.74, 2.74, 4.12, 4.74, 5.12, 5.74, 6.12, 8.12, 8.74];
    let mult = [2, 8, 4, 2, 8, 8, 8, 4, 8, 4];
    for (k, entry) in e.iter().enumerate() {
        assert_eq!(format!("{:.2}", entry.value), format!("{:.2}", want[k]));
        assert_eq!(entry.multiplicity, mult[k]);
    }
    let big = enumerate_spectrum(Friction::Finite(10.0), Family::NonConstantP, 3).unwrap();
    let v: Vec<String> = big.iter().map(|e| format!("{:.2}", e.value)).collect();
    assert_eq!(v, ["7.80", "7.97", "9.02"]);
    let slip = enumerate_spectrum(Friction::Navier, Family::ConstantP, 1).unwrap();
    assert_eq!((slip[0].value, slip[0].multiplicity), (0.0, 2));
    assert!(matches!(enumerate_spectrum(Friction::Navier, Family::ConstantP, 0), Err(Error::InvalidCount(_))));
}

#[test]
fn table_row_labels() {
    let t = emit_table(Friction::Finite(1.0), Family::ConstantP, 10).unwrap();
    let w = &t.entries[3].witnesses[0];
    assert_eq!((w.label(), format!("{:.2}", t.entries[3].value), t.entries[3].multiplicity), ("λ_{0,0,1}".into(), "4.12".into(), 2));
    let d = emit_table(Friction::Dirichlet, Family::NonConstantP, 1).unwrap();
    let w = &d.entries[0].witnesses[0];
    assert_eq!((w.label(), format!("{:.2}", d.entries[0].value), d.entries[0].multiplicity), ("Λ⌢_{1,0,0}".into(), "9.31".into(), 8));
}

#[test]
fn no_slip_column_spot_rows() {
    let e = enumerate_spectrum(Friction::Dirichlet, Family::ConstantP, 10).unwrap();
    let direct = |m, n, p| lambda_dirichlet(&WaveIndex::constant(m, n, p)).unwrap();
    assert_eq!(e[0].value, direct(0, 0, 1));
    assert_eq!(e[5].value, direct(0, 0, 2));
    assert_eq!(e[7].value, direct(1, 0, 2));
}

#[test]
fn values_lie_in_their_brackets_and_constant_pressure_leads() {
    for f in [Friction::Finite(0.3), Friction::Finite(1.0), Friction::Finite(30.0)] {
        for family in [Family::ConstantP, Family::NonConstantP] {
            for e in enumerate_spectrum(f, family, 15).unwrap() {
                for w in &e.witnesses {
                    let b = eigen::bracket(&w.index, f).unwrap().unwrap();
                    assert!(b.contains(e.value), "{} outside {b:?}", e.value);
                }
            }
        }
        let merged = enumerate_spectrum(f, Family::Merged, 1).unwrap();
        assert_eq!(merged[0].witnesses[0].index.pclass, PressureClass::ConstantPressure);
    }
}

#[test]
fn merged_family_is_union_of_classes() {
    let f = Friction::Finite(1.0);
    let c = staircase(f, Family::ConstantP, 80).unwrap();
    let n = staircase(f, Family::NonConstantP, 80).unwrap();
    let mut union: Vec<f64> = c.iter().chain(&n).copied().collect();
    union.sort_by(f64::total_cmp);
    let merged = staircase(f, Family::Merged, 40).unwrap();
    for (a, b) in merged.iter().zip(&union) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn figure_staircases_order_by_friction() {
    let frictions = [Friction::Navier, Friction::Finite(1.0), Friction::Finite(10.0), Friction::Dirichlet];
    let stairs: Vec<Vec<f64>> = frictions.iter().map(|&f| staircase(f, Family::ConstantP, 46).unwrap()).collect();
    for s in &stairs {
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
    }
    for pair in stairs.windows(2) {
        assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| a < b));
    }
}

#[test]
fn orthogonality_examples() {
    let f = Friction::Finite(1.0);
    let k = PlanarCoeffs::new(0.3, -0.2, 0.9, 0.4).unwrap();
    let a = build_mode(&WaveIndex::constant(2, 1, 0), f, &k).unwrap();
    let b = build_mode(&WaveIndex::constant(2, 1, 1), f, &k).unwrap();
    let c = build_mode(&WaveIndex::nonconstant(2, 1, 0).unwrap(), f, &k).unwrap();
    assert!((inner_product(&a, &a) - 1.0).abs() < 1e-8);
    assert!(inner_product(&a, &b).abs() < 1e-8);
    assert!(inner_product(&a, &c).abs() < 1e-8);
}

#[test]
fn leading_modes_are_orthonormal() {
    for f in [Friction::Finite(1.0), Friction::Navier, Friction::Dirichlet] {
        let (d, o) = gram_defect(&gram_matrix(&leading_modes(f, 15).unwrap()));
        assert!(d < 1e-8 && o < 1e-8, "{f}: {d} {o}");
    }
}

#[test]
fn eigenspace_basis_spans_all_coefficient_slots() {
    // (1,1) has four independent coefficient directions; (1,0) loses the sin(0·y) ones.
    let b = eigenspace_basis(&WaveIndex::constant(1, 1, 0), Friction::Finite(1.0), false).unwrap();
    assert_eq!(b.len(), 4);
    let (d, o) = gram_defect(&gram_matrix(&b));
    assert!(d < 1e-12 && o < 1e-12);
    let b = eigenspace_basis(&WaveIndex::constant(1, 0, 0), Friction::Finite(1.0), true).unwrap();
    assert!(b.len() >= 2 && b.len() <= 8);
}

#[test]
fn residual_checks_on_built_modes() {
    for f in [Friction::Navier, Friction::Finite(2.0), Friction::Dirichlet] {
        let p0 = u32::from(f == Friction::Dirichlet);
        let m = build_mode(&WaveIndex::constant(2, 3, p0 + 1), f, &PlanarCoeffs::B).unwrap();
        assert!(pde_residual(&m) < 1e-8);
        assert!(boundary_residual(&m) < 1e-10);
        assert!(divergence_residual(&m) < 1e-10);
    }
    let slip = build_mode(&WaveIndex::constant(0, 1, 1), Friction::Navier, &PlanarCoeffs::A).unwrap();
    assert!(boundary_residual_for(&slip, Friction::Finite(1.0)) > 0.0);
    let kernel = build_mode(&WaveIndex::constant(0, 0, 0), Friction::Navier, &PlanarCoeffs::D).unwrap();
    assert_eq!(boundary_residual(&kernel), 0.0);
}

#[test]
fn zero_field_has_zero_residual() {
    let mut m = build_mode(&WaveIndex::constant(1, 0, 0), Friction::Finite(1.0), &PlanarCoeffs::A).unwrap();
    m.u_profile = ZProfile::zero();
    m.v_profile = ZProfile::zero();
    assert_eq!(pde_residual(&m), 0.0);
}

#[test]
fn oracle_examples() {
    let e = fd_oracle_eigs(0, 0, Friction::Finite(1.0), 2000).unwrap();
    assert!((e[0] - 0.740).abs() < 1e-3);
    let e = fd_oracle_eigs(1, 1, Friction::Finite(10.0), 2000).unwrap();
    let exact = eigen::solve_lambda_big(&WaveIndex::nonconstant(1, 1, 0).unwrap(), 10.0).unwrap().value;
    assert_eq!(format!("{exact:.2}"), "7.97");
    assert!(e.iter().any(|v| (v - exact).abs() < 2e-3), "{e:?}");
    let e = fd_oracle_eigs(0, 0, Friction::Finite(1e-8), 2000).unwrap();
    assert!(e[0].abs() < 1e-6);
}

#[test]
fn projection_onto_leading_modes_converges() {
    let f = Friction::Finite(1.0);
    let modes = leading_modes(f, 40).unwrap();
    let weights = [(0usize, 1.0), (4, 0.5), (11, -0.3), (39, 1e-3)];
    let field = weights
        .iter()
        .fold(slipchan::PlanarField::zero(), |acc, &(k, w)| acc.axpy(w, &modes[k].velocity()));
    let total = field.norm_sq();
    let mut captured = 0.0;
    let mut prev = f64::INFINITY;
    for m in &modes {
        let c = field.inner(&m.velocity());
        captured += c * c;
        let err = total - captured;
        assert!(err <= prev + 1e-14);
        prev = err;
    }
    assert!(prev.abs() < 1e-6, "{prev}");
}
