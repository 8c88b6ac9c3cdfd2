use std::f64::consts::PI;

use slipchan::eigen::{self, beta_sweep, lambda_dirichlet, lambda_navier, solve_lambda, solve_lambda_big, solve_lambda_big_dirichlet};
use slipchan::{Error, Friction, WaveIndex};

fn two_dp(v: f64) -> String {
    format!("{v:.2}")
}

fn nonconst(m: u32, n: u32, p: u32) -> WaveIndex {
    WaveIndex::nonconstant(m, n, p).unwrap()
}

#[test]
fn constant_pressure_table_entries() {
    assert_eq!(two_dp(solve_lambda(&WaveIndex::constant(0, 0, 0), 1.0).unwrap().value), "0.74");
    assert_eq!(two_dp(solve_lambda(&WaveIndex::constant(0, 0, 0), 10.0).unwrap().value), "2.04");
    let shifted = solve_lambda(&WaveIndex::constant(1, 0, 0), 1.0).unwrap().value;
    let base = solve_lambda(&WaveIndex::constant(0, 0, 0), 1.0).unwrap().value;
    assert_eq!(two_dp(shifted), "1.74");
    assert!((shifted - 1.0 - base).abs() < 1e-12);
}

#[test]
fn lowest_root_against_scalar_equation() {
    // s tan s = β for the first even profile.
    let s = solve_lambda(&WaveIndex::constant(0, 0, 0), 1.0).unwrap().s;
    assert!((s * s.tan() - 1.0).abs() < 1e-12);
    assert!((s * s - 0.740_173_884_394_922_8).abs() < 1e-12);
}

#[test]
fn nonconstant_pressure_table_entries() {
    assert_eq!(two_dp(solve_lambda_big(&nonconst(1, 0, 0), 1.0).unwrap().value), "4.65");
    assert_eq!(two_dp(solve_lambda_big(&nonconst(1, 1, 0), 10.0).unwrap().value), "7.97");
    assert_eq!(two_dp(solve_lambda_big(&nonconst(2, 2, 0), 1.0).unwrap().value), "10.87");
}

#[test]
fn perfect_slip_closed_forms() {
    assert_eq!(lambda_navier(&WaveIndex::constant(0, 0, 0)), 0.0);
    assert!((lambda_navier(&WaveIndex::constant(1, 0, 1)) - (1.0 + PI * PI / 4.0)).abs() < 1e-14);
    assert_eq!(lambda_navier(&WaveIndex::constant(2, 1, 0)), 5.0);
}

#[test]
fn no_slip_closed_forms() {
    assert!((lambda_dirichlet(&WaveIndex::constant(0, 0, 1)).unwrap() - PI * PI / 4.0).abs() < 1e-14);
    assert!((lambda_dirichlet(&WaveIndex::constant(0, 0, 2)).unwrap() - PI * PI).abs() < 1e-14);
    assert_eq!(two_dp(lambda_dirichlet(&WaveIndex::constant(1, 1, 2)).unwrap()), "11.87");
    assert!(matches!(lambda_dirichlet(&WaveIndex::constant(0, 0, 0)), Err(Error::InvalidIndex(_))));
}

#[test]
fn no_slip_nonconstant_pressure_entries() {
    assert_eq!(two_dp(solve_lambda_big_dirichlet(&nonconst(1, 0, 0)).unwrap().value), "9.31");
    assert_eq!(two_dp(solve_lambda_big_dirichlet(&nonconst(1, 1, 0)).unwrap().value), "9.33");
    assert_eq!(two_dp(solve_lambda_big_dirichlet(&nonconst(4, 0, 0)).unwrap().value), "20.18");
}

#[test]
fn friction_sweeps() {
    let v = beta_sweep(&WaveIndex::constant(0, 0, 0), &[1.0, 10.0]).unwrap();
    assert_eq!([two_dp(v[0]), two_dp(v[1])], ["0.74", "2.04"]);
    let one = beta_sweep(&WaveIndex::constant(2, 1, 3), &[0.3]).unwrap();
    assert_eq!(one[0], solve_lambda(&WaveIndex::constant(2, 1, 3), 0.3).unwrap().value);
    let big = beta_sweep(&nonconst(1, 0, 0), &[1.0, 10.0, 1e4]).unwrap();
    assert!(big[0] < big[1] && big[1] < big[2]);
    // The approach to the no-slip limit is first order in 1/β.
    let limit = solve_lambda_big_dirichlet(&nonconst(1, 0, 0)).unwrap().value;
    let gap4 = limit - big[2];
    let gap5 = limit - solve_lambda_big(&nonconst(1, 0, 0), 1e5).unwrap().value;
    assert!(gap4 > 0.0 && gap4 < 2e-3, "{gap4}");
    assert!(gap5 < 1e-3 && (gap4 / gap5 - 10.0).abs() < 0.5, "{gap4} {gap5}");
}

#[test]
fn dispatch_rejects_perfect_slip_nonconstant_pressure() {
    assert!(matches!(eigen::eigenvalue(&nonconst(1, 0, 0), Friction::Navier), Err(Error::InvalidCase(_))));
}

#[test]
fn brackets_of_the_two_families_are_disjoint() {
    for (m, n, p) in [(1, 0, 0), (2, 1, 1), (3, 3, 2), (0, 1, 4)] {
        for beta in [0.1, 1.0, 10.0] {
            let f = Friction::Finite(beta);
            let lo = eigen::bracket(&WaveIndex::constant(m, n, p), f).unwrap().unwrap();
            let hi = eigen::bracket(&nonconst(m, n, p), f).unwrap().unwrap();
            assert!(lo.hi <= hi.lo + 1e-12, "({m},{n},{p}) β={beta}: {lo:?} vs {hi:?}");
        }
    }
}
