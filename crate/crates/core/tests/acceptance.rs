//! The twelve acceptance criteria at their stated sizes and tolerances.
//! Each test prints its report line; run with `--nocapture` to see them.

use freelsd::validation::run_criterion;

fn check(id: u8) {
    let report = run_criterion(id);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_01_transform_identities() {
    check(1);
}

#[test]
fn criterion_02_closed_form_density_recovery() {
    check(2);
}

#[test]
fn criterion_03_marchenko_pastur_reduction() {
    check(3);
}

#[test]
fn criterion_04_separable_esd_vs_lsd() {
    check(4);
}

#[test]
fn criterion_05_toeplitz_esd() {
    check(5);
}

#[test]
fn criterion_06_mean_field_ar1() {
    check(6);
}

#[test]
fn criterion_07_wigner_spike_closed_forms() {
    check(7);
}

#[test]
fn criterion_08_spike_round_trip() {
    check(8);
}

#[test]
fn criterion_09_spiked_simulation() {
    check(9);
}

#[test]
fn criterion_10_shrinkage_experiment() {
    check(10);
}

#[test]
fn criterion_11_kronecker_structure() {
    check(11);
}

#[test]
fn criterion_12_half_plane_signs() {
    check(12);
}
