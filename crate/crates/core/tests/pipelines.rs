//! End-to-end runs through the public API, one per pipeline.

use qlearn_core::dataset::toy_set;
use qlearn_core::hhl::{self, make_hermitian};
use qlearn_core::linalg::{CMatrix, CVector};
use qlearn_core::qsplines::{self, SplineFitOptions, TargetFunction};
use qlearn_core::qsvm::{self, KernelSpec, Solver};
use qlearn_core::vqc::{self, Ansatz, FeatureMap, TrainConfig};
use qlearn_core::Complex64;

#[test]
fn hhl_recovers_a_non_hermitian_solution() {
    let c = |re: f64| Complex64::new(re, 0.0);
    let a = CMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(3.0)]);
    let b = CVector::from_column_slice(&[c(1.0), c(2.0)]);
    let system = make_hermitian(&a, &b).unwrap();
    let config = hhl::choose_config(&system, 10);
    let solution = hhl::hhl_solve(&system, &config).unwrap();
    let x = system.extract_solution(solution.rescaled(&system).as_slice());
    // A x = b has x = (1/6, 2/3).
    assert!((x[0].re - 1.0 / 6.0).abs() < 1e-2, "{x:?}");
    assert!((x[1].re - 2.0 / 3.0).abs() < 1e-2, "{x:?}");
}

#[test]
fn quantum_spline_tracks_sigmoid() {
    let grid = qsplines::build_grid(-10.0, 10.0, 20).unwrap();
    let model =
        qsplines::fit_target(TargetFunction::Sigmoid, &grid, SplineFitOptions::default()).unwrap();
    for i in 0..=40 {
        let x = -10.0 + 0.5 * i as f64;
        let e = qsplines::evaluate_detailed(&model, x).unwrap();
        let truth = 1.0 / (1.0 + (-x).exp());
        assert!(
            (e.value - truth).abs() < 0.02,
            "x = {x}: {} vs {truth}",
            e.value
        );
    }
}

#[test]
fn lssvm_separates_toy_set_with_both_solvers() {
    let data = toy_set();
    let kernel = KernelSpec::quantum_for(&data).unwrap();
    let classical = qsvm::train(&data, &kernel, Solver::Classical).unwrap();
    let quantum = qsvm::train(&data, &kernel, Solver::Hhl { clock_qubits: 7 }).unwrap();
    assert_eq!(qsvm::training_error(&classical).unwrap(), 0.0);
    assert_eq!(qsvm::training_error(&quantum).unwrap(), 0.0);
    let gap = qsvm::relative_difference(&quantum.coefficients(), &classical.coefficients());
    assert!(gap < 0.02, "{gap}");
}

#[test]
fn vqc_learns_toy_set() {
    let data = toy_set();
    let map = FeatureMap::fit_angle(&data).unwrap();
    let ansatz = Ansatz::new(2, 2).unwrap();
    let result = vqc::train(&data, &map, &ansatz, &TrainConfig::default()).unwrap();
    assert!(result.history.last().unwrap() < result.history.first().unwrap());
    assert_eq!(
        vqc::training_error(&data, &map, &ansatz, &result.theta).unwrap(),
        0.0
    );
}
