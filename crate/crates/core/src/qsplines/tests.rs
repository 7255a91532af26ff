use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[test]
fn grid_construction() {
    assert_eq!(build_grid(0.0, 1.0, 1).unwrap().knots(), &[0.0, 1.0]);
    assert_eq!(build_grid(-1.0, 1.0, 2).unwrap().knots(), &[-1.0, 0.0, 1.0]);
    assert!(matches!(build_grid(1.0, 0.0, 1), Err(Error::Domain(_))));
    assert!(matches!(build_grid(0.0, 1.0, 0), Err(Error::Domain(_))));
    assert!(matches!(
        KnotGrid::new(vec![0.0, 1.0, 1.0]),
        Err(Error::Domain(_))
    ));
}

#[test]
fn knots_belong_to_the_interval_on_their_right() {
    let grid = build_grid(-1.0, 1.0, 2).unwrap();
    assert_eq!(grid.locate(-1.0).unwrap(), 0);
    assert_eq!(grid.locate(-0.5).unwrap(), 0);
    assert_eq!(grid.locate(0.0).unwrap(), 1);
    assert_eq!(grid.locate(1.0).unwrap(), 1);
    assert!(matches!(
        grid.locate(1.0 + 1e-12),
        Err(Error::Extrapolation { .. })
    ));
    assert!(matches!(
        grid.locate(-2.0),
        Err(Error::Extrapolation { .. })
    ));
}

#[test]
fn block_assembly() {
    let (s, y) = assemble_block(|x| x, CodomainScale::IDENTITY, (0.0, 1.0)).unwrap();
    assert_eq!(
        s.as_slice(),
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]).as_slice()
    );
    assert_eq!(y, [0.0, 1.0]);

    let (_, y) = assemble_block(sigmoid, CodomainScale::IDENTITY, (-1.0, 0.0)).unwrap();
    assert!((y[0] - 0.268_941_421_369_995_1).abs() < 1e-12);
    assert_eq!(y[1], 0.5);

    let (s, y) = assemble_block(|_| 0.3, CodomainScale::IDENTITY, (2.0, 3.0)).unwrap();
    assert_eq!(y, [0.3, 0.3]);
    let beta = solve_block(&s, &y).unwrap();
    assert!((beta[0] - 0.3).abs() < 1e-15 && beta[1].abs() < 1e-15);

    let err = assemble_block(|x| 1.0 / x, CodomainScale::IDENTITY, (0.0, 1.0)).unwrap_err();
    assert!(matches!(err, Error::Evaluation(_)));
}

#[test]
fn codomain_maps_into_unit_interval() {
    for t in TargetFunction::ALL {
        let scale = t.codomain(-10.0, 10.0);
        for i in 0..=100 {
            let x = -10.0 + 0.2 * i as f64;
            let u = scale.forward(t.raw(x));
            assert!(
                (-1e-15..=1.0 + 1e-15).contains(&u),
                "{} at {x}: {u}",
                t.name()
            );
            assert!((scale.inverse(u) - t.raw(x)).abs() < 1e-12);
        }
    }
    assert_eq!(
        TargetFunction::from_name("relu01"),
        Some(TargetFunction::Relu01)
    );
    assert_eq!(TargetFunction::from_name("cosh"), None);
}

#[test]
fn fit_identity_on_unit_interval() {
    let grid = build_grid(0.0, 1.0, 1).unwrap();
    let model = fit(
        "x",
        |x| x,
        CodomainScale::IDENTITY,
        &grid,
        SplineFitOptions::default(),
    )
    .unwrap();
    let block = &model.blocks[0];
    assert!(block.beta_classical[0].abs() < 1e-15 && (block.beta_classical[1] - 1.0).abs() < 1e-15);
    assert!(block.fidelity.unwrap() >= 0.999);
    assert!((evaluate(&model, 0.5).unwrap() - 0.5).abs() < 1e-3);
}

#[test]
fn fit_constant() {
    let grid = build_grid(0.0, 1.0, 1).unwrap();
    let model = fit(
        "half",
        |_| 0.5,
        CodomainScale::IDENTITY,
        &grid,
        SplineFitOptions::default(),
    )
    .unwrap();
    let beta = model.blocks[0].beta_classical;
    assert!((beta[0] - 0.5).abs() < 1e-15 && beta[1].abs() < 1e-15);
    assert!((evaluate(&model, 0.25).unwrap() - 0.5).abs() < 1e-3);
}

#[test]
fn zero_targets_are_stored_classically() {
    let grid = build_grid(-2.0, 2.0, 2).unwrap();
    let model = fit_target(TargetFunction::Relu01, &grid, SplineFitOptions::default()).unwrap();
    assert!(model.blocks[0].is_degenerate());
    assert!(!model.blocks[1].is_degenerate());
    assert_eq!(evaluate(&model, -1.0).unwrap(), 0.0);
    assert!((evaluate(&model, 1.0).unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn sigmoid_blocks_and_midpoint() {
    let grid = build_grid(-10.0, 10.0, 20).unwrap();
    let model = fit_target(TargetFunction::Sigmoid, &grid, SplineFitOptions::default()).unwrap();
    assert_eq!(model.blocks.len(), 20);
    for block in &model.blocks {
        assert!(block.fidelity.unwrap() >= 0.99);
    }
    assert!((evaluate(&model, 0.0).unwrap() - 0.5).abs() < 2e-2);
    for i in 0..50 {
        let e = evaluate_detailed(&model, -10.0 + 0.4 * i as f64).unwrap();
        assert!((0.0..=1.0).contains(&e.overlap));
        assert!((0.5..=1.0).contains(&e.p0));
    }
    assert!(matches!(
        evaluate(&model, 10.5),
        Err(Error::Extrapolation { .. })
    ));
}

#[test]
fn classical_fit_examples() {
    let grid = build_grid(-3.0, 3.0, 6).unwrap();
    for beta in classical_spline_fit(|x| x, CodomainScale::IDENTITY, &grid).unwrap() {
        assert!(beta[0].abs() < 1e-14 && (beta[1] - 1.0).abs() < 1e-14);
    }
    let grid = build_grid(-1.0, 1.0, 2).unwrap();
    let betas = classical_spline_fit(f64::abs, CodomainScale::IDENTITY, &grid).unwrap();
    assert!(betas[0][0].abs() < 1e-15 && (betas[0][1] + 1.0).abs() < 1e-15);
    assert!(betas[1][0].abs() < 1e-15 && (betas[1][1] - 1.0).abs() < 1e-15);
}

#[test]
fn classical_fit_interpolates_at_knots() {
    let grid = build_grid(0.0, 2.0 * PI, 20).unwrap();
    let betas = classical_spline_fit(f64::sin, CodomainScale::IDENTITY, &grid).unwrap();
    let mut worst = 0.0f64;
    for (k, (a, b)) in grid.intervals().enumerate() {
        for x in [a, b] {
            worst = worst.max((betas[k][0] + betas[k][1] * x - x.sin()).abs());
        }
    }
    // elimination on 2×2 blocks leaves only rounding
    assert!(worst < 1e-14, "{worst}");
}

#[test]
fn block_diagonal_solve_matches_blockwise() {
    let grid = build_grid(-10.0, 10.0, 20).unwrap();
    let (s, y) = block_diagonal_system(sigmoid, CodomainScale::IDENTITY, &grid).unwrap();
    let full = linalg::solve(&s, &y).unwrap();
    let blocks = classical_spline_fit(sigmoid, CodomainScale::IDENTITY, &grid).unwrap();
    for (k, beta) in blocks.iter().enumerate() {
        assert!((full[2 * k] - beta[0]).abs() <= 1e-10);
        assert!((full[2 * k + 1] - beta[1]).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swap_test_back_transform_recovers_overlap(x in -10.0f64..10.0) {
        let grid = build_grid(-10.0, 10.0, 4).unwrap();
        let model = fit_target(TargetFunction::Tanh01, &grid, SplineFitOptions { clock_qubits: 6 }).unwrap();
        let e = evaluate_detailed(&model, x).unwrap();
        let direct = direct_overlap(&model.blocks[e.interval], x).unwrap();
        prop_assert!((e.overlap - direct).abs() < 1e-9);
    }
}
