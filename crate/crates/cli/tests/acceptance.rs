//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use qlearn_core::baselines::{self, DesignMatrix};
use qlearn_core::dataset::toy_set;
use qlearn_core::hhl::{self, EigenvalueEncoding, HermitianSystem, HhlConfig};
use qlearn_core::linalg::{to_complex, to_complex_vec};
use qlearn_core::nalgebra::{DMatrix, DVector};
use qlearn_core::qsplines::{self, SplineFitOptions, TargetFunction};
use qlearn_core::qsvm::{self, KernelSpec, Solver};
use qlearn_core::vqc::{
    self, Ansatz, Example, FeatureMap, GradientMethod, Init, Loss, TrainConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_system(dim: usize, seed: u64) -> HermitianSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = hhl::random_hermitian(dim, 1.0, 2.0, &mut rng);
    let b = hhl::random_rhs(dim, &mut rng);
    HermitianSystem::new(a, b).unwrap()
}

fn hhl_fidelity(system: &HermitianSystem, config: &HhlConfig) -> f64 {
    let solution = hhl::hhl_solve(system, config).unwrap();
    let exact = hhl::classical_solve(system).unwrap();
    hhl::fidelity(&solution.state, exact.as_slice()).unwrap()
}

fn hhl_oracle_equivalence() -> Check {
    let mut worst = 1.0f64;
    for dim in [2, 4] {
        for seed in 0..20 {
            let system = random_system(dim, seed);
            let f = hhl_fidelity(&system, &hhl::choose_config(&system, 7));
            ensure(f >= 0.99, || {
                format!("{dim}×{dim} seed {seed}: fidelity {f}")
            })?;
            worst = worst.min(f);
        }
    }
    let a = to_complex(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0])));
    let b = to_complex_vec(&[1.0, 1.0]);
    let system = HermitianSystem::new(a, b).unwrap();
    let config = HhlConfig {
        clock_qubits: 2,
        evolution_time: FRAC_PI_2,
        rotation_constant: 0.99,
        tolerance: hhl::DEFAULT_TOLERANCE,
        encoding: EigenvalueEncoding::Unsigned,
    };
    let exact = hhl_fidelity(&system, &config);
    ensure(exact >= 1.0 - 1e-6, || {
        format!("diag(1,2): fidelity {exact}")
    })?;
    Ok(format!(
        "min random fidelity {worst:.6}, diag(1,2) fidelity {exact:.12}"
    ))
}

fn monotone_refinement() -> Check {
    let systems: Vec<_> = (0..20).map(|s| random_system(4, 100 + s)).collect();
    let mut medians = Vec::new();
    for m in 3..=8 {
        let mut f: Vec<f64> = systems
            .iter()
            .map(|s| hhl_fidelity(s, &hhl::choose_config(s, m)))
            .collect();
        f.sort_by(f64::total_cmp);
        medians.push((f[9] + f[10]) / 2.0);
    }
    ensure(medians.windows(2).all(|w| w[1] >= w[0]), || {
        format!("medians {medians:?}")
    })?;
    let shown: Vec<String> = medians.iter().map(|m| format!("{m:.5}")).collect();
    Ok(format!("median fidelity for m=3..8: {}", shown.join(" ")))
}

fn qspline_fidelity() -> Check {
    let grid = qsplines::build_grid(-10.0, 10.0, 20).unwrap();
    let mut summary = Vec::new();
    for target in [
        TargetFunction::Sigmoid,
        TargetFunction::Relu01,
        TargetFunction::Tanh01,
    ] {
        let model = qsplines::fit_target(target, &grid, SplineFitOptions::default()).unwrap();
        let oracle =
            qsplines::classical_spline_fit(|x| target.raw(x), model.codomain_scale, &grid).unwrap();
        let (mut worst, mut worst_overlap) = (0.0f64, 0.0f64);
        for i in 0..200 {
            let x = -10.0 + 20.0 * i as f64 / 199.0;
            let e = qsplines::evaluate_detailed(&model, x).unwrap();
            ensure((0.0..=1.0).contains(&e.overlap), || {
                format!("{}: overlap {} at {x}", target.name(), e.overlap)
            })?;
            let direct = qsplines::direct_overlap(&model.blocks[e.interval], x).unwrap();
            worst_overlap = worst_overlap.max((e.overlap - direct).abs());
            let classical = qsplines::classical_predict(&oracle, &grid, x).unwrap();
            worst = worst.max((e.scaled - classical).abs());
        }
        ensure(worst_overlap <= 1e-9, || {
            format!("{}: overlap mismatch {worst_overlap:e}", target.name())
        })?;
        ensure(worst <= 0.02, || {
            format!("{}: max deviation {worst}", target.name())
        })?;
        summary.push(format!("{} {worst:.4}", target.name()));
    }
    Ok(format!("max |quantum − classical|: {}", summary.join(", ")))
}

fn lssvm_equivalence() -> Check {
    let set = toy_set();
    let kernel = KernelSpec::quantum_for(&set).unwrap();
    let classical = qsvm::train(&set, &kernel, Solver::Classical).unwrap();
    let err = qsvm::training_error(&classical).unwrap();
    ensure(err == 0.0, || format!("classical training error {err}"))?;
    let quantum = qsvm::train(&set, &kernel, Solver::Hhl { clock_qubits: 7 }).unwrap();
    let rel = qsvm::relative_difference(&quantum.coefficients(), &classical.coefficients());
    ensure(rel <= 0.02, || format!("relative deviation {rel}"))?;
    Ok(format!(
        "training error 0, HHL relative deviation {rel:.2e}"
    ))
}

fn parameter_shift_exactness() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4);
        let ansatz = Ansatz::new(n, rng.random_range(1..=3)).unwrap();
        let map = FeatureMap::unscaled(n).unwrap();
        let theta = Init::Uniform.sample(ansatz.parameter_count(), &mut rng);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
        for j in 0..theta.len() {
            let shift = vqc::parameter_shift_grad(&map, &ansatz, &theta, &x, j).unwrap();
            let mut t = theta.clone();
            t[j] += 1e-6;
            let up = vqc::model_output(&map, &ansatz, &t, &x).unwrap();
            t[j] -= 2e-6;
            let down = vqc::model_output(&map, &ansatz, &t, &x).unwrap();
            let d = (shift - (up - down) / 2e-6).abs();
            ensure(d <= 1e-5, || {
                format!("seed {seed} parameter {j}: deviation {d:e}")
            })?;
            worst = worst.max(d);
        }
        let xs = [x.clone(), x.iter().map(|v| PI - v).collect()];
        let batch: Vec<_> = xs.iter().map(|x| Example { x, target: 1.0 }).collect();
        let g = vqc::full_gradient(
            &map,
            &ansatz,
            &theta,
            &batch,
            Loss::Mse,
            GradientMethod::ParameterShift,
        )
        .unwrap();
        let expected = 2 * ansatz.parameter_count() * batch.len();
        ensure(g.evaluations == expected, || {
            format!("{} evaluations, expected {expected}", g.evaluations)
        })?;
    }
    let map = FeatureMap::unscaled(1).unwrap();
    let ansatz = Ansatz::new(1, 1).unwrap();
    for i in 0..100 {
        let t = 2.0 * PI * i as f64 / 99.0;
        let g = vqc::parameter_shift_grad(&map, &ansatz, &[t, 0.0], &[0.0], 0).unwrap();
        ensure((g + t.sin()).abs() <= 1e-10, || {
            format!("single RY at θ={t}: {g}")
        })?;
    }
    Ok(format!(
        "max shift/difference gap {worst:.2e}; single-RY law and 2M count hold"
    ))
}

fn training_loop() -> Check {
    let set = toy_set();
    let map = FeatureMap::fit_angle(&set).unwrap();
    let ansatz = Ansatz::new(2, 2).unwrap();
    let config = TrainConfig {
        learning_rate: 0.1,
        epochs: 200,
        ..TrainConfig::default()
    };
    let a = vqc::train(&set, &map, &ansatz, &config).unwrap();
    let b = vqc::train(&set, &map, &ansatz, &config).unwrap();
    ensure(a == b, || "two runs with the same seed differ".into())?;
    let err = vqc::training_error(&set, &map, &ansatz, &a.theta).unwrap();
    ensure(err == 0.0, || format!("training error {err}"))?;
    Ok(format!(
        "training error 0, final loss {:.4}",
        a.history.last().unwrap()
    ))
}

fn barren_trend() -> Check {
    let qubits: Vec<usize> = (2..=8).collect();
    let table = vqc::barren_diagnostic(&qubits, 20, 200, 42).unwrap();
    let (v2, v8) = (table[0].1, table[6].1);
    ensure(v8 < v2, || format!("Var(8) = {v8} not below Var(2) = {v2}"))?;
    ensure(vqc::barren_trend_holds(&table), || {
        format!("table {table:?}")
    })?;
    Ok(format!("Var(2) = {v2:.4e}, Var(8) = {v8:.4e}"))
}

fn classical_baselines() -> Check {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, p) = (rng.random_range(5..40), rng.random_range(1..6));
        let features = DMatrix::from_fn(n, p, |_, _| rng.random_range(-3.0..3.0));
        let design = DesignMatrix::with_intercept(&features);
        let x = design.matrix();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let yv = DVector::from_column_slice(&y);
        let beta = baselines::ols_fit(&design, &y).unwrap();
        let residual = (x.transpose() * (&yv - x * &beta)).norm();
        let scale = (x.transpose() * &yv).norm();
        ensure(residual <= 1e-8 * scale, || {
            format!("seed {seed}: Xᵀr = {residual:e}")
        })?;
        let best = baselines::rss(&design, &y, &beta).unwrap();
        for _ in 0..100 {
            let delta =
                DVector::from_fn(beta.len(), |_, _| rng.random_range(-1.0..1.0)).normalize() * 0.1;
            let r = baselines::rss(&design, &y, &(&beta + delta)).unwrap();
            ensure(r >= best, || {
                format!("seed {seed}: perturbed RSS {r} below {best}")
            })?;
        }
        let planted = DVector::from_fn(p + 1, |_, _| rng.random_range(-2.0..2.0));
        let exact: Vec<f64> = (x * &planted).iter().copied().collect();
        let recovered = baselines::ols_fit(&design, &exact).unwrap();
        let gap = (&recovered - &planted).amax();
        ensure(gap <= 1e-10, || {
            format!("seed {seed}: planted coefficients off by {gap:e}")
        })?;
        let rss = baselines::rss(&design, &exact, &recovered).unwrap();
        ensure(rss <= 1e-18 * (1.0 + (x * &planted).norm_squared()), || {
            format!("seed {seed}: RSS {rss:e}")
        })?;
    }
    Ok("orthogonality, planted recovery and RSS optimality on 20 seeded problems".into())
}

fn cli_determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("qlearn-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let runs: [&[&str]; 6] = [
        &[
            "hhl",
            "--size",
            "4",
            "--clock-qubits",
            "6",
            "--trials",
            "20",
            "--seed",
            "7",
        ],
        &[
            "qspline",
            "--function",
            "sigmoid",
            "--knots",
            "20",
            "--range",
            "-10",
            "10",
            "--probe",
            "200",
        ],
        &["qsvm", "--solver", "both"],
        &["vqc-train", "--epochs", "50", "--seed", "3"],
        &[
            "barren",
            "--qubits-min",
            "2",
            "--qubits-max",
            "6",
            "--layers",
            "10",
            "--samples",
            "100",
        ],
        &["kernel-gram", "--kernel", "quantum"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for copy in 0..2 {
            let path = dir.join(format!("{}-{copy}.csv", args[0]));
            let status = Command::new(env!("CARGO_BIN_EXE_qlearn"))
                .args(args)
                .arg("--out")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?
                .status;
            ensure(status.success(), || {
                format!("{} exited with {status}", args[0])
            })?;
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || {
            format!("{} output differs between runs", args[0])
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("hhl, qspline, qsvm, vqc-train, barren, kernel-gram byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("HHL oracle equivalence", hhl_oracle_equivalence),
        ("monotone refinement", monotone_refinement),
        ("quantum spline fidelity", qspline_fidelity),
        ("LS-SVM solver equivalence", lssvm_equivalence),
        ("parameter-shift exactness", parameter_shift_exactness),
        ("training loop", training_loop),
        ("barren-plateau trend", barren_trend),
        ("classical baselines", classical_baselines),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{secs:.2} s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
