use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlearn_core::dataset::{self, TrainingSet};
use qlearn_core::hhl::{self, HermitianSystem};
use qlearn_core::linalg::{self, HermitianEigen};
use qlearn_core::qsplines::{self, SplineFitOptions, TargetFunction};
use qlearn_core::qsvm::{self, KernelKind, KernelSpec, Solver};
use qlearn_core::vqc::{
    self, Ansatz, EncodingScheme, FeatureMap, GradientMethod, Init, Loss, TrainConfig,
};
use qlearn_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "qlearn",
    version,
    about = "Quantum machine learning experiments on a statevector simulator"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// HHL fidelity against the classical solve on random Hermitian systems.
    Hhl(HhlArgs),
    /// Quantum spline fit of a registered activation function.
    Qspline(QsplineArgs),
    /// Least-squares SVM trained classically and/or with HHL.
    Qsvm(QsvmArgs),
    /// Variational classifier trained by parameter-shift gradient descent.
    VqcTrain(VqcArgs),
    /// Gradient variance of deep random circuits against qubit count.
    Barren(BarrenArgs),
    /// Gram matrix of a kernel over a data set.
    KernelGram(GramArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// File of `key = value` lines using long flag names; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HhlArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix order.
    #[arg(long, value_parser = ["2", "4", "8", "16"])]
    size: String,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=12))]
    clock_qubits: u8,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Eigenvalues are drawn uniformly from [LO, HI].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [1.0, 2.0], allow_negative_numbers = true)]
    spectrum: Vec<f64>,
    /// Every trial must reach this fidelity.
    #[arg(long, default_value_t = 0.99)]
    min_fidelity: f64,
}

#[derive(Args, Debug)]
struct QsplineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = TargetFunction::ALL.map(|t| t.name()))]
    function: String,
    /// Number of intervals.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    knots: u32,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-10.0, 10.0], allow_negative_numbers = true)]
    range: Vec<f64>,
    /// Number of evenly spaced evaluation points, endpoints included.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    probe: u32,
    #[arg(long, default_value_t = qsplines::DEFAULT_SPLINE_CLOCK_QUBITS as u8, value_parser = clap::value_parser!(u8).range(1..=16))]
    clock_qubits: u8,
    /// Largest allowed |quantum − classical| in [0, 1] units.
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KernelName {
    Quantum,
    Linear,
    Poly,
    Rbf,
}

#[derive(Args, Debug)]
struct KernelArgs {
    /// CSV with a header row and a final label column `y`; defaults to the bundled toy set.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = KernelName::Quantum)]
    kernel: KernelName,
    /// rbf width.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Polynomial degree.
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// Polynomial offset.
    #[arg(long, default_value_t = 1.0)]
    coef0: f64,
    #[arg(long, default_value_t = qsvm::DEFAULT_RIDGE)]
    ridge: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolverName {
    Classical,
    Hhl,
    Both,
}

#[derive(Args, Debug)]
struct QsvmArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long, value_enum, default_value_t = SolverName::Both)]
    solver: SolverName,
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u8).range(1..=12))]
    clock_qubits: u8,
    /// Largest allowed relative deviation of the HHL coefficients.
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    /// Largest allowed training error of each solver.
    #[arg(long, default_value_t = 0.0)]
    max_train_error: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LossName {
    Mse,
    Logistic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GradientName {
    Shift,
    Fd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InitName {
    Uniform,
    Small,
}

#[derive(Args, Debug)]
struct VqcArgs {
    #[command(flatten)]
    common: Common,
    /// CSV with a header row and a final label column `y`; defaults to the bundled toy set.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Qubit count; differing from the feature count selects repeated-angle encoding.
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, default_value_t = 2)]
    layers: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, value_enum, default_value_t = LossName::Mse)]
    loss: LossName,
    #[arg(long, value_enum, default_value_t = GradientName::Shift)]
    gradient: GradientName,
    #[arg(long, value_enum, default_value_t = InitName::Uniform)]
    init: InitName,
    /// Also write the trained parameters here.
    #[arg(long)]
    theta_out: Option<PathBuf>,
    /// Fail the run if the final training error exceeds this.
    #[arg(long)]
    max_train_error: Option<f64>,
}

#[derive(Args, Debug)]
struct BarrenArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=20))]
    qubits_min: u8,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(1..=20))]
    qubits_max: u8,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    layers: u32,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    samples: u32,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    kernel: KernelArgs,
}

pub struct Outcome {
    pub path: PathBuf,
    pub rows: usize,
    pub failures: Vec<String>,
}

struct Table {
    text: String,
    rows: usize,
}

impl Table {
    fn new(header: &str, columns: &[String]) -> Self {
        Self {
            text: format!("{header}{}\n", columns.join(",")),
            rows: 0,
        }
    }

    fn row<T: std::fmt::Display>(&mut self, fields: &[T]) {
        let line: Vec<String> = fields.iter().map(ToString::to_string).collect();
        writeln!(self.text, "{}", line.join(",")).expect("writing to a String");
        self.rows += 1;
    }

    fn write(self, path: &Path, failures: Vec<String>) -> Result<Outcome> {
        std::fs::write(path, &self.text)
            .map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
        Ok(Outcome {
            path: path.to_path_buf(),
            rows: self.rows,
            failures,
        })
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn run(cli: Cli, header: &str) -> Result<Outcome> {
    match cli.command {
        Command::Hhl(a) => run_hhl(a, header),
        Command::Qspline(a) => run_qspline(a, header),
        Command::Qsvm(a) => run_qsvm(a, header),
        Command::VqcTrain(a) => run_vqc(a, header),
        Command::Barren(a) => run_barren(a, header),
        Command::KernelGram(a) => run_gram(a, header),
    }
}

fn run_hhl(a: HhlArgs, header: &str) -> Result<Outcome> {
    let size: usize = a.size.parse().expect("restricted by the parser");
    let (lo, hi) = (a.spectrum[0], a.spectrum[1]);
    if !(lo > 0.0 && hi >= lo) && !(hi < 0.0 && lo <= hi) {
        return Err(Error::Domain(format!(
            "spectrum [{lo}, {hi}] must be ordered and exclude 0"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut table = Table::new(
        header,
        &cols(&[
            "trial",
            "size",
            "clock_qubits",
            "kappa",
            "fidelity",
            "success_prob",
        ]),
    );
    let mut failures = Vec::new();
    for trial in 0..a.trials {
        let matrix = hhl::random_hermitian(size, lo, hi, &mut rng);
        let rhs = hhl::random_rhs(size, &mut rng);
        let system = HermitianSystem::new(matrix, rhs)?;
        let config = hhl::choose_config(&system, a.clock_qubits as usize);
        let solution = hhl::hhl_solve(&system, &config)?;
        let classical = hhl::classical_solve(&system)?;
        let fidelity = hhl::fidelity(&solution.state, classical.as_slice())?;
        if fidelity < a.min_fidelity {
            failures.push(format!(
                "trial {trial}: fidelity {fidelity} below {}",
                a.min_fidelity
            ));
        }
        table.row(&[
            trial.to_string(),
            size.to_string(),
            a.clock_qubits.to_string(),
            system.condition_number().to_string(),
            fidelity.to_string(),
            solution.success_probability.to_string(),
        ]);
    }
    table.write(&a.common.out, failures)
}

fn run_qspline(a: QsplineArgs, header: &str) -> Result<Outcome> {
    let target = TargetFunction::from_name(&a.function).expect("restricted by the parser");
    let (lo, hi) = (a.range[0], a.range[1]);
    let grid = qsplines::build_grid(lo, hi, a.knots as usize)?;
    let options = SplineFitOptions {
        clock_qubits: a.clock_qubits as usize,
    };
    let model = qsplines::fit_target(target, &grid, options)?;
    let scale = model.codomain_scale;
    let oracle = qsplines::classical_spline_fit(|x| target.raw(x), scale, &grid)?;
    let mut table = Table::new(
        header,
        &cols(&[
            "x",
            "true_value",
            "classical_estimate",
            "quantum_estimate",
            "abs_err_quantum",
        ]),
    );
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let p = a.probe as usize;
    for i in 0..p {
        let x = if p == 1 {
            (lo + hi) / 2.0
        } else {
            lo + (hi - lo) * i as f64 / (p - 1) as f64
        };
        let eval = qsplines::evaluate_detailed(&model, x)?;
        if !(0.0..=1.0).contains(&eval.overlap) {
            failures.push(format!(
                "overlap {} at x = {x} outside [0, 1]",
                eval.overlap
            ));
        }
        let classical = qsplines::classical_predict(&oracle, &grid, x)?;
        let err = (eval.scaled - classical).abs();
        worst = worst.max(err);
        table.row(&[x, scale.forward(target.raw(x)), classical, eval.scaled, err]);
    }
    if worst > a.tolerance {
        failures.push(format!(
            "max |quantum − classical| = {worst} exceeds {}",
            a.tolerance
        ));
    }
    table.write(&a.common.out, failures)
}

fn load(data: &Option<PathBuf>) -> Result<TrainingSet> {
    let set = match data {
        Some(p) => dataset::read_csv(p)?,
        None => dataset::toy_set(),
    };
    for (i, j) in set.conflicting_duplicates() {
        eprintln!("warning: examples {i} and {j} share features but not labels");
    }
    Ok(set)
}

fn kernel_spec(k: &KernelArgs, data: &TrainingSet) -> Result<KernelSpec> {
    let kind = match k.kernel {
        KernelName::Quantum => KernelKind::Quantum(FeatureMap::fit_angle(data)?),
        KernelName::Linear => KernelKind::Linear,
        KernelName::Poly => KernelKind::Polynomial {
            degree: k.degree,
            coef0: k.coef0,
        },
        KernelName::Rbf => KernelKind::Rbf { gamma: k.gamma },
    };
    KernelSpec::new(kind, k.ridge)
}

fn run_qsvm(a: QsvmArgs, header: &str) -> Result<Outcome> {
    let data = load(&a.kernel.data)?;
    let kernel = kernel_spec(&a.kernel, &data)?;
    let mut columns = cols(&["solver", "w0"]);
    columns.extend((1..=data.len()).map(|i| format!("gamma_{i}")));
    columns.push("train_error".into());
    let mut table = Table::new(header, &columns);
    let mut failures = Vec::new();
    let mut solvers = Vec::new();
    if a.solver != SolverName::Hhl {
        solvers.push(("classical", Solver::Classical));
    }
    if a.solver != SolverName::Classical {
        solvers.push((
            "hhl",
            Solver::Hhl {
                clock_qubits: a.clock_qubits as usize,
            },
        ));
    }
    let mut coefficients = Vec::new();
    for (name, solver) in solvers {
        let model = qsvm::train(&data, &kernel, solver)?;
        let err = qsvm::training_error(&model)?;
        if err > a.max_train_error {
            failures.push(format!(
                "{name} training error {err} exceeds {}",
                a.max_train_error
            ));
        }
        let mut row = vec![name.to_string()];
        row.extend(model.coefficients().iter().map(ToString::to_string));
        row.push(err.to_string());
        table.row(&row);
        coefficients.push(model.coefficients());
    }
    if let [classical, quantum] = coefficients.as_slice() {
        let rel = qsvm::relative_difference(quantum, classical);
        if rel > a.tolerance {
            failures.push(format!(
                "HHL coefficients deviate by {rel} (relative), above {}",
                a.tolerance
            ));
        }
    }
    table.write(&a.common.out, failures)
}

fn run_vqc(a: VqcArgs, header: &str) -> Result<Outcome> {
    let data = load(&a.data)?;
    let n = a.qubits.unwrap_or(data.n_features());
    let scheme = if n == data.n_features() {
        EncodingScheme::Angle
    } else {
        EncodingScheme::RepeatedAngle
    };
    let map = FeatureMap::new(n, scheme, &data.feature_ranges())?;
    let ansatz = Ansatz::new(n, a.layers)?;
    let config = TrainConfig {
        learning_rate: a.lr,
        epochs: a.epochs,
        seed: a.common.seed,
        loss: match a.loss {
            LossName::Mse => Loss::Mse,
            LossName::Logistic => Loss::Logistic,
        },
        gradient: match a.gradient {
            GradientName::Shift => GradientMethod::ParameterShift,
            GradientName::Fd => GradientMethod::FiniteDifference,
        },
        init: match a.init {
            InitName::Uniform => Init::Uniform,
            InitName::Small => Init::Small,
        },
    };
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let theta0 = config.init.sample(ansatz.parameter_count(), &mut rng);
    let mut table = Table::new(header, &cols(&["epoch", "loss", "train_error"]));
    let mut last_error = 0.0;
    let result = vqc::train_observed(
        &data,
        &map,
        &ansatz,
        &config,
        theta0,
        |epoch, theta, loss| {
            last_error = vqc::training_error(&data, &map, &ansatz, theta)?;
            table.row(&[epoch as f64, loss, last_error]);
            Ok(())
        },
    )?;
    if let Some(path) = &a.theta_out {
        vqc::write_theta(path, &ansatz, &result.theta)?;
    }
    let mut failures = Vec::new();
    if let Some(max) = a.max_train_error {
        if last_error > max {
            failures.push(format!("final training error {last_error} exceeds {max}"));
        }
    }
    table.write(&a.common.out, failures)
}

fn run_barren(a: BarrenArgs, header: &str) -> Result<Outcome> {
    if a.qubits_min > a.qubits_max {
        return Err(Error::Domain("qubits-min exceeds qubits-max".into()));
    }
    let qubits: Vec<usize> = (a.qubits_min as usize..=a.qubits_max as usize).collect();
    let rows = vqc::barren_diagnostic(
        &qubits,
        a.layers as usize,
        a.samples as usize,
        a.common.seed,
    )?;
    let mut table = Table::new(header, &cols(&["n_qubits", "layers", "grad_variance"]));
    for &(n, v) in &rows {
        table.row(&[n.to_string(), a.layers.to_string(), v.to_string()]);
    }
    let mut failures = Vec::new();
    if rows.len() >= 2 && !vqc::barren_trend_holds(&rows) {
        failures.push("gradient variance does not decay with qubit count".into());
    }
    table.write(&a.common.out, failures)
}

fn run_gram(a: GramArgs, header: &str) -> Result<Outcome> {
    let data = load(&a.kernel.data)?;
    let kernel = kernel_spec(&a.kernel, &data)?;
    let gram = qsvm::gram_matrix(&data, &kernel)?;
    let n = data.len();
    let columns: Vec<String> = (1..=n).map(|j| format!("k_{j}")).collect();
    let mut table = Table::new(header, &columns);
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| gram[(i, j)]).collect();
        table.row(&row);
    }
    let min_eig = HermitianEigen::new(&linalg::to_complex(&gram)).values[0];
    let mut failures = Vec::new();
    if min_eig < -1e-8 * gram.amax().max(1.0) {
        failures.push(format!("Gram matrix has eigenvalue {min_eig}"));
    }
    table.write(&a.common.out, failures)
}
