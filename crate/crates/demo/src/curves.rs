use qlearn_core::hhl::{self, HermitianSystem};
use qlearn_core::qsplines::{self, SplineFitOptions, TargetFunction};
use qlearn_core::vqc;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Bound on the simulated register so a click cannot hang the page.
const MAX_DEMO_QUBITS: usize = 18;

pub fn qspline_curve(
    function: &str,
    intervals: usize,
    clock_qubits: usize,
    probes: usize,
) -> Result<Vec<f64>, String> {
    let target = TargetFunction::from_name(function)
        .ok_or_else(|| format!("unknown function {function:?}"))?;
    if probes < 2 {
        return Err("need at least two probe points".into());
    }
    if clock_qubits + 3 > MAX_DEMO_QUBITS {
        return Err(format!("at most {} clock qubits", MAX_DEMO_QUBITS - 3));
    }
    let (lo, hi) = (-10.0, 10.0);
    let grid = qsplines::build_grid(lo, hi, intervals).map_err(|e| e.to_string())?;
    let model = qsplines::fit_target(target, &grid, SplineFitOptions { clock_qubits })
        .map_err(|e| e.to_string())?;
    let scale = model.codomain_scale;
    let oracle = qsplines::classical_spline_fit(|x| target.raw(x), scale, &grid)
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(4 * probes);
    for i in 0..probes {
        let x = lo + (hi - lo) * i as f64 / (probes - 1) as f64;
        let q = qsplines::evaluate_detailed(&model, x).map_err(|e| e.to_string())?;
        let c = qsplines::classical_predict(&oracle, &grid, x).map_err(|e| e.to_string())?;
        out.extend([x, scale.forward(target.raw(x)), c, q.scaled]);
    }
    Ok(out)
}

pub fn hhl_sweep(
    size: usize,
    m_min: usize,
    m_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if !matches!(size, 2 | 4 | 8) {
        return Err("size must be 2, 4 or 8".into());
    }
    if m_min == 0 || m_min > m_max || size.trailing_zeros() as usize + m_max + 1 > MAX_DEMO_QUBITS {
        return Err("invalid clock range".into());
    }
    if trials == 0 {
        return Err("need at least one trial".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let systems = (0..trials)
        .map(|_| {
            let a = hhl::random_hermitian(size, 1.0, 2.0, &mut rng);
            let b = hhl::random_rhs(size, &mut rng);
            HermitianSystem::new(a, b)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for m in m_min..=m_max {
        let mut fids = systems
            .iter()
            .map(|s| {
                let sol = hhl::hhl_solve(s, &hhl::choose_config(s, m))?;
                hhl::fidelity(&sol.state, hhl::classical_solve(s)?.as_slice())
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        fids.sort_by(f64::total_cmp);
        let k = fids.len();
        let median = if k % 2 == 1 {
            fids[k / 2]
        } else {
            (fids[k / 2 - 1] + fids[k / 2]) / 2.0
        };
        out.extend([m as f64, median, fids[0]]);
    }
    Ok(out)
}

pub fn barren_variance(
    n_max: usize,
    layers: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if !(2..=12).contains(&n_max) {
        return Err("n_max must be between 2 and 12".into());
    }
    let qubits: Vec<usize> = (2..=n_max).collect();
    let table =
        vqc::barren_diagnostic(&qubits, layers, samples, seed).map_err(|e| e.to_string())?;
    Ok(table.into_iter().flat_map(|(n, v)| [n as f64, v]).collect())
}
