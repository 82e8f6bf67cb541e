use fracdyn::fde_solvers::{catalog, residual_check, solve, ProblemSpec};
use fracdyn::fracops::gamma_fn;

fn max_error(spec: &ProblemSpec, n: usize, exact: impl Fn(f64) -> f64) -> f64 {
    let sol = solve(spec, 1.0, n).unwrap();
    sol.x
        .taus()
        .zip(sol.x.values())
        .map(|(t, v)| (v - exact(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn manufactured_square_converges_at_least_linearly() {
    let spec = ProblemSpec::direct(0.5, 0.25, 0.0, catalog::manufactured_power_direct(0.5, 2.0).unwrap()).unwrap();
    let errs: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| max_error(&spec, n, |t| t * t))
        .collect();
    assert!(errs[2] <= 1e-3, "error at 2048: {}", errs[2]);
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.0, "order {order} from {errs:?}");
    }
}

#[test]
fn sequential_zero_source_is_exact() {
    let (alpha, b1, b2) = (0.5, 1.0, 1.0);
    let spec = ProblemSpec::sequential(alpha, 0.25, b1, b2, catalog::zero()).unwrap();
    let lift = b2 / gamma_fn(alpha + 1.0).unwrap();
    let err = max_error(&spec, 2048, |t| b1 + lift * t.powf(alpha));
    assert!(err <= 1e-10, "{err}");
}

#[test]
fn sequential_manufactured_power_converges() {
    let spec = ProblemSpec::sequential(
        0.5,
        0.25,
        0.0,
        0.0,
        catalog::manufactured_power_sequential(0.5, 2.0).unwrap(),
    )
    .unwrap();
    let coarse = max_error(&spec, 512, |t| t * t);
    let fine = max_error(&spec, 1024, |t| t * t);
    assert!(fine < 1e-3 && coarse / fine > 1.8, "{coarse} -> {fine}");
}

#[test]
fn corrector_stays_within_iteration_cap_and_residual_is_small() {
    let spec = ProblemSpec::sequential(0.5, 0.25, 1.0, 1.0, catalog::exp_sublinear(0.5).unwrap()).unwrap();
    let sol = solve(&spec, 20.0, 2048).unwrap();
    assert!(sol.corrector_iterations.iter().all(|&k| k <= 10));
    assert!(residual_check(&sol).unwrap() < 1e-3);
}

#[test]
fn rejects_degenerate_grids() {
    let spec = ProblemSpec::direct(0.5, 0.0, 1.0, catalog::zero()).unwrap();
    assert!(solve(&spec, 1.0, 1).is_err());
    assert!(solve(&spec, -1.0, 16).is_err());
    assert!(solve(&spec, f64::NAN, 16).is_err());
}
