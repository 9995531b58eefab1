//! Acceptance gate: every headline criterion in one integration target,
//! printed as one PASS/FAIL line each. Run with `--nocapture` to see the
//! table; the test fails if any criterion fails.

use std::time::Instant;

use bbkit_core::funcgrid::{
    chi_value, fourier_transform, Grid, LibraryFunction, SampledFunction,
};
use bbkit_core::kernels::{
    kernel_stft, kernel_stft_oracle, kernel_stft_roundtrip, projective_bound_check, tensor_embed,
};
use bbkit_core::kothe::{
    build_phi0, check_kothe_n, kothe_from_system, sampling_s, verify_s_t_identity, IndexWindow,
    IndexedSequence,
};
use bbkit_core::report::Variant;
use bbkit_core::stft::{
    nuclearity_inequality_check, reconstruct, stft, stft_quadrature_oracle, verify_adjoint_bound,
    verify_stft_bound, BoundWeights,
};
use bbkit_core::weights::{
    check_alpha, check_condition_m, check_condition_n, check_gamma, nachbin_integrable_majorant,
    nachbin_moderate, QuadratureSpec, SearchSpec, WeightExpr, WeightFunction, WeightSystem,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn record(&mut self, name: &str, pass: bool, detail: &str) {
        println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures.push(name.to_string());
        }
    }
}

fn gaussian(grid: Grid) -> SampledFunction {
    LibraryFunction::Gaussian.sample(grid).unwrap()
}

fn factorials(p_max: usize, power: u32) -> Vec<f64> {
    let mut m = vec![1.0f64];
    for p in 1..=p_max {
        m.push(m[p - 1] * p as f64);
    }
    m.into_iter().map(|v| v.powi(power as i32)).collect()
}

fn generator_library() -> Vec<(&'static str, WeightExpr)> {
    vec![
        ("zero", WeightExpr::Zero),
        ("abs", WeightExpr::power(1.0, 1.0)),
        ("sqrt-abs", WeightExpr::power(1.0, 0.5)),
        ("square", WeightExpr::power(1.0, 2.0)),
        ("log", WeightExpr::log_power(1.0, 1.0)),
        ("log-squared", WeightExpr::log_power(1.0, 2.0)),
        ("exp-abs", WeightExpr::ExpAbs { a: 1.0 }),
        ("factorial", WeightExpr::sequence(factorials(8, 1)).unwrap()),
        ("factorial-squared", WeightExpr::sequence(factorials(8, 2)).unwrap()),
    ]
}

fn criterion_1_reconstruction(gate: &mut Gate) {
    let start = Instant::now();
    let grid = Grid::new(1, 256, 1.0 / 16.0).unwrap();
    let g = gaussian(grid);
    let (_, err) = reconstruct(&g, &g, &g).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    gate.record(
        "reconstruction identity",
        err <= 1e-5 && elapsed < 5.0,
        &format!("sup error {err:.2e} (tol 1e-5), {elapsed:.2} s"),
    );
}

fn criterion_2_self_duality(gate: &mut Gate) {
    let grid = Grid::new(1, 256, 1.0 / 16.0).unwrap();
    let g = gaussian(grid);
    let fourier_err = fourier_transform(&g).sup_error(&g).unwrap();
    let fast = stft(&g, &g).unwrap();
    let slow = stft_quadrature_oracle(&g, &g).unwrap();
    let mut oracle_err = 0.0f64;
    for a in (0..256).step_by(8) {
        for k in (0..256).step_by(8) {
            let i = a * 256 + k;
            oracle_err = oracle_err.max((fast.values[i] - slow.values[i]).norm());
        }
    }
    gate.record(
        "gaussian self-duality",
        fourier_err <= 1e-10 && oracle_err <= 1e-8,
        &format!("transform error {fourier_err:.2e}, oracle error {oracle_err:.2e} on 32x32 subgrid"),
    );
}

fn criterion_3_continuity_bounds(gate: &mut Gate) {
    let grid = Grid::new(1, 256, 1.0 / 16.0).unwrap();
    let system = WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap();
    let analysis_weights = BoundWeights::from_system(&system, [1.0, 0.5, 0.5, 0.5]).unwrap();
    let synthesis_weights =
        BoundWeights::from_system(&system, [1.0 / 3.0, 1.0, 1.0, 1.0]).unwrap();
    let mut quad = QuadratureSpec::default();
    quad.dim = 1;
    let g = gaussian(grid);
    let mut rng = StdRng::seed_from_u64(42);
    let mut failures = 0usize;
    let mut max_lhs_over_rhs = 0.0f64;
    for _ in 0..20 {
        let f = LibraryFunction::ModulatedGaussian {
            shift: vec![rng.gen_range(-2.0..2.0)],
            modulation: vec![rng.gen_range(-2.0..2.0)],
        }
        .sample(grid)
        .unwrap();
        let a = verify_stft_bound(&f, &g, &analysis_weights, 1.0, 1.0).unwrap();
        let tf = stft(&f, &g.reflect()).unwrap();
        let s = verify_adjoint_bound(&tf, &g, &synthesis_weights, 1.0, &quad).unwrap();
        for r in [&a, &s] {
            if !r.pass {
                failures += 1;
            }
            if r.rhs > 0.0 {
                max_lhs_over_rhs = max_lhs_over_rhs.max(r.lhs / r.rhs);
            }
        }
    }
    gate.record(
        "analysis/synthesis continuity bounds",
        failures == 0,
        &format!("20 randomized inputs, {failures} failures, max lhs/rhs {max_lhs_over_rhs:.3}"),
    );
}

fn criterion_4_checker_coherence(gate: &mut Gate) {
    let search = SearchSpec::default();
    let quad = QuadratureSpec::default();
    let mut mismatches = Vec::new();
    for (name, omega) in generator_library() {
        let system = WeightSystem::exponential(omega.clone(), 1).unwrap();
        let alpha = check_alpha(&omega, &search).unwrap().holds();
        for variant in [Variant::Beurling, Variant::Roumieu] {
            let m = check_condition_m(&system, variant, &search).unwrap().holds();
            if m != alpha {
                mismatches.push(format!("{name}/{variant:?}: moderation {m} vs alpha {alpha}"));
            }
            if omega.is_radial() {
                let gamma = check_gamma(&omega, variant, &search).unwrap().holds();
                let n = check_condition_n(&system, variant, &quad).unwrap().holds();
                if n != gamma {
                    mismatches.push(format!("{name}/{variant:?}: ratio-integrability {n} vs growth {gamma}"));
                }
            }
        }
    }
    gate.record(
        "condition-checker coherence",
        mismatches.is_empty(),
        &format!(
            "{} generators x 2 variants; mismatches: {:?}",
            generator_library().len(),
            mismatches
        ),
    );
}

fn criterion_5_lattice_equivalence(gate: &mut Gate) {
    let quad = QuadratureSpec::default();
    let window = IndexWindow::new(1, 5).unwrap();
    let mut mismatches = Vec::new();
    for (name, omega) in generator_library() {
        let system = WeightSystem::exponential(omega, 1).unwrap();
        let set = kothe_from_system(&system, window, quad.lambda_lattice.clone()).unwrap();
        for variant in [Variant::Beurling, Variant::Roumieu] {
            let discrete = check_kothe_n(&set, variant, &quad).unwrap().holds();
            let continuous = check_condition_n(&system, variant, &quad).unwrap().holds();
            if discrete != continuous {
                mismatches.push(format!("{name}/{variant:?}"));
            }
        }
    }
    // closed-form geometric series for the |j| generator at λ=1, μ=1/2
    let abs = WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap();
    let set = kothe_from_system(&abs, window, vec![1.0]).unwrap();
    let report = check_kothe_n(&set, Variant::Beurling, &quad).unwrap();
    let sum = report.witnesses[0]
        .notes
        .iter()
        .find(|(k, _)| k == "truncated_sum")
        .map(|(_, v)| *v)
        .unwrap_or(f64::NAN);
    let e1 = (-1.0f64).exp();
    let expected = (1.0 + e1) / (1.0 - e1);
    let series_ok = (sum - expected).abs() <= 1e-6;
    gate.record(
        "lattice/continuum summability equivalence",
        mismatches.is_empty() && series_ok,
        &format!(
            "mismatches {:?}; geometric series {sum:.7} vs {expected:.7}",
            mismatches
        ),
    );
}

fn criterion_6_sampling_machinery(gate: &mut Gate) {
    // exact delta values of the sinc kernel on the half-integer lattice
    let mut chi_exact = true;
    for j in -10i64..=10 {
        let expected = if j == 0 { 1.0 } else { 0.0 };
        if chi_value(&[j as f64 / 2.0]) != expected {
            chi_exact = false;
        }
    }
    let grid = Grid::new(1, 4096, 1.0 / 128.0).unwrap();
    let phi0 = build_phi0(&gaussian(grid)).unwrap();
    // half-cell integrals reproduce the delta sequence
    let window = IndexWindow::new(1, 5).unwrap();
    let samples = sampling_s(&phi0, window).unwrap();
    let mut max_delta_dev = 0.0f64;
    for j in -5i64..=5 {
        let expected = if j == 0 { 1.0 } else { 0.0 };
        let v = samples.get(&[j]).unwrap();
        max_delta_dev = max_delta_dev.max((v - Complex64::new(expected, 0.0)).norm());
    }
    // sampling inverts the translate embedding on random coefficients
    let idwin = IndexWindow::new(1, 3).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let mut identity_err = 0.0f64;
    for _ in 0..5 {
        let values: Vec<Complex64> = (0..idwin.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let c = IndexedSequence::from_values(idwin, values).unwrap();
        let (_, e) = verify_s_t_identity(&c, &phi0).unwrap();
        identity_err = identity_err.max(e);
    }
    gate.record(
        "sampling/translation machinery",
        chi_exact && max_delta_dev <= 1e-6 && identity_err <= 1e-5,
        &format!(
            "chi exact {chi_exact}, delta deviation {max_delta_dev:.2e} (tol 1e-6), identity error {identity_err:.2e} (tol 1e-5)"
        ),
    );
}

fn criterion_7_kernel_roundtrip(gate: &mut Gate) {
    let start = Instant::now();
    let grid = Grid::new(1, 32, 0.25).unwrap();
    let g = gaussian(grid);
    let h1 = LibraryFunction::Hermite1.sample(grid).unwrap();
    let rank1 = tensor_embed(&[g.clone()], &[g.clone()]).unwrap();
    let (_, r1) = kernel_stft_roundtrip(&rank1, &g, &g, &g, &g).unwrap();
    let rank2 = tensor_embed(&[g.clone(), h1.clone()], &[h1.clone(), g.clone()]).unwrap();
    let (_, r2) = kernel_stft_roundtrip(&rank2, &g, &g, &g, &g).unwrap();
    // nested factorization against the flat 4-d quadrature
    let small = Grid::new(1, 16, 0.25).unwrap();
    let gs = gaussian(small);
    let hs = LibraryFunction::Hermite1.sample(small).unwrap();
    let k = tensor_embed(&[gs.clone()], &[hs]).unwrap();
    let nested = kernel_stft(&k, &gs, &gs).unwrap();
    let direct = kernel_stft_oracle(&k, &gs, &gs).unwrap();
    let factor_err = nested.sup_error(&direct).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    gate.record(
        "kernel round-trip",
        r1.sup_error <= 1e-3 && r2.sup_error <= 1e-3 && factor_err <= 1e-6 && elapsed < 60.0,
        &format!(
            "rank-1 {:.2e}, rank-2 {:.2e} (tol 1e-3), nested-vs-direct {factor_err:.2e} (tol 1e-6), {elapsed:.1} s",
            r1.sup_error, r2.sup_error
        ),
    );
}

fn criterion_8_projective_bound(gate: &mut Gate) {
    let grid = Grid::new(1, 128, 1.0 / 8.0).unwrap();
    let one = WeightFunction::one(1);
    let abs = WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap();
    let decayed = abs.weight_fn(1.0).unwrap();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut violations = 0usize;
    for trial in 0..20 {
        let rank = rng.gen_range(1..=3usize);
        let random_factor = |rng: &mut StdRng| {
            let base = if rng.gen_bool(0.5) {
                LibraryFunction::Gaussian.sample(grid).unwrap()
            } else {
                LibraryFunction::ModulatedGaussian {
                    shift: vec![rng.gen_range(-1.0..1.0)],
                    modulation: vec![rng.gen_range(-1.0..1.0)],
                }
                .sample(grid)
                .unwrap()
            };
            base.scale(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        };
        let phis: Vec<_> = (0..rank).map(|_| random_factor(&mut rng)).collect();
        let psis: Vec<_> = (0..rank).map(|_| random_factor(&mut rng)).collect();
        let (v, w) = if trial % 2 == 0 { (&one, &one) } else { (&one, &decayed) };
        let report = projective_bound_check(&phis, &psis, v, w, v, w).unwrap();
        if !report.pass {
            violations += 1;
        }
    }
    gate.record(
        "projective tensor bound",
        violations == 0,
        &format!("20 random separable kernels, {violations} violations"),
    );
}

fn criterion_9_majorant_constructions(gate: &mut Gate) {
    let search = SearchSpec::default();
    let quad = QuadratureSpec::default();
    let system = WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap();
    // translate-moderate majorant: w(x+y) <= wbar(x) w^nu(y) at all grid pairs
    let w = system.weight_fn(0.5).unwrap();
    let nu = 1.0;
    let wbar = nachbin_moderate(&w, &system, nu, &search, &quad).unwrap();
    let pts = search.box_points();
    let mut moderate_ok = true;
    for x in &pts {
        for y in &pts {
            let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            let lhs = w.log_eval(&sum);
            let rhs = wbar.log_eval(x) + system.log_eval(nu, y);
            if lhs > rhs + 1e-9 {
                moderate_ok = false;
            }
        }
    }
    // integrable majorant at depth 8
    let w1 = system.weight_fn(1.0).unwrap();
    let (_, majorant) = nachbin_integrable_majorant(&w1, &system, 8, &quad).unwrap();
    gate.record(
        "majorant constructions",
        moderate_ok && majorant.pass && majorant.integral <= 1.05,
        &format!(
            "translate bound on {}^2 grid pairs {moderate_ok}, ratio integral {:.4} (tol 1.05)",
            pts.len(),
            majorant.integral
        ),
    );
}

fn criterion_10_family_summability(gate: &mut Gate) {
    let grid = Grid::new(1, 256, 1.0 / 16.0).unwrap();
    let system = WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap();
    let mut quad = QuadratureSpec::default();
    quad.dim = 1;
    let family: Vec<_> = (-2i64..=2)
        .map(|s| {
            LibraryFunction::ModulatedGaussian { shift: vec![s as f64], modulation: vec![0.0] }
                .sample(grid)
                .unwrap()
        })
        .collect();
    let report =
        nuclearity_inequality_check(&family, &system, &system, 1.0, 2.0, &quad).unwrap();
    gate.record(
        "family summability bound",
        report.pass,
        &format!("lhs {:.4} <= rhs {:.4}, slack {:.3}", report.lhs, report.rhs, report.slack()),
    );
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();
    criterion_1_reconstruction(&mut gate);
    criterion_2_self_duality(&mut gate);
    criterion_3_continuity_bounds(&mut gate);
    criterion_4_checker_coherence(&mut gate);
    criterion_5_lattice_equivalence(&mut gate);
    criterion_6_sampling_machinery(&mut gate);
    criterion_7_kernel_roundtrip(&mut gate);
    criterion_8_projective_bound(&mut gate);
    criterion_9_majorant_constructions(&mut gate);
    criterion_10_family_summability(&mut gate);
    assert!(gate.failures.is_empty(), "failed criteria: {:?}", gate.failures);
}
