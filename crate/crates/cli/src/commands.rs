//! Command implementations: each builds its inputs from the config, drives
//! the core pipelines, and packages a deterministic report.

use bbkit_core::funcgrid::LibraryFunction;
use bbkit_core::kernels::{kernel_stft_roundtrip, tensor_embed};
use bbkit_core::kothe::{build_phi0, kothe_from_system, sampling_s, verify_s_t_identity, IndexWindow, IndexedSequence};
use bbkit_core::report::ConditionReport;
use bbkit_core::stft::{nuclearity_inequality_check, reconstruct, stft, verify_adjoint_bound, verify_stft_bound, BoundWeights};
use bbkit_core::weights::{check_alpha, check_condition_m, check_condition_n, check_condition_s, check_condition_sq, check_gamma, QuadratureSpec, SearchSpec};
use num_complex::Complex64;
use serde_json::json;

use crate::config::*;
use crate::{CliError, RunOutput};

pub fn weights_check(cfg: WeightsCheckConfig) -> Result<RunOutput, CliError> {
    let system = cfg.system.build()?;
    let mut search = SearchSpec::default();
    search.dim = cfg.system.dim;
    let mut quad = QuadratureSpec::default();
    quad.dim = cfg.system.dim;
    let requested: Vec<String> = match &cfg.conditions {
        Some(list) if list.is_empty() => {
            return Err(CliError::Config("conditions list must not be empty".into()))
        }
        Some(list) => list.iter().map(|s| s.to_ascii_lowercase()).collect(),
        None => ["alpha", "gamma", "m", "sq", "n", "s"].iter().map(|s| s.to_string()).collect(),
    };
    let variants = cfg.variant.expand();
    let mut reports: Vec<ConditionReport> = Vec::new();
    for name in &requested {
        match name.as_str() {
            "alpha" => reports.push(check_alpha(&cfg.system.omega, &search)?),
            "gamma" => {
                for &v in &variants {
                    reports.push(check_gamma(&cfg.system.omega, v, &search)?);
                }
            }
            "m" => {
                for &v in &variants {
                    reports.push(check_condition_m(&system, v, &search)?);
                }
            }
            "sq" => {
                for &v in &variants {
                    reports.push(check_condition_sq(&system, v, &search)?);
                }
            }
            "n" => {
                for &v in &variants {
                    reports.push(check_condition_n(&system, v, &quad)?);
                }
            }
            "s" => {
                for &v in &variants {
                    reports.push(check_condition_s(&system, v, &quad)?);
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown condition {other:?}; expected alpha, gamma, m, sq, n, or s"
                )))
            }
        }
    }
    let pass = reports.iter().all(|r| r.holds());
    let mut csv = String::from("condition,variant,holds\n");
    for r in &reports {
        csv.push_str(&format!("{},{:?},{}\n", r.condition, r.variant, r.holds()));
    }
    Ok(RunOutput {
        report: json!({ "config": cfg, "reports": reports }),
        csv,
        pass,
    })
}

pub fn stft_reconstruct(cfg: StftReconstructConfig) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.build(1)?;
    let window = cfg.window.sample(grid)?;
    let synthesis = match &cfg.synthesis {
        Some(f) => f.sample(grid)?,
        None => window.clone(),
    };
    let mut rows = Vec::new();
    let mut max_err = 0.0f64;
    for f in &cfg.functions {
        let sampled = f.sample(grid)?;
        let (_, err) = reconstruct(&sampled, &window, &synthesis)?;
        max_err = max_err.max(err);
        rows.push((format!("{f:?}"), err));
    }
    let pass = max_err <= cfg.tolerance;
    let mut csv = String::from("function,sup_error\n");
    for (tag, err) in &rows {
        csv.push_str(&format!("{tag},{err:e}\n"));
    }
    Ok(RunOutput {
        report: json!({
            "config": cfg,
            "errors": rows.iter().map(|(t, e)| json!({"function": t, "sup_error": e})).collect::<Vec<_>>(),
            "max_error": max_err,
        }),
        csv,
        pass,
    })
}

pub fn kernel_roundtrip(cfg: KernelRoundtripConfig) -> Result<RunOutput, CliError> {
    if cfg.factors.is_empty() {
        return Err(CliError::Config("factor list must not be empty".into()));
    }
    let grid = cfg.grid.build(1)?;
    let lefts: Vec<_> = cfg
        .factors
        .iter()
        .map(|p| p.left.sample(grid))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let rights: Vec<_> = cfg
        .factors
        .iter()
        .map(|p| p.right.sample(grid))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let kernel = tensor_embed(&lefts, &rights)?;
    let psi1 = cfg.psi1.sample(grid)?;
    let gamma1 = cfg.gamma1.sample(grid)?;
    let psi2 = cfg.psi2.sample(grid)?;
    let gamma2 = cfg.gamma2.sample(grid)?;
    let (_, report) = kernel_stft_roundtrip(&kernel, &psi1, &gamma1, &psi2, &gamma2)?;
    let pass = report.sup_error <= cfg.tolerance;
    let csv = format!(
        "rank,sup_error,tolerance,pass\n{},{:e},{:e},{pass}\n",
        report.input_rank.map_or(-1i64, |r| r as i64),
        report.sup_error,
        cfg.tolerance,
    );
    Ok(RunOutput { report: json!({ "config": cfg, "roundtrip": report }), csv, pass })
}

pub fn kothe_report(cfg: KotheReportConfig) -> Result<RunOutput, CliError> {
    let system = cfg.system.build()?;
    let mut quad = QuadratureSpec::default();
    quad.dim = cfg.system.dim;
    let window = IndexWindow::new(cfg.system.dim, cfg.window_radius)?;
    let set = kothe_from_system(&system, window, quad.lambda_lattice.clone())?;
    let mut reports = Vec::new();
    for v in cfg.variant.expand() {
        reports.push(bbkit_core::kothe::check_kothe_n(&set, v, &quad)?);
    }
    let pass = reports.iter().all(|r| r.holds());
    let mut csv = String::from("variant,holds,witnesses\n");
    for r in &reports {
        csv.push_str(&format!("{:?},{},{}\n", r.variant, r.holds(), r.witnesses.len()));
    }
    Ok(RunOutput { report: json!({ "config": cfg, "reports": reports }), csv, pass })
}

pub fn bounds_verify(cfg: BoundsVerifyConfig) -> Result<RunOutput, CliError> {
    if cfg.system.dim != 1 {
        return Err(CliError::Config("bound verification runs in dimension 1".into()));
    }
    let system = cfg.system.build()?;
    let grid = cfg.grid.build(1)?;
    let phi = cfg.phi.sample(grid)?;
    let psi = cfg.psi.sample(grid)?;
    let mut quad = QuadratureSpec::default();
    quad.dim = 1;
    let analysis_weights = BoundWeights::from_system(&system, cfg.analysis_lambdas)?;
    let analysis = verify_stft_bound(&phi, &psi, &analysis_weights, cfg.c0, cfg.c1)?;
    let synthesis_weights = BoundWeights::from_system(&system, cfg.synthesis_lambdas)?;
    let tf = stft(&phi, &psi.reflect())?;
    let synthesis = verify_adjoint_bound(&tf, &psi, &synthesis_weights, cfg.c1, &quad)?;
    if cfg.family_size == 0 {
        return Err(CliError::Config("family_size must be positive".into()));
    }
    let family: Vec<_> = (0..cfg.family_size)
        .map(|i| {
            let shift = i as f64 - (cfg.family_size as f64 - 1.0) / 2.0;
            LibraryFunction::ModulatedGaussian { shift: vec![shift], modulation: vec![0.0] }
                .sample(grid)
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;
    let summability = nuclearity_inequality_check(
        &family,
        &system,
        &system,
        cfg.family_lambda,
        cfg.family_mu,
        &quad,
    )?;
    let reports = vec![analysis, synthesis, summability];
    let pass = reports.iter().all(|r| r.pass);
    let mut csv = String::from("bound,lhs,rhs,pass\n");
    for r in &reports {
        csv.push_str(&format!("{},{:e},{:e},{}\n", r.name, r.lhs, r.rhs, r.pass));
    }
    Ok(RunOutput { report: json!({ "config": cfg, "reports": reports }), csv, pass })
}

pub fn phi0_check(cfg: Phi0Config) -> Result<RunOutput, CliError> {
    let grid = cfg.grid.build(1)?;
    let phi = cfg.phi.sample(grid)?;
    let phi0 = build_phi0(&phi)?;
    let window = IndexWindow::new(1, cfg.window_radius)?;
    let samples = sampling_s(&phi0, window)?;
    let mut max_delta_dev = 0.0f64;
    let mut csv = String::from("j,re,im\n");
    for j in -cfg.window_radius..=cfg.window_radius {
        let v = samples.get(&[j])?;
        let expected = if j == 0 { 1.0 } else { 0.0 };
        max_delta_dev = max_delta_dev.max((v - Complex64::new(expected, 0.0)).norm());
        csv.push_str(&format!("{j},{:e},{:e}\n", v.re, v.im));
    }
    let idwin = IndexWindow::new(1, cfg.identity_radius)?;
    let coeffs: Vec<Complex64> = (0..idwin.len())
        .map(|i| {
            // fixed pseudo-random coefficients so runs are reproducible
            let a = ((i * 2654435761) % 1000) as f64 / 500.0 - 1.0;
            let b = ((i * 40503) % 1000) as f64 / 500.0 - 1.0;
            Complex64::new(a, b)
        })
        .collect();
    let c = IndexedSequence::from_values(idwin, coeffs)?;
    let (_, identity_error) = verify_s_t_identity(&c, &phi0)?;
    let pass = max_delta_dev <= cfg.delta_tolerance && identity_error <= cfg.identity_tolerance;
    Ok(RunOutput {
        report: json!({
            "config": cfg,
            "max_delta_deviation": max_delta_dev,
            "identity_error": identity_error,
        }),
        csv,
        pass,
    })
}
