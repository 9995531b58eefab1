//! Search lattices, quadrature boxes, and tail-rate fitting.
//!
//! The structural conditions quantify over all of ℝ^d; the checkers combine
//! a finite box (for integral values and sup witnesses) with a log-log slope
//! fit of the weight ratio along probe rays far outside the box. A ratio is
//! accepted as integrable only if every probe either underflows or decays
//! with fitted rate at most `-(1+δ)·d` against `log r`.

use serde::{Deserialize, Serialize};

/// Values below `e^LOG_FLOOR` are treated as exactly decayed.
const LOG_FLOOR: f64 = -690.0;

/// Geometric λ-lattice `{2^k : k = -6..6}`.
pub fn default_lambda_lattice() -> Vec<f64> {
    (-6..=6).map(|k| 2f64.powi(k)).collect()
}

/// Grid-search specification for the pointwise conditions ((α), [ωM], [ωSQ]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpec {
    pub dim: usize,
    /// Point box `[-R, R]^d` for x (and y where applicable).
    pub box_radius: f64,
    pub points_per_axis: usize,
    /// Candidate L values for condition (α).
    pub l_candidates: Vec<f64>,
    /// Candidate additive constants C for condition (α).
    pub c_candidates: Vec<f64>,
    /// Candidate multiplicative constants C for [ωM] / [ωSQ].
    pub mult_c_candidates: Vec<f64>,
    pub lambda_lattice: Vec<f64>,
    /// Relative lattice depth: secondary indices range over `λ·2^{±j}`, `j ≤ rel_steps`.
    pub rel_steps: u32,
    /// Allow closed-form fast paths for the built-in families.
    pub use_analytic: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            dim: 1,
            box_radius: 8.0,
            points_per_axis: 17,
            l_candidates: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            c_candidates: vec![0.0, 1.0, 10.0, 100.0],
            mult_c_candidates: vec![1.0, 10.0, 1e3, 1e6],
            lambda_lattice: default_lambda_lattice(),
            rel_steps: 12,
            use_analytic: true,
        }
    }
}

impl SearchSpec {
    /// 1-d point lattice on `[-R, R]`.
    pub fn axis_points(&self) -> Vec<f64> {
        let n = self.points_per_axis.max(3);
        (0..n)
            .map(|i| -self.box_radius + 2.0 * self.box_radius * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Points of the search box as d-dimensional coordinates.
    pub fn box_points(&self) -> Vec<Vec<f64>> {
        let axis = self.axis_points();
        match self.dim {
            1 => axis.iter().map(|&x| vec![x]).collect(),
            _ => {
                let mut out = Vec::with_capacity(axis.len() * axis.len());
                for &x1 in &axis {
                    for &x2 in &axis {
                        out.push(vec![x1, x2]);
                    }
                }
                out
            }
        }
    }
}

/// Quadrature box plus tail-fit window for the integrability checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub dim: usize,
    /// Box `[-T, T]^d`.
    pub box_radius: f64,
    pub step: f64,
    /// Margin δ in the decay-rate threshold `-(1+δ)·d`.
    pub tail_delta: f64,
    /// Probe radii extend to `T·2^octaves`.
    pub tail_octaves: u32,
    pub lambda_lattice: Vec<f64>,
    pub rel_steps: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            dim: 1,
            box_radius: 40.0,
            step: 0.02,
            tail_delta: 0.1,
            // Slowly varying ratios such as r^{-c log r} need very large probe
            // radii before the local slope crosses the integrability
            // threshold; 52 octaves reach r ~ 1.8e17 while staying well inside
            // f64 range.
            tail_octaves: 52,
            lambda_lattice: default_lambda_lattice(),
            rel_steps: 12,
        }
    }
}

/// Result of a tail fit along one probe ray.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailProbe {
    pub direction: Vec<f64>,
    /// Fitted d(log g)/d(log r) over the outermost octave.
    pub slope: f64,
    /// Ratio underflowed on the outer window.
    pub decayed: bool,
    /// Ratio overflowed or was non-finite.
    pub diverged: bool,
}

/// Unit probe directions: ± every coordinate axis, plus ± the diagonal for
/// d ≥ 2 (the diagonal carries the full-dimension decay threshold).
pub fn probe_directions(dim: usize) -> Vec<(Vec<f64>, usize)> {
    let mut dirs = Vec::new();
    for axis in 0..dim {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[axis] = sign;
            dirs.push((e, 1));
        }
    }
    if dim >= 2 {
        let c = 1.0 / (dim as f64).sqrt();
        for sign in [1.0, -1.0] {
            dirs.push((vec![sign * c; dim], dim));
        }
    }
    dirs
}

/// Fit the outer-octave log-log slope of `exp(log_g)` along a ray.
pub fn tail_probe<F: Fn(&[f64]) -> f64>(
    log_g: &F,
    direction: &[f64],
    start_radius: f64,
    octaves: u32,
) -> TailProbe {
    let samples = 2 * octaves + 1;
    let mut radii = Vec::with_capacity(samples as usize);
    let mut values = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let r = start_radius * 2f64.powf(i as f64 / 2.0);
        let x: Vec<f64> = direction.iter().map(|&d| d * r).collect();
        radii.push(r);
        values.push(log_g(&x));
    }
    let diverged = values.iter().any(|v| v.is_nan() || *v == f64::INFINITY);
    let m = values.len();
    let decayed = values[m - 1] <= LOG_FLOOR && values[m - 2] <= LOG_FLOOR;
    let slope = if diverged || decayed {
        0.0
    } else {
        // outermost octave: indices m-3 and m-1 are a factor 2 apart in r
        let dl = values[m - 1].max(LOG_FLOOR) - values[m - 3].max(LOG_FLOOR);
        dl / (radii[m - 1].ln() - radii[m - 3].ln())
    };
    TailProbe { direction: direction.to_vec(), slope, decayed, diverged }
}

/// Whether `exp(log_g)` is accepted as integrable over ℝ^d: every probe ray
/// must underflow or decay faster than `r^{-(1+δ)·d_eff}`.
pub fn integrable_tail<F: Fn(&[f64]) -> f64>(
    log_g: &F,
    dim: usize,
    start_radius: f64,
    delta: f64,
    octaves: u32,
) -> (bool, Vec<TailProbe>) {
    let mut probes = Vec::new();
    let mut ok = true;
    for (dir, d_eff) in probe_directions(dim) {
        let p = tail_probe(log_g, &dir, start_radius, octaves);
        if p.diverged || !(p.decayed || p.slope <= -(1.0 + delta) * d_eff as f64) {
            ok = false;
        }
        probes.push(p);
    }
    (ok, probes)
}

/// Whether `exp(log_g)` stays bounded along every probe ray (slope tolerance
/// absorbs fit noise on flat ratios).
pub fn bounded_tail<F: Fn(&[f64]) -> f64>(
    log_g: &F,
    dim: usize,
    start_radius: f64,
    octaves: u32,
) -> (bool, Vec<TailProbe>) {
    let mut probes = Vec::new();
    let mut ok = true;
    for (dir, _) in probe_directions(dim) {
        let p = tail_probe(log_g, &dir, start_radius, octaves);
        if p.diverged || (!p.decayed && p.slope > 0.02) {
            ok = false;
        }
        probes.push(p);
    }
    (ok, probes)
}

/// Plain Riemann sum of `exp(log_g)` over `[-T, T]^d` with step `h`.
pub fn riemann_box<F: Fn(&[f64]) -> f64>(log_g: &F, dim: usize, t: f64, h: f64) -> f64 {
    let n = (2.0 * t / h).round() as usize;
    let node = |i: usize| -t + (i as f64 + 0.5) * h;
    match dim {
        1 => (0..n).map(|i| log_g(&[node(i)]).exp()).sum::<f64>() * h,
        _ => {
            let mut acc = 0.0;
            for i1 in 0..n {
                let x1 = node(i1);
                for i2 in 0..n {
                    acc += log_g(&[x1, node(i2)]).exp();
                }
            }
            acc * h * h
        }
    }
}
