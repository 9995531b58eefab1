//! Short-time Fourier transform, its adjoint, Gabor-style reconstruction,
//! and numerical verification of the weighted continuity bounds for the
//! analysis and synthesis maps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};
use crate::funcgrid::{
    bb_l1_seminorm, bb_seminorm, for_each_point, fourier_transform, inverse_fourier, sup_seminorm,
    Grid, SampledFunction,
};
use crate::report::BoundReport;
use crate::weights::{integrable_tail, riemann_box, QuadratureSpec, WeightFunction, WeightSystem};

const HYP_SLACK: f64 = 1e-9;
/// Relative tolerance for the bound checks (discretization noise floor).
pub const BOUND_TOL: f64 = 1e-6;

/// Samples of a time-frequency function `F(x, ξ)` on the product of a time
/// grid and its frequency grid. Row-major: `values[a * len + k]` where `a`
/// flattens the x multi-index and `k` the ξ multi-index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeFrequencyArray {
    pub x_grid: Grid,
    pub xi_grid: Grid,
    pub values: Vec<Complex64>,
}

impl TimeFrequencyArray {
    pub fn new(x_grid: Grid, xi_grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if x_grid.len() * xi_grid.len() != values.len() {
            return Err(BbError::GridMismatch(format!(
                "time-frequency array wants {} values, got {}",
                x_grid.len() * xi_grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(BbError::InvalidGrid("non-finite time-frequency value".into()));
        }
        Ok(TimeFrequencyArray { x_grid, xi_grid, values })
    }

    pub fn zero(x_grid: Grid, xi_grid: Grid) -> Self {
        let len = x_grid.len() * xi_grid.len();
        TimeFrequencyArray { x_grid, xi_grid, values: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TimeFrequencyArray {
            x_grid: self.x_grid,
            xi_grid: self.xi_grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_error(&self, other: &TimeFrequencyArray) -> Result<f64> {
        if self.x_grid != other.x_grid || self.xi_grid != other.xi_grid {
            return Err(BbError::GridMismatch("time-frequency grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `sup |F(x,ξ)| w(x) v(ξ)`.
    pub fn weighted_sup(&self, w: &WeightFunction, v: &WeightFunction) -> Result<f64> {
        if w.dim() != self.x_grid.dim || v.dim() != self.xi_grid.dim {
            return Err(BbError::DimensionMismatch { expected: self.x_grid.dim, got: w.dim() });
        }
        let len = self.xi_grid.len();
        let mut wx = Vec::with_capacity(self.x_grid.len());
        for_each_point(&self.x_grid, |_, x| wx.push(w.eval_slice(x)));
        let mut vxi = Vec::with_capacity(len);
        for_each_point(&self.xi_grid, |_, xi| vxi.push(v.eval_slice(xi)));
        let mut best = 0.0f64;
        for (a, &wa) in wx.iter().enumerate() {
            for (k, &vk) in vxi.iter().enumerate() {
                let val = self.values[a * len + k].norm() * wa * vk;
                if val > best {
                    best = val;
                }
            }
        }
        Ok(best)
    }
}

/// Node shift (per axis) from the flat x-index: `x_a = shift · h`.
fn node_shift(grid: &Grid, a: usize) -> Vec<i64> {
    let n = grid.n;
    let half = (n / 2) as i64;
    match grid.dim {
        1 => vec![a as i64 - half],
        _ => vec![(a / n) as i64 - half, (a % n) as i64 - half],
    }
}

/// `V_ψ f(x, ξ) = ∫ f(t) conj(ψ(t−x)) e^{−2πi ξ·t} dt`, as a per-x Fourier
/// transform of the windowed product.
pub fn stft(f: &SampledFunction, psi: &SampledFunction) -> Result<TimeFrequencyArray> {
    f.check_same_grid(psi)?;
    let grid = f.grid;
    let len = grid.len();
    let psi_conj = psi.conj();
    let mut values = Vec::with_capacity(len * len);
    for a in 0..len {
        let window = psi_conj.translate_nodes(&node_shift(&grid, a))?;
        let prod = f.mul(&window)?;
        values.extend_from_slice(&fourier_transform(&prod).values);
    }
    TimeFrequencyArray::new(grid, grid.frequency_grid(), values)
}

/// Direct quadrature oracle for [`stft`] (O(N³) per dimension; test-sized
/// grids only).
pub fn stft_quadrature_oracle(f: &SampledFunction, psi: &SampledFunction) -> Result<TimeFrequencyArray> {
    f.check_same_grid(psi)?;
    let grid = f.grid;
    let len = grid.len();
    let xi_grid = grid.frequency_grid();
    let hv = grid.cell_volume();
    let mut t_pts = Vec::with_capacity(len);
    for_each_point(&grid, |_, t| t_pts.push(t.to_vec()));
    let mut xi_pts = Vec::with_capacity(len);
    for_each_point(&xi_grid, |_, xi| xi_pts.push(xi.to_vec()));
    let mut values = Vec::with_capacity(len * len);
    for a in 0..len {
        let x = &t_pts[a];
        // conj(ψ(t−x)) sampled off-grid is zero-filled, matching translate_nodes
        let shifted: Vec<Complex64> = (0..len)
            .map(|i| {
                let rel: Vec<f64> = t_pts[i].iter().zip(x).map(|(t, xc)| t - xc).collect();
                sample_lookup(psi, &rel).conj()
            })
            .collect();
        for xi in &xi_pts {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..len {
                let phase: f64 =
                    -2.0 * std::f64::consts::PI * xi.iter().zip(&t_pts[i]).map(|(u, t)| u * t).sum::<f64>();
                acc += f.values[i] * shifted[i] * Complex64::from_polar(1.0, phase);
            }
            values.push(acc * hv);
        }
    }
    TimeFrequencyArray::new(grid, xi_grid, values)
}

/// Value of a sampled function at an exact grid point, zero outside the box.
fn sample_lookup(f: &SampledFunction, x: &[f64]) -> Complex64 {
    let grid = f.grid;
    let n = grid.n as i64;
    let mut flat: i64 = 0;
    for &c in x {
        let i = (c / grid.h).round() as i64 + n / 2;
        if !(0..n).contains(&i) {
            return Complex64::new(0.0, 0.0);
        }
        flat = flat * n + i;
    }
    f.values[flat as usize]
}

/// `V*_ψ F(t) = ∬ F(x, ξ) e^{2πi ξ·t} ψ(t − x) dx dξ`; the ξ-integral runs
/// first as an inverse FFT per x, then the x-sum accumulates.
pub fn adjoint_stft(tf: &TimeFrequencyArray, psi: &SampledFunction) -> Result<SampledFunction> {
    let grid = psi.grid;
    if tf.x_grid != grid || tf.xi_grid != grid.frequency_grid() {
        return Err(BbError::GridMismatch("time-frequency grids do not match the window grid".into()));
    }
    let len = grid.len();
    // inverse_fourier already carries the Riemann weight h_ξ per axis; the
    // x-sum contributes h per axis
    let hv = grid.cell_volume();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for a in 0..len {
        let row = SampledFunction {
            grid: tf.xi_grid,
            values: tf.values[a * len..(a + 1) * len].to_vec(),
            tag: None,
        };
        let u = inverse_fourier(&row);
        let window = psi.translate_nodes(&node_shift(&grid, a))?;
        for i in 0..len {
            out[i] += u.values[i] * window.values[i];
        }
    }
    for v in &mut out {
        *v *= hv;
    }
    Ok(SampledFunction { grid, values: out, tag: None })
}

/// `(γ, ψ)_{L²}` on the grid; γ is a synthesis window for ψ when this is
/// non-zero.
pub fn synthesis_pairing(gamma: &SampledFunction, psi: &SampledFunction) -> Result<Complex64> {
    gamma.pairing(psi)
}

fn l2_norm(f: &SampledFunction) -> f64 {
    (f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * f.grid.cell_volume()).sqrt()
}

/// Pairing tolerance below which a window pair is rejected as degenerate.
pub fn pairing_tolerance(gamma: &SampledFunction, psi: &SampledFunction) -> f64 {
    1e-6 * l2_norm(gamma) * l2_norm(psi)
}

/// Reconstruction `(1/(γ, ψ̌)) V*_γ V_ψ̌ f`; returns the reconstruction and
/// its sup distance from `f`.
pub fn reconstruct(
    f: &SampledFunction,
    psi: &SampledFunction,
    gamma: &SampledFunction,
) -> Result<(SampledFunction, f64)> {
    let psi_check = psi.reflect();
    let c = synthesis_pairing(gamma, &psi_check)?;
    if c.norm() <= pairing_tolerance(gamma, psi) {
        return Err(BbError::ZeroPairing(format!("{c}")));
    }
    let analysis = stft(f, &psi_check)?;
    let synth = adjoint_stft(&analysis, gamma)?;
    let rec = synth.scale(Complex64::new(1.0, 0.0) / c);
    let err = rec.sup_error(f)?;
    Ok((rec, err))
}

/// Node shift `x*` maximizing `|(ψ(·−x*), ψ̌)_{L²}|`, so that the translate
/// is a synthesis window for ψ̌.
pub fn find_synthesis_translate(psi: &SampledFunction) -> Result<(Vec<i64>, Complex64)> {
    let grid = psi.grid;
    let psi_check = psi.reflect();
    let mut best: Option<(Vec<i64>, Complex64)> = None;
    for a in 0..grid.len() {
        let shift = node_shift(&grid, a);
        let gamma = psi.translate_nodes(&shift)?;
        let p = gamma.pairing(&psi_check)?;
        if best.as_ref().map_or(true, |(_, b)| p.norm() > b.norm()) {
            best = Some((shift, p));
        }
    }
    let (shift, p) = best.expect("grid is non-empty");
    if p.norm() <= pairing_tolerance(psi, psi) {
        return Err(BbError::ZeroPairing("no translate pairs with the reflected window".into()));
    }
    Ok((shift, p))
}

/// Weight quadruples `(v₀..v₃, w₀..w₃)` for the continuity bounds.
#[derive(Debug, Clone)]
pub struct BoundWeights {
    pub v: [WeightFunction; 4],
    pub w: [WeightFunction; 4],
}

impl BoundWeights {
    /// All eight weights drawn from one exponential system:
    /// `v_j = w_j = w^{λ_j}`.
    pub fn from_system(system: &WeightSystem, lambdas: [f64; 4]) -> Result<Self> {
        let mk = |lam: f64| system.weight_fn(lam);
        Ok(BoundWeights {
            v: [mk(lambdas[0])?, mk(lambdas[1])?, mk(lambdas[2])?, mk(lambdas[3])?],
            w: [mk(lambdas[0])?, mk(lambdas[1])?, mk(lambdas[2])?, mk(lambdas[3])?],
        })
    }
}

/// Axis sample points of the grid box, subsampled to at most 65 per axis.
fn hypothesis_points(grid: &Grid) -> Vec<Vec<f64>> {
    let stride = (grid.n / 64).max(1);
    let axis: Vec<f64> = (0..grid.n).step_by(stride).map(|i| grid.node(i)).collect();
    match grid.dim {
        1 => axis.iter().map(|&x| vec![x]).collect(),
        _ => {
            let mut out = Vec::new();
            for &x1 in &axis {
                for &x2 in &axis {
                    out.push(vec![x1, x2]);
                }
            }
            out
        }
    }
}

/// Check `u₀(x)² ≤ C₀ u₁(x)` on the points.
fn check_square_hyp(u0: &WeightFunction, u1: &WeightFunction, c0: f64, pts: &[Vec<f64>]) -> Result<()> {
    for x in pts {
        if 2.0 * u0.log_eval(x) > c0.ln() + u1.log_eval(x) + HYP_SLACK {
            return Err(BbError::HypothesisViolation(format!(
                "square bound fails at {x:?}: {}² > {c0}·{}",
                u0.log_eval(x).exp(),
                u1.log_eval(x).exp()
            )));
        }
    }
    Ok(())
}

/// Check `u₁(x+y) ≤ C₁ u₂(x) u₃(y)` on point pairs.
fn check_translate_hyp(
    u1: &WeightFunction,
    u2: &WeightFunction,
    u3: &WeightFunction,
    c1: f64,
    pts: &[Vec<f64>],
) -> Result<()> {
    for x in pts {
        for y in pts {
            let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            if u1.log_eval(&s) > c1.ln() + u2.log_eval(x) + u3.log_eval(y) + HYP_SLACK {
                return Err(BbError::HypothesisViolation(format!(
                    "translate bound fails at x={x:?}, y={y:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Continuity bound for the analysis map: with `v₀² ≤ C₀v₁`, `w₀² ≤ C₀w₁`
/// and `v₁(x+y) ≤ C₁v₂(x)v₃(y)`, `w₁(x+y) ≤ C₁w₂(x)w₃(y)`,
///
/// `sup |V_ψ̌φ(x,ξ)| w₀(x)v₀(ξ) ≤ C₀C₁ ‖ψ‖_{S^{v₃}_{w₃}} ‖φ‖_{S^{v₂}_{w₂},1}`.
pub fn verify_stft_bound(
    phi: &SampledFunction,
    psi: &SampledFunction,
    weights: &BoundWeights,
    c0: f64,
    c1: f64,
) -> Result<BoundReport> {
    phi.check_same_grid(psi)?;
    let pts = hypothesis_points(&phi.grid);
    check_square_hyp(&weights.v[0], &weights.v[1], c0, &pts)?;
    check_square_hyp(&weights.w[0], &weights.w[1], c0, &pts)?;
    check_translate_hyp(&weights.v[1], &weights.v[2], &weights.v[3], c1, &pts)?;
    check_translate_hyp(&weights.w[1], &weights.w[2], &weights.w[3], c1, &pts)?;
    let analysis = stft(phi, &psi.reflect())?;
    let lhs = analysis.weighted_sup(&weights.w[0], &weights.v[0])?;
    let psi_norm = bb_seminorm(psi, &weights.v[3], &weights.w[3])?.value;
    let phi_norm = bb_l1_seminorm(phi, &weights.v[2], &weights.w[2])?.value;
    let rhs = c0 * c1 * psi_norm * phi_norm;
    Ok(BoundReport::new(
        "stft-analysis-bound",
        lhs,
        rhs,
        vec![
            ("C0".into(), c0),
            ("C1".into(), c1),
            ("window_seminorm".into(), psi_norm),
            ("argument_l1_seminorm".into(), phi_norm),
        ],
        BOUND_TOL,
    ))
}

/// Continuity bound for the synthesis map: with the translate hypothesis,
/// `ε₁ = inf v₂ > 0`, `ε₂ = inf w₂ > 0` and `v₂/v₀, w₂/w₀ ∈ L¹`,
///
/// `‖V*_ψF‖_{S^{v₁}_{w₁}} ≤ (ε₁⁻¹+ε₂⁻¹) C₁ ‖v₂/v₀‖₁ ‖w₂/w₀‖₁ ‖ψ‖_{S^{v₃}_{w₃}} ‖F‖_{w₀⊗v₀}`.
pub fn verify_adjoint_bound(
    tf: &TimeFrequencyArray,
    psi: &SampledFunction,
    weights: &BoundWeights,
    c1: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    let pts = hypothesis_points(&psi.grid);
    check_translate_hyp(&weights.v[1], &weights.v[2], &weights.v[3], c1, &pts)?;
    check_translate_hyp(&weights.w[1], &weights.w[2], &weights.w[3], c1, &pts)?;
    let dim = psi.grid.dim;
    let eps1 = pts.iter().map(|x| weights.v[2].log_eval(x).exp()).fold(f64::INFINITY, f64::min);
    let eps2 = pts.iter().map(|x| weights.w[2].log_eval(x).exp()).fold(f64::INFINITY, f64::min);
    if !(eps1 > 0.0) || !(eps2 > 0.0) {
        return Err(BbError::HypothesisViolation("weight infimum vanishes on the grid".into()));
    }
    let ratio_norm = |num: &WeightFunction, den: &WeightFunction, name: &str| -> Result<f64> {
        let log_g = |x: &[f64]| num.log_eval(x) - den.log_eval(x);
        let (ok, _) = integrable_tail(&log_g, dim, quad.box_radius, quad.tail_delta, quad.tail_octaves);
        if !ok {
            return Err(BbError::Divergent(format!("{name} ratio is not integrable")));
        }
        Ok(riemann_box(&log_g, dim, quad.box_radius, quad.step))
    };
    let nv = ratio_norm(&weights.v[2], &weights.v[0], "frequency-weight")?;
    let nw = ratio_norm(&weights.w[2], &weights.w[0], "time-weight")?;
    let f = adjoint_stft(tf, psi)?;
    let lhs = sup_seminorm(&f, &weights.w[1])?.value
        + sup_seminorm(&fourier_transform(&f), &weights.v[1])?.value;
    let psi_norm = bb_seminorm(psi, &weights.v[3], &weights.w[3])?.value;
    let tf_norm = tf.weighted_sup(&weights.w[0], &weights.v[0])?;
    let rhs = (1.0 / eps1 + 1.0 / eps2) * c1 * nv * nw * psi_norm * tf_norm;
    Ok(BoundReport::new(
        "stft-synthesis-bound",
        lhs,
        rhs,
        vec![
            ("C1".into(), c1),
            ("eps1".into(), eps1),
            ("eps2".into(), eps2),
            ("freq_ratio_l1".into(), nv),
            ("time_ratio_l1".into(), nw),
            ("window_seminorm".into(), psi_norm),
            ("array_sup".into(), tf_norm),
        ],
        BOUND_TOL,
    ))
}

/// Summability bound for a finite family: with
/// `C = max(sup_x Σ|φ_n(x)|w^λ(x), sup_ξ Σ|φ̂_n(ξ)|v^λ(ξ))`,
///
/// `Σ_n ‖φ_n‖_{S^{v^μ}_{w^μ},1} ≤ C (‖w^μ/w^λ‖_{L¹} + ‖v^μ/v^λ‖_{L¹})`.
pub fn nuclearity_inequality_check(
    family: &[SampledFunction],
    w_system: &WeightSystem,
    v_system: &WeightSystem,
    lambda: f64,
    mu: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    let w_mu = w_system.weight_fn(mu)?;
    let v_mu = v_system.weight_fn(mu)?;
    let w_lam = w_system.weight_fn(lambda)?;
    let v_lam = v_system.weight_fn(lambda)?;
    let dim = w_mu.dim();
    let ratio_norm = |sys: &WeightSystem, name: &str| -> Result<f64> {
        let log_g = |x: &[f64]| sys.log_ratio(mu, lambda, x);
        let (ok, _) = integrable_tail(&log_g, dim, quad.box_radius, quad.tail_delta, quad.tail_octaves);
        if !ok {
            return Err(BbError::Divergent(format!("{name} ratio w^μ/w^λ is not integrable")));
        }
        Ok(riemann_box(&log_g, dim, quad.box_radius, quad.step))
    };
    let nw = ratio_norm(w_system, "time")?;
    let nv = ratio_norm(v_system, "frequency")?;
    let mut lhs = 0.0;
    let mut c_time = 0.0f64;
    let mut c_freq = 0.0f64;
    if let Some(first) = family.first() {
        let grid = first.grid;
        let mut abs_time = vec![0.0f64; grid.len()];
        let mut abs_freq = vec![0.0f64; grid.len()];
        for phi in family {
            phi.check_same_grid(first)?;
            lhs += bb_l1_seminorm(phi, &v_mu, &w_mu)?.value;
            for (acc, v) in abs_time.iter_mut().zip(&phi.values) {
                *acc += v.norm();
            }
            let hat = fourier_transform(phi);
            for (acc, v) in abs_freq.iter_mut().zip(&hat.values) {
                *acc += v.norm();
            }
        }
        for_each_point(&grid, |i, x| {
            c_time = c_time.max(abs_time[i] * w_lam.eval_slice(x));
        });
        let fgrid = grid.frequency_grid();
        for_each_point(&fgrid, |i, xi| {
            c_freq = c_freq.max(abs_freq[i] * v_lam.eval_slice(xi));
        });
    }
    let c = c_time.max(c_freq);
    let rhs = c * (nw + nv);
    Ok(BoundReport::new(
        "family-summability-bound",
        lhs,
        rhs,
        vec![
            ("C".into(), c),
            ("time_ratio_l1".into(), nw),
            ("freq_ratio_l1".into(), nv),
            ("family_size".into(), family.len() as f64),
        ],
        BOUND_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgrid::LibraryFunction;
    use crate::weights::WeightExpr;
    use std::f64::consts::PI;

    fn grid(n: usize, h: f64) -> Grid {
        Grid::new(1, n, h).unwrap()
    }

    fn gaussian(g: Grid) -> SampledFunction {
        LibraryFunction::Gaussian.sample(g).unwrap()
    }

    fn abs_system() -> WeightSystem {
        WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap()
    }

    #[test]
    fn stft_zero_window() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        let z = SampledFunction::zero(g);
        let tf = stft(&f, &z).unwrap();
        assert_eq!(tf.sup_abs(), 0.0);
    }

    #[test]
    fn stft_gaussian_closed_form() {
        // |V_g g(x, ξ)| = 2^{-1/2} e^{-π(x²+ξ²)/2}
        let g = grid(128, 1.0 / 8.0);
        let f = gaussian(g);
        let tf = stft(&f, &f).unwrap();
        let len = g.len();
        let mut max_err = 0.0f64;
        for a in (0..len).step_by(5) {
            let x = g.node(a);
            for k in (0..len).step_by(5) {
                let xi = g.freq_node(k);
                let expected = 0.5f64.sqrt() * (-PI * (x * x + xi * xi) / 2.0).exp();
                max_err = max_err.max((tf.values[a * len + k].norm() - expected).abs());
            }
        }
        assert!(max_err <= 1e-8, "{max_err}");
    }

    #[test]
    fn stft_matches_quadrature_oracle() {
        let g = grid(32, 0.25);
        let f = LibraryFunction::ModulatedGaussian { shift: vec![0.5], modulation: vec![1.0] }
            .sample(g)
            .unwrap();
        let psi = gaussian(g);
        let fast = stft(&f, &psi).unwrap();
        let oracle = stft_quadrature_oracle(&f, &psi).unwrap();
        assert!(fast.sup_error(&oracle).unwrap() <= 1e-8);
    }

    #[test]
    fn stft_slice_at_origin_is_windowed_transform() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        let psi = LibraryFunction::Hermite1.sample(g).unwrap();
        let tf = stft(&f, &psi).unwrap();
        let len = g.len();
        let a0 = len / 2; // x = 0
        let direct = fourier_transform(&f.mul(&psi.conj()).unwrap());
        for k in 0..len {
            assert!((tf.values[a0 * len + k] - direct.values[k]).norm() <= 1e-12);
        }
    }

    #[test]
    fn stft_covariance_under_translation() {
        let g = grid(128, 1.0 / 8.0);
        let f = gaussian(g);
        let psi = gaussian(g);
        let s = 8i64; // shift by 1.0
        let fs = f.translate_nodes(&[s]).unwrap();
        let tf = stft(&f, &psi).unwrap();
        let tfs = stft(&fs, &psi).unwrap();
        let len = g.len();
        let a_shift = g.h * s as f64;
        let mut max_err = 0.0f64;
        for a in 16..(len - 16) {
            let src = (a as i64 - s) as usize;
            for k in 0..len {
                let xi = g.freq_node(k);
                let expected = tf.values[src * len + k]
                    * Complex64::from_polar(1.0, -2.0 * PI * xi * a_shift);
                max_err = max_err.max((tfs.values[a * len + k] - expected).norm());
            }
        }
        assert!(max_err <= 1e-8, "{max_err}");
    }

    #[test]
    fn adjoint_zero_and_linearity() {
        let g = grid(64, 0.25);
        let psi = gaussian(g);
        let z = TimeFrequencyArray::zero(g, g.frequency_grid());
        assert_eq!(adjoint_stft(&z, &psi).unwrap().sup_abs(), 0.0);
        let tf = stft(&gaussian(g), &psi).unwrap();
        let a = adjoint_stft(&tf.scale(Complex64::new(2.0, 1.0)), &psi).unwrap();
        let b = adjoint_stft(&tf, &psi).unwrap().scale(Complex64::new(2.0, 1.0));
        assert!(a.sup_error(&b).unwrap() <= 1e-12);
    }

    #[test]
    fn adjoint_of_analysis_gives_scaled_function() {
        // V*_g(V_ǧ g) = (g, ǧ)·g = 2^{-1/2} g
        let g = grid(256, 1.0 / 16.0);
        let f = gaussian(g);
        let tf = stft(&f, &f.reflect()).unwrap();
        let out = adjoint_stft(&tf, &f).unwrap();
        let expected = f.scale(Complex64::new(0.5f64.sqrt(), 0.0));
        assert!(out.sup_error(&expected).unwrap() <= 1e-6);
    }

    #[test]
    fn synthesis_pairing_examples() {
        let g = grid(256, 1.0 / 16.0);
        let f = gaussian(g);
        // ‖g‖² = ∫ e^{-2πt²} = 2^{-1/2}
        let p = synthesis_pairing(&f, &f).unwrap();
        assert!((p.re - 0.5f64.sqrt()).abs() <= 1e-8);
        assert!(p.im.abs() <= 1e-12);
        // parity: (h₀, h₁) = 0
        let h1 = LibraryFunction::Hermite1.sample(g).unwrap();
        assert!(synthesis_pairing(&f, &h1).unwrap().norm() <= 1e-12);
        // degenerate
        let z = SampledFunction::zero(g);
        assert_eq!(synthesis_pairing(&z, &z).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn reconstruction_identity() {
        let g = grid(256, 1.0 / 16.0);
        let f = gaussian(g);
        let (_, err) = reconstruct(&f, &f, &f).unwrap();
        assert!(err <= 1e-6, "{err}");
        // shifted/modulated input
        let fm = LibraryFunction::ModulatedGaussian { shift: vec![1.0], modulation: vec![2.0] }
            .sample(g)
            .unwrap();
        let (_, err) = reconstruct(&fm, &f, &f).unwrap();
        assert!(err <= 1e-5, "{err}");
        // zero input reconstructs exactly
        let z = SampledFunction::zero(g);
        let (rec, err) = reconstruct(&z, &f, &f).unwrap();
        assert_eq!(err, 0.0);
        assert_eq!(rec.sup_abs(), 0.0);
    }

    #[test]
    fn reconstruction_rejects_zero_pairing() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        let h1 = LibraryFunction::Hermite1.sample(g).unwrap();
        // (g, ȟ₁) = 0 by parity
        let err = reconstruct(&f, &h1, &f);
        assert!(matches!(err, Err(BbError::ZeroPairing(_))));
    }

    #[test]
    fn synthesis_translate_search() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        let (shift, p) = find_synthesis_translate(&f).unwrap();
        assert_eq!(shift, vec![0]);
        assert!(p.norm() > 0.1);
        // odd window: pairing at 0 is -‖h₁‖², still the modulus maximizer
        let h1 = LibraryFunction::Hermite1.sample(g).unwrap();
        let (shift, p) = find_synthesis_translate(&h1).unwrap();
        assert_eq!(shift, vec![0]);
        assert!(p.re < 0.0);
        let z = SampledFunction::zero(g);
        assert!(find_synthesis_translate(&z).is_err());
    }

    #[test]
    fn analysis_bound_holds() {
        let g = grid(128, 1.0 / 8.0);
        let f = gaussian(g);
        // v₀=w₀=e^{|·|}, v₁=w₁=e^{2|·|} (C₀=1), v₂=v₃=w₂=w₃=e^{2|·|} (C₁=1)
        let weights = BoundWeights::from_system(&abs_system(), [1.0, 0.5, 0.5, 0.5]).unwrap();
        let report = verify_stft_bound(&f, &f, &weights, 1.0, 1.0).unwrap();
        assert!(report.pass, "lhs {} rhs {}", report.lhs, report.rhs);
        assert!(report.lhs > 0.0);
        // zero argument
        let z = SampledFunction::zero(g);
        let report = verify_stft_bound(&z, &f, &weights, 1.0, 1.0).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert!(report.pass);
    }

    #[test]
    fn analysis_bound_rejects_bad_constants() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        // C₀ too small for v₀ = v₁ = e^{|·|}: e^{2|x|} > ½·e^{|x|}
        let weights = BoundWeights::from_system(&abs_system(), [1.0, 1.0, 0.5, 0.5]).unwrap();
        let err = verify_stft_bound(&f, &f, &weights, 0.5, 1.0);
        assert!(matches!(err, Err(BbError::HypothesisViolation(_))));
    }

    #[test]
    fn synthesis_bound_holds() {
        let g = grid(128, 1.0 / 8.0);
        let f = gaussian(g);
        // v₀=w₀=e^{3|·|}, v₁=w₁=e^{|·|}, v₂=v₃=w₂=w₃=e^{|·|}; C₁=1;
        // ratio v₂/v₀ = e^{-2|·|} integrable
        let weights = BoundWeights::from_system(&abs_system(), [1.0 / 3.0, 1.0, 1.0, 1.0]).unwrap();
        let tf = stft(&f, &f.reflect()).unwrap();
        let quad = QuadratureSpec::default();
        let report = verify_adjoint_bound(&tf, &f, &weights, 1.0, &quad).unwrap();
        assert!(report.pass, "lhs {} rhs {}", report.lhs, report.rhs);
        // zero array
        let z = TimeFrequencyArray::zero(g, g.frequency_grid());
        let report = verify_adjoint_bound(&z, &f, &weights, 1.0, &quad).unwrap();
        assert_eq!(report.lhs, 0.0);
    }

    #[test]
    fn synthesis_bound_rejects_divergent_ratio() {
        let g = grid(64, 0.25);
        let f = gaussian(g);
        // v₀ = v₂: ratio ≡ 1 is not integrable
        let weights = BoundWeights::from_system(&abs_system(), [1.0, 1.0, 1.0, 1.0]).unwrap();
        let tf = stft(&f, &f.reflect()).unwrap();
        let err = verify_adjoint_bound(&tf, &f, &weights, 1.0, &QuadratureSpec::default());
        assert!(matches!(err, Err(BbError::Divergent(_))));
    }

    #[test]
    fn family_summability() {
        let g = grid(256, 1.0 / 16.0);
        let sys = abs_system();
        let quad = QuadratureSpec::default();
        // translated gaussians; sup side at λ=1, L¹ side at the weaker μ=2
        // (ratio w^μ/w^λ = e^{-|x|/2} is integrable)
        let family: Vec<SampledFunction> = (-3..=3)
            .map(|j| {
                LibraryFunction::ModulatedGaussian { shift: vec![j as f64], modulation: vec![0.0] }
                    .sample(g)
                    .unwrap()
            })
            .collect();
        let report = nuclearity_inequality_check(&family, &sys, &sys, 1.0, 2.0, &quad).unwrap();
        assert!(report.pass, "lhs {} rhs {}", report.lhs, report.rhs);
        // empty family
        let report = nuclearity_inequality_check(&[], &sys, &sys, 1.0, 2.0, &quad).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert!(report.pass);
        // singleton
        let report =
            nuclearity_inequality_check(&family[3..4], &sys, &sys, 1.0, 2.0, &quad).unwrap();
        assert!(report.pass);
        // non-integrable ratio rejected
        let err = nuclearity_inequality_check(&family, &sys, &sys, 1.0, 1.0, &quad);
        assert!(matches!(err, Err(BbError::Divergent(_))));
    }
}
