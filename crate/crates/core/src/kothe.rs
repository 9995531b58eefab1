//! Köthe sets over the integer lattice, sequence-space norms, the discrete
//! summability condition, and the sampling/translation embedding pair built
//! from the sinc-windowed bump φ₀.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};
use crate::funcgrid::{chi_value, fourier_transform, inverse_fourier, for_each_point, SampledFunction};
use crate::report::{ConditionReport, Variant, Verdict, Witness};
use crate::weights::{integrable_tail, QuadratureSpec, WeightSystem};

/// Finite index box `J = { j ∈ ℤ^d : |j_i| ≤ radius }`, enumerated
/// lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWindow {
    pub dim: usize,
    pub radius: i64,
}

impl IndexWindow {
    pub fn new(dim: usize, radius: i64) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(BbError::InvalidGrid(format!("window dim must be 1 or 2, got {dim}")));
        }
        if radius < 0 {
            return Err(BbError::InvalidGrid(format!("window radius must be >= 0, got {radius}")));
        }
        Ok(IndexWindow { dim, radius })
    }

    pub fn side(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        let axis: Vec<i64> = (-self.radius..=self.radius).collect();
        match self.dim {
            1 => axis.iter().map(|&j| vec![j]).collect(),
            _ => {
                let mut out = Vec::with_capacity(self.len());
                for &j1 in &axis {
                    for &j2 in &axis {
                        out.push(vec![j1, j2]);
                    }
                }
                out
            }
        }
    }

    pub fn flat_index(&self, j: &[i64]) -> Result<usize> {
        if j.len() != self.dim {
            return Err(BbError::DimensionMismatch { expected: self.dim, got: j.len() });
        }
        let mut flat = 0usize;
        for &c in j {
            if c.abs() > self.radius {
                return Err(BbError::InvalidGrid(format!("index {j:?} outside window ±{}", self.radius)));
            }
            flat = flat * self.side() + (c + self.radius) as usize;
        }
        Ok(flat)
    }
}

/// Köthe set: a monotone family of positive sequences on a finite window.
/// Backed either by a weight system sampled at the lattice or by explicit
/// tables per λ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KotheSet {
    pub window: IndexWindow,
    pub lambda_lattice: Vec<f64>,
    generator: KotheGenerator,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KotheGenerator {
    System { system: WeightSystem },
    /// `tables[i][k]` = a^{λ_i}_{j_k} in window enumeration order.
    Explicit { tables: Vec<Vec<f64>> },
}

/// `A_W`: the weight system sampled on the integer lattice.
pub fn kothe_from_system(
    system: &WeightSystem,
    window: IndexWindow,
    lambda_lattice: Vec<f64>,
) -> Result<KotheSet> {
    if system.dim() != window.dim {
        return Err(BbError::DimensionMismatch { expected: window.dim, got: system.dim() });
    }
    let set = KotheSet {
        window,
        lambda_lattice,
        generator: KotheGenerator::System { system: system.clone() },
    };
    set.check_monotone()?;
    Ok(set)
}

/// Köthe set from explicit per-λ tables (window enumeration order).
pub fn kothe_explicit(
    window: IndexWindow,
    lambda_lattice: Vec<f64>,
    tables: Vec<Vec<f64>>,
) -> Result<KotheSet> {
    if tables.len() != lambda_lattice.len() {
        return Err(BbError::Config("one table per lattice λ required".into()));
    }
    for t in &tables {
        if t.len() != window.len() {
            return Err(BbError::Config(format!(
                "table length {} does not match window size {}",
                t.len(),
                window.len()
            )));
        }
        if t.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(BbError::InvalidWeight("Köthe entries must be positive and finite".into()));
        }
    }
    let set = KotheSet { window, lambda_lattice, generator: KotheGenerator::Explicit { tables } };
    set.check_monotone()?;
    Ok(set)
}

impl KotheSet {
    pub fn dim(&self) -> usize {
        self.window.dim
    }

    /// `log a^λ_j`.
    pub fn log_entry(&self, lambda: f64, j: &[i64]) -> Result<f64> {
        match &self.generator {
            KotheGenerator::System { system } => {
                let x: Vec<f64> = j.iter().map(|&c| c as f64).collect();
                Ok(system.log_eval(lambda, &x))
            }
            KotheGenerator::Explicit { tables } => {
                let i = self
                    .lambda_lattice
                    .iter()
                    .position(|&l| l == lambda)
                    .ok_or_else(|| BbError::EmptySearch(format!("λ = {lambda} not in lattice")))?;
                Ok(tables[i][self.window.flat_index(j)?].ln())
            }
        }
    }

    pub fn entry(&self, lambda: f64, j: &[i64]) -> Result<f64> {
        Ok(self.log_entry(lambda, j)?.exp())
    }

    /// Sequence `(a^λ_j)_{j∈J}` in window order.
    pub fn weights(&self, lambda: f64) -> Result<Vec<f64>> {
        self.window.points().iter().map(|j| self.entry(lambda, j)).collect()
    }

    pub fn system(&self) -> Option<&WeightSystem> {
        match &self.generator {
            KotheGenerator::System { system } => Some(system),
            KotheGenerator::Explicit { .. } => None,
        }
    }

    fn check_monotone(&self) -> Result<()> {
        let points = self.window.points();
        let mut sorted = self.lambda_lattice.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in sorted.windows(2) {
            let (mu, lam) = (pair[0], pair[1]);
            for j in &points {
                let lo = self.log_entry(lam, j)?;
                let hi = self.log_entry(mu, j)?;
                if lo > hi + 1e-9 {
                    return Err(BbError::InvalidWeight(format!(
                        "Köthe family not monotone at j={j:?}: a^{lam} > a^{mu}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Finite-support complex sequence on a window, in window enumeration order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexedSequence {
    pub window: IndexWindow,
    pub values: Vec<Complex64>,
}

impl IndexedSequence {
    pub fn zero(window: IndexWindow) -> Self {
        IndexedSequence { window, values: vec![Complex64::new(0.0, 0.0); window.len()] }
    }

    pub fn unit(window: IndexWindow, j: &[i64]) -> Result<Self> {
        let mut s = Self::zero(window);
        s.values[window.flat_index(j)?] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_values(window: IndexWindow, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(BbError::Config(format!(
                "sequence length {} does not match window size {}",
                values.len(),
                window.len()
            )));
        }
        Ok(IndexedSequence { window, values })
    }

    pub fn get(&self, j: &[i64]) -> Result<Complex64> {
        Ok(self.values[self.window.flat_index(j)?])
    }

    pub fn sup_error(&self, other: &IndexedSequence) -> Result<f64> {
        if self.window != other.window {
            return Err(BbError::GridMismatch("index windows differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `‖c‖_{l¹(a)} = Σ_j |c_j| a_j`.
pub fn l1_norm(c: &IndexedSequence, a: &[f64]) -> Result<f64> {
    if a.len() != c.values.len() {
        return Err(BbError::GridMismatch("weight sequence does not match the window".into()));
    }
    Ok(c.values.iter().zip(a).map(|(v, w)| v.norm() * w).sum())
}

/// `‖c‖_{l∞(a)} = sup_j |c_j| a_j`.
pub fn linf_norm(c: &IndexedSequence, a: &[f64]) -> Result<f64> {
    if a.len() != c.values.len() {
        return Err(BbError::GridMismatch("weight sequence does not match the window".into()));
    }
    Ok(c.values.iter().zip(a).map(|(v, w)| v.norm() * w).fold(0.0, f64::max))
}

/// Summability condition on the Köthe set: ratios `a^λ/a^μ ∈ l¹` with the
/// variant quantifiers over the λ-lattice. Truncated lattice sums are
/// combined with the same tail-rate fit used for the continuous check, so
/// the verdict matches the weight-system checker on `A_W`.
pub fn check_kothe_n(set: &KotheSet, variant: Variant, quad: &QuadratureSpec) -> Result<ConditionReport> {
    let system = set.system().ok_or_else(|| {
        BbError::Precondition("summability check needs a system-backed Köthe set".into())
    })?;
    let dim = set.dim();
    let sum_radius = set.window.radius.max(64);
    let sum_window = IndexWindow::new(dim, sum_radius)?;
    let points = sum_window.points();
    let mut witnesses = Vec::new();
    let mut ok_all = true;
    for &outer in &set.lambda_lattice {
        let candidates: Vec<f64> = (1..=quad.rel_steps)
            .map(|j| match variant {
                Variant::Beurling => outer * 2f64.powi(-(j as i32)),
                Variant::Roumieu => outer * 2f64.powi(j as i32),
            })
            .collect();
        let mut found = None;
        for inner in candidates {
            let (lam, mu) = match variant {
                Variant::Beurling => (outer, inner),
                Variant::Roumieu => (inner, outer),
            };
            let log_g = |x: &[f64]| system.log_ratio(lam, mu, x);
            let (ok, _) = integrable_tail(
                &log_g,
                dim,
                sum_radius as f64,
                quad.tail_delta,
                quad.tail_octaves,
            );
            if ok {
                let sum: f64 = points
                    .iter()
                    .map(|j| {
                        let x: Vec<f64> = j.iter().map(|&c| c as f64).collect();
                        log_g(&x).exp()
                    })
                    .sum();
                found = Some(Witness {
                    lambda: Some(lam),
                    mu: Some(mu),
                    notes: vec![("truncated_sum".into(), sum)],
                    ..Default::default()
                });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => ok_all = false,
        }
    }
    Ok(ConditionReport {
        condition: "kothe-N".into(),
        variant,
        verdict: if ok_all { Verdict::NoCounterexampleOnGrid } else { Verdict::CounterexampleFound },
        witnesses: if ok_all { witnesses } else { vec![] },
        counterexamples: vec![],
        search: format!("lattice sums over |j| <= {sum_radius} plus tail-rate fit"),
    })
}

/// `χ(x) = 2^{-d} ∫_{[-1,1]^d} e^{-2πi x·t} dt = ∏ sin(2πx_i)/(2πx_i)`.
pub fn chi_function(x: &[f64]) -> f64 {
    chi_value(x)
}

/// `φ₀ = (−1)^d ∂_d ⋯ ∂_1 (φ·χ)` by spectral differentiation.
///
/// The half-cell integrals of φ₀ then reproduce `δ_{j,0}`: per axis,
/// `∫₀^{1/2} (−ψ')(x+j) dx = ψ(j) − ψ(j+1/2)` telescopes onto the
/// half-integer zeros of χ, with `ψ(0) = φ(0) = 1`.
pub fn build_phi0(phi: &SampledFunction) -> Result<SampledFunction> {
    let grid = phi.grid;
    let center = match grid.dim {
        1 => grid.n / 2,
        _ => (grid.n / 2) * grid.n + grid.n / 2,
    };
    let at_zero = phi.values[center];
    if (at_zero - Complex64::new(1.0, 0.0)).norm() > 1e-6 {
        return Err(BbError::Precondition(format!(
            "φ(0) = {at_zero} but the construction needs φ(0) = 1"
        )));
    }
    let mut psi = phi.clone();
    for_each_point(&grid, |i, x| {
        psi.values[i] *= chi_value(x);
    });
    let mut hat = fourier_transform(&psi);
    let n = grid.n;
    // one derivative per axis: multiply by 2πi ξ_axis
    match grid.dim {
        1 => {
            for k in 0..n {
                hat.values[k] *= Complex64::new(0.0, 2.0 * std::f64::consts::PI * grid.freq_node(k));
            }
        }
        _ => {
            for k1 in 0..n {
                let f1 = Complex64::new(0.0, 2.0 * std::f64::consts::PI * grid.freq_node(k1));
                for k2 in 0..n {
                    let f2 =
                        Complex64::new(0.0, 2.0 * std::f64::consts::PI * grid.freq_node(k2));
                    hat.values[k1 * n + k2] *= f1 * f2;
                }
            }
        }
    }
    let sign = if grid.dim % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = inverse_fourier(&hat).scale(Complex64::new(sign, 0.0));
    out.grid = grid;
    out.tag = Some("phi0".into());
    Ok(out)
}

/// Nodes per unit length, requiring exact integer translates (`1/h ∈ ℕ`).
fn nodes_per_unit(h: f64) -> Result<usize> {
    let m = 1.0 / h;
    if (m - m.round()).abs() > 1e-9 || m < 1.0 {
        return Err(BbError::Precondition(format!("1/h must be a positive integer, got {m}")));
    }
    Ok(m.round() as usize)
}

/// `T(c) = Σ_j c_j φ₀(· − j)`, with exact integer-node shifts.
pub fn embedding_t(c: &IndexedSequence, phi0: &SampledFunction) -> Result<SampledFunction> {
    let grid = phi0.grid;
    if c.window.dim != grid.dim {
        return Err(BbError::DimensionMismatch { expected: grid.dim, got: c.window.dim });
    }
    let m = nodes_per_unit(grid.h)?;
    // translates must stay well inside the box
    if c.window.radius as f64 > grid.extent() / 2.0 {
        return Err(BbError::Precondition(format!(
            "support radius {} too close to the box boundary (extent {})",
            c.window.radius,
            grid.extent()
        )));
    }
    let mut out = SampledFunction::zero(grid);
    out.tag = None;
    for (j, v) in c.window.points().iter().zip(&c.values) {
        if v.norm() == 0.0 {
            continue;
        }
        let shift: Vec<i64> = j.iter().map(|&ji| ji * m as i64).collect();
        let t = phi0.translate_nodes(&shift)?.scale(*v);
        out = out.add(&t)?;
    }
    Ok(out)
}

/// Composite Simpson weights for `m` sub-intervals of total length `l`.
fn simpson_weights(m: usize, l: f64) -> Vec<f64> {
    let h = l / m as f64;
    let mut w = vec![0.0; m + 1];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * h
            / 3.0;
    }
    w
}

/// `S(φ)_j = ∫_{[0,1/2]^d} φ(x + j) dx` by composite Simpson on the grid
/// nodes of each half-cell.
pub fn sampling_s(phi: &SampledFunction, window: IndexWindow) -> Result<IndexedSequence> {
    let grid = phi.grid;
    if window.dim != grid.dim {
        return Err(BbError::DimensionMismatch { expected: grid.dim, got: window.dim });
    }
    let m = nodes_per_unit(grid.h)?;
    if m < 8 || m % 4 != 0 {
        return Err(BbError::Precondition(format!(
            "half-cell quadrature needs 1/h divisible by 4 and >= 8, got {m}"
        )));
    }
    let half = m / 2; // sub-intervals across [0, 1/2]
    let n = grid.n as i64;
    let base = |j: i64| -> Result<i64> {
        let i = j * m as i64 + n / 2;
        if i < 0 || i + half as i64 >= n {
            return Err(BbError::Precondition(format!("half-cell of j = {j} leaves the grid")));
        }
        Ok(i)
    };
    let w = simpson_weights(half, 0.5);
    let mut out = IndexedSequence::zero(window);
    for (idx, j) in window.points().iter().enumerate() {
        let val = match grid.dim {
            1 => {
                let i0 = base(j[0])?;
                (0..=half)
                    .map(|s| phi.values[(i0 + s as i64) as usize] * w[s])
                    .sum::<Complex64>()
            }
            _ => {
                let i0 = base(j[0])?;
                let i1 = base(j[1])?;
                let mut acc = Complex64::new(0.0, 0.0);
                for s1 in 0..=half {
                    for s2 in 0..=half {
                        let flat = (i0 + s1 as i64) * n + (i1 + s2 as i64);
                        acc += phi.values[flat as usize] * (w[s1] * w[s2]);
                    }
                }
                acc
            }
        };
        out.values[idx] = val;
    }
    Ok(out)
}

/// Round-trip `S(T(c))`; returns the recovered sequence and its sup distance
/// from `c`.
pub fn verify_s_t_identity(
    c: &IndexedSequence,
    phi0: &SampledFunction,
) -> Result<(IndexedSequence, f64)> {
    let spread = embedding_t(c, phi0)?;
    let recovered = sampling_s(&spread, c.window)?;
    let err = recovered.sup_error(c)?;
    Ok((recovered, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgrid::{Grid, LibraryFunction};
    use crate::report::Variant;
    use crate::weights::{check_condition_n, WeightExpr};

    fn abs_system() -> WeightSystem {
        WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap()
    }

    fn window(r: i64) -> IndexWindow {
        IndexWindow::new(1, r).unwrap()
    }

    fn phi_grid() -> Grid {
        Grid::new(1, 4096, 1.0 / 128.0).unwrap()
    }

    #[test]
    fn sequence_norms() {
        let win = window(2);
        let a: Vec<f64> = win.points().iter().map(|j| (j[0].abs() as f64).exp()).collect();
        // unit at 0
        let e0 = IndexedSequence::unit(win, &[0]).unwrap();
        assert_eq!(l1_norm(&e0, &a).unwrap(), 1.0);
        assert_eq!(linf_norm(&e0, &a).unwrap(), 1.0);
        // zero
        let z = IndexedSequence::zero(win);
        assert_eq!(l1_norm(&z, &a).unwrap(), 0.0);
        // all-ones on |j| <= 2
        let ones =
            IndexedSequence::from_values(win, vec![Complex64::new(1.0, 0.0); win.len()]).unwrap();
        let e = std::f64::consts::E;
        assert!((l1_norm(&ones, &a).unwrap() - (1.0 + 2.0 * e + 2.0 * e * e)).abs() <= 1e-12);
        assert!((linf_norm(&ones, &a).unwrap() - e * e).abs() <= 1e-12);
        // l¹ dominates l∞
        assert!(l1_norm(&ones, &a).unwrap() >= linf_norm(&ones, &a).unwrap());
    }

    #[test]
    fn kothe_from_system_values() {
        let set = kothe_from_system(&abs_system(), window(5), vec![0.5, 1.0, 2.0]).unwrap();
        assert_eq!(set.entry(1.0, &[0]).unwrap(), 1.0);
        assert!((set.entry(1.0, &[2]).unwrap() - (2.0f64).exp()).abs() <= 1e-12);
        // monotone in λ at every sampled j
        for j in set.window.points() {
            assert!(set.entry(2.0, &j).unwrap() <= set.entry(1.0, &j).unwrap() + 1e-12);
        }
    }

    #[test]
    fn explicit_set_monotonicity_enforced() {
        let win = window(1);
        let good = kothe_explicit(win, vec![1.0, 2.0], vec![vec![2.0; 3], vec![1.0; 3]]);
        assert!(good.is_ok());
        // increasing in λ violates the invariant
        let bad = kothe_explicit(win, vec![1.0, 2.0], vec![vec![1.0; 3], vec![2.0; 3]]);
        assert!(bad.is_err());
        let nonpos = kothe_explicit(win, vec![1.0], vec![vec![0.0; 3]]);
        assert!(nonpos.is_err());
    }

    #[test]
    fn kothe_n_geometric_series() {
        let set = kothe_from_system(&abs_system(), window(5), vec![1.0]).unwrap();
        let r = check_kothe_n(&set, Variant::Beurling, &QuadratureSpec::default()).unwrap();
        assert!(r.holds());
        let w = &r.witnesses[0];
        assert_eq!(w.lambda, Some(1.0));
        assert_eq!(w.mu, Some(0.5));
        // Σ_j e^{-|j|} = (1+e^{-1})/(1-e^{-1})
        let e1 = (-1.0f64).exp();
        let expected = (1.0 + e1) / (1.0 - e1);
        let sum = w.notes.iter().find(|(k, _)| k == "truncated_sum").unwrap().1;
        assert!((sum - expected).abs() <= 1e-6, "{sum} vs {expected}");
    }

    #[test]
    fn kothe_n_constant_fails() {
        let flat = WeightSystem::exponential(WeightExpr::Zero, 1).unwrap();
        let set = kothe_from_system(&flat, window(5), vec![1.0]).unwrap();
        let r = check_kothe_n(&set, Variant::Beurling, &QuadratureSpec::default()).unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn kothe_n_agrees_with_system_checker() {
        let quad = QuadratureSpec::default();
        for omega in [
            WeightExpr::power(1.0, 1.0),
            WeightExpr::log_power(1.0, 1.0),
            WeightExpr::log_power(1.0, 2.0),
            WeightExpr::Zero,
        ] {
            let sys = WeightSystem::exponential(omega.clone(), 1).unwrap();
            let set = kothe_from_system(&sys, window(5), quad.lambda_lattice.clone()).unwrap();
            for variant in [Variant::Beurling, Variant::Roumieu] {
                let discrete = check_kothe_n(&set, variant, &quad).unwrap().holds();
                let continuous = check_condition_n(&sys, variant, &quad).unwrap().holds();
                assert_eq!(discrete, continuous, "{omega:?} {variant:?}");
            }
        }
    }

    #[test]
    fn chi_matches_defining_integral() {
        // 2^{-1} ∫_{-1}^{1} e^{-2πi x t} dt by fine Simpson, 100 points
        let simpson = |x: f64| {
            let m = 2000;
            let w = simpson_weights(m, 2.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, ws) in w.iter().enumerate() {
                let t = -1.0 + 2.0 * s as f64 / m as f64;
                acc += Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * x * t) * ws;
            }
            0.5 * acc.re
        };
        for i in 0..100 {
            let x = -4.0 + 8.0 * (i as f64 + 0.31) / 100.0;
            assert!((chi_function(&[x]) - simpson(x)).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn phi0_requires_unit_center() {
        let z = SampledFunction::zero(phi_grid());
        assert!(matches!(build_phi0(&z), Err(BbError::Precondition(_))));
    }

    #[test]
    fn phi0_derivative_matches_closed_form() {
        use std::f64::consts::PI;
        let g = LibraryFunction::Gaussian.sample(phi_grid()).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        // φ₀ = -(gχ)' with g = e^{-πt²}, χ = sin(2πt)/(2πt)
        let exact = |t: f64| {
            let g = (-PI * t * t).exp();
            let gp = -2.0 * PI * t * g;
            let u = 2.0 * PI * t;
            let (chi, chip) = if u.abs() < 1e-8 {
                (1.0, 0.0)
            } else {
                (u.sin() / u, 2.0 * PI * (u.cos() * u - u.sin()) / (u * u))
            };
            -(gp * chi + g * chip)
        };
        let grid = phi_grid();
        let mut max_err = 0.0f64;
        for i in (0..grid.n).step_by(17) {
            let t = grid.node(i);
            max_err = max_err.max((phi0.values[i].re - exact(t)).abs());
            max_err = max_err.max(phi0.values[i].im.abs());
        }
        assert!(max_err <= 1e-8, "{max_err}");
        // finite-difference sanity on the sampled ψ
        let mut psi = g.clone();
        for_each_point(&grid, |i, x| psi.values[i] *= chi_value(x));
        for i in (8..grid.n - 8).step_by(53) {
            let fd = (psi.values[i + 1].re - psi.values[i - 1].re) / (2.0 * grid.h);
            // centered differences of the oscillatory sinc factor carry
            // O(h²·(2π)³) truncation error, about 1e-3 at this spacing
            assert!((phi0.values[i].re + fd).abs() <= 5e-3);
        }
    }

    #[test]
    fn phi0_half_cell_integrals_are_delta() {
        let g = LibraryFunction::Gaussian.sample(phi_grid()).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        let s = sampling_s(&phi0, window(5)).unwrap();
        for j in -5..=5i64 {
            let v = s.get(&[j]).unwrap();
            let expected = if j == 0 { 1.0 } else { 0.0 };
            assert!((v.re - expected).abs() <= 1e-6, "j = {j}: {v}");
            assert!(v.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_constants() {
        let grid = Grid::new(1, 256, 1.0 / 16.0).unwrap();
        let one = SampledFunction::from_fn(grid, |_| Complex64::new(1.0, 0.0));
        let s = sampling_s(&one, window(3)).unwrap();
        for j in -3..=3i64 {
            assert!((s.get(&[j]).unwrap().re - 0.5).abs() <= 1e-12);
        }
        let z = SampledFunction::zero(grid);
        let s = sampling_s(&z, window(3)).unwrap();
        assert_eq!(s.get(&[1]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn embedding_linearity_and_units() {
        let g = LibraryFunction::Gaussian.sample(phi_grid()).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        let win = window(3);
        let e0 = IndexedSequence::unit(win, &[0]).unwrap();
        let t0 = embedding_t(&e0, &phi0).unwrap();
        assert!(t0.sup_error(&phi0).unwrap() <= 1e-15);
        let e1 = IndexedSequence::unit(win, &[1]).unwrap();
        let mut both = IndexedSequence::zero(win);
        both.values = e0.values.iter().zip(&e1.values).map(|(a, b)| a + b).collect();
        let sum = embedding_t(&both, &phi0).unwrap();
        let parts = t0.add(&embedding_t(&e1, &phi0).unwrap()).unwrap();
        assert!(sum.sup_error(&parts).unwrap() <= 1e-15);
    }

    #[test]
    fn embedding_rejects_boundary_support() {
        let g = LibraryFunction::Gaussian.sample(phi_grid()).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        // extent 16, radius 9 > 8 rejected
        let c = IndexedSequence::unit(window(9), &[9]).unwrap();
        assert!(matches!(embedding_t(&c, &phi0), Err(BbError::Precondition(_))));
    }

    #[test]
    fn s_after_t_is_identity() {
        let g = LibraryFunction::Gaussian.sample(phi_grid()).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        let win = window(3);
        // unit
        let e0 = IndexedSequence::unit(win, &[0]).unwrap();
        let (_, err) = verify_s_t_identity(&e0, &phi0).unwrap();
        assert!(err <= 1e-5, "{err}");
        // zero
        let z = IndexedSequence::zero(win);
        let (_, err) = verify_s_t_identity(&z, &phi0).unwrap();
        assert_eq!(err, 0.0);
        // pseudo-random complex coefficients
        let vals: Vec<Complex64> = (0..win.len())
            .map(|i| {
                let a = ((i * 2654435761) % 1000) as f64 / 500.0 - 1.0;
                let b = ((i * 40503) % 1000) as f64 / 500.0 - 1.0;
                Complex64::new(a, b)
            })
            .collect();
        let c = IndexedSequence::from_values(win, vals).unwrap();
        let (_, err) = verify_s_t_identity(&c, &phi0).unwrap();
        assert!(err <= 1e-5, "{err}");
    }

    #[test]
    fn two_dim_phi0_and_identity() {
        let grid = Grid::new(2, 1024, 1.0 / 64.0).unwrap();
        let g = LibraryFunction::Gaussian.sample(grid).unwrap();
        let phi0 = build_phi0(&g).unwrap();
        let win = IndexWindow::new(2, 1).unwrap();
        let s = sampling_s(&phi0, win).unwrap();
        for j in win.points() {
            let expected = if j == vec![0, 0] { 1.0 } else { 0.0 };
            let v = s.get(&j).unwrap();
            assert!((v.re - expected).abs() <= 1e-5, "j = {j:?}: {v}");
        }
        let c = IndexedSequence::unit(win, &[1, -1]).unwrap();
        let (_, err) = verify_s_t_identity(&c, &phi0).unwrap();
        assert!(err <= 1e-4, "{err}");
    }
}
