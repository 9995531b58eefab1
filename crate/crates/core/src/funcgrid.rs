//! Uniform centered grids, sampled complex functions, the Fourier transform
//! with the `e^{-2πi ξ·t}` convention, and weighted seminorms.
//!
//! Time nodes per axis are `t_n = (n - N/2) h`; frequency nodes are
//! `ξ_k = (k - N/2) / (N h)`. With this layout the discrete transform is a
//! standard FFT conjugated by alternating-sign twiddles, and the unit
//! Gaussian `e^{-π t²}` is self-dual to near machine precision.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};
use crate::weights::WeightFunction;

/// Uniform centered grid with `n` points per axis and spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, h: f64) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(BbError::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if !n.is_power_of_two() || n < 4 {
            return Err(BbError::InvalidGrid(format!("n must be a power of two >= 4, got {n}")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(BbError::InvalidGrid(format!("spacing h must be positive, got {h}")));
        }
        Ok(Grid { dim, n, h })
    }

    /// Half-extent of the box: nodes cover `[-T, T)` per axis.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.h / 2.0
    }

    /// Time node along one axis.
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.n as f64 / 2.0) * self.h
    }

    /// Frequency node along one axis.
    pub fn freq_node(&self, k: usize) -> f64 {
        (k as f64 - self.n as f64 / 2.0) / (self.n as f64 * self.h)
    }

    /// Frequency spacing `1/(N h)`.
    pub fn freq_spacing(&self) -> f64 {
        1.0 / (self.n as f64 * self.h)
    }

    /// The grid the Fourier transform lives on.
    pub fn frequency_grid(&self) -> Grid {
        Grid { dim: self.dim, n: self.n, h: self.freq_spacing() }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index -> time point.
    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| self.node(i)).collect()
    }

    /// Cell volume `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }
}

/// Complex samples of a function on a [`Grid`]. Stored row-major for d = 2
/// (`values[i1 * n + i2]`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    /// Symbolic tag when the samples come from the closed-form library.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<String>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(BbError::GridMismatch(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(BbError::InvalidGrid("non-finite sample value".into()));
        }
        Ok(SampledFunction { grid, values, tag: None })
    }

    pub fn zero(grid: Grid) -> Self {
        SampledFunction { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], tag: Some("zero".into()) }
    }

    /// Sample a closure `f(t)` on the grid.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(grid: Grid, f: F) -> Self {
        let n = grid.n;
        let mut values = Vec::with_capacity(grid.len());
        match grid.dim {
            1 => {
                for i in 0..n {
                    values.push(f(&[grid.node(i)]));
                }
            }
            _ => {
                for i1 in 0..n {
                    for i2 in 0..n {
                        values.push(f(&[grid.node(i1), grid.node(i2)]));
                    }
                }
            }
        }
        SampledFunction { grid, values, tag: None }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            tag: None,
        }
    }

    pub fn add(&self, other: &SampledFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(SampledFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            tag: None,
        })
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(SampledFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            tag: None,
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SampledFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(SampledFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            tag: None,
        })
    }

    pub fn conj(&self) -> Self {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
            tag: None,
        }
    }

    /// Reflection `f(-t)` realized as an index reversal. The leftmost node
    /// `-T` has no mirror on the grid and keeps its value; library functions
    /// have decayed there.
    pub fn reflect(&self) -> Self {
        let n = self.grid.n;
        let flip = |i: usize| (n - i) % n;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        match self.grid.dim {
            1 => {
                for i in 0..n {
                    values[flip(i)] = self.values[i];
                }
            }
            _ => {
                for i1 in 0..n {
                    for i2 in 0..n {
                        values[flip(i1) * n + flip(i2)] = self.values[i1 * n + i2];
                    }
                }
            }
        }
        SampledFunction { grid: self.grid, values, tag: None }
    }

    /// Translate by a whole number of grid nodes per axis, zero-filling.
    pub fn translate_nodes(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.grid.dim {
            return Err(BbError::DimensionMismatch { expected: self.grid.dim, got: shift.len() });
        }
        let n = self.grid.n as i64;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        match self.grid.dim {
            1 => {
                for i in 0..n {
                    let j = i - shift[0];
                    if (0..n).contains(&j) {
                        values[i as usize] = self.values[j as usize];
                    }
                }
            }
            _ => {
                for i1 in 0..n {
                    for i2 in 0..n {
                        let j1 = i1 - shift[0];
                        let j2 = i2 - shift[1];
                        if (0..n).contains(&j1) && (0..n).contains(&j2) {
                            values[(i1 * n + i2) as usize] = self.values[(j1 * n + j2) as usize];
                        }
                    }
                }
            }
        }
        Ok(SampledFunction { grid: self.grid, values, tag: None })
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sup distance to another sampled function on the same grid.
    pub fn sup_error(&self, other: &SampledFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// L² pairing `h^d Σ f·conj(g)`.
    pub fn pairing(&self, other: &SampledFunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(sum * self.grid.cell_volume())
    }

    pub fn check_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(BbError::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Fourier transform
// ---------------------------------------------------------------------------

/// In-place centered DFT along a contiguous slice of length `n`.
///
/// Forward: `out_k = h Σ_n in_n e^{-2πi (n-N/2)(k-N/2)/N}`.
/// Backward: `out_n = h Σ_k in_k e^{+2πi (n-N/2)(k-N/2)/N}`.
///
/// In both directions `h` is the input sample spacing, i.e. the Riemann
/// weight of the approximated integral; composing forward (spacing h) with
/// backward (spacing 1/(Nh)) is the exact identity on any grid.
fn centered_dft_slice(values: &mut [Complex64], h: f64, forward: bool, planner: &mut FftPlanner<f64>) {
    let n = values.len();
    let m = n / 2;
    // (n-M)(k-M) = nk - M(n+k) + M^2, so the centered kernel is the plain FFT
    // kernel conjugated by (-1)^n, (-1)^k and a constant phase (-1)^M.
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    for (i, v) in values.iter_mut().enumerate() {
        if i % 2 == 1 {
            *v = -*v;
        }
    }
    let fft = if forward { planner.plan_fft_forward(n) } else { planner.plan_fft_inverse(n) };
    fft.process(values);
    let amp = h;
    for (k, v) in values.iter_mut().enumerate() {
        let s = if k % 2 == 1 { -1.0 } else { 1.0 };
        *v *= amp * s * sign_m;
    }
}

/// Discrete approximation of the continuous Fourier transform
/// `F(f)(ξ) = ∫ f(t) e^{-2πi ξ·t} dt` on the centered grid.
pub fn fourier_transform(f: &SampledFunction) -> SampledFunction {
    transform_impl(f, true)
}

/// Inverse of [`fourier_transform`].
pub fn inverse_fourier(f: &SampledFunction) -> SampledFunction {
    transform_impl(f, false)
}

fn transform_impl(f: &SampledFunction, forward: bool) -> SampledFunction {
    let grid = f.grid;
    let n = grid.n;
    let mut planner = FftPlanner::new();
    let mut values = f.values.clone();
    match grid.dim {
        1 => centered_dft_slice(&mut values, grid.h, forward, &mut planner),
        _ => {
            // rows
            for i1 in 0..n {
                centered_dft_slice(&mut values[i1 * n..(i1 + 1) * n], grid.h, forward, &mut planner);
            }
            // columns
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for i2 in 0..n {
                for i1 in 0..n {
                    col[i1] = values[i1 * n + i2];
                }
                centered_dft_slice(&mut col, grid.h, forward, &mut planner);
                for i1 in 0..n {
                    values[i1 * n + i2] = col[i1];
                }
            }
        }
    }
    let out_grid = if forward { grid.frequency_grid() } else { Grid { dim: grid.dim, n, h: 1.0 / (n as f64 * grid.h) } };
    SampledFunction { grid: out_grid, values, tag: None }
}

/// Direct O(N²)-per-axis quadrature oracle for [`fourier_transform`].
/// Retained in the public API so tests elsewhere can reuse it.
pub fn fourier_quadrature_oracle(f: &SampledFunction) -> SampledFunction {
    let grid = f.grid;
    let out_grid = grid.frequency_grid();
    let n = grid.n;
    let hv = grid.cell_volume();
    let eval_1d = |k: usize, vals: &dyn Fn(usize) -> Complex64| -> Complex64 {
        let xi = grid.freq_node(k);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let t = grid.node(i);
            let phase = -2.0 * std::f64::consts::PI * xi * t;
            acc += vals(i) * Complex64::from_polar(1.0, phase);
        }
        acc
    };
    let mut values = Vec::with_capacity(grid.len());
    match grid.dim {
        1 => {
            for k in 0..n {
                values.push(eval_1d(k, &|i| f.values[i]) * hv);
            }
        }
        _ => {
            for k1 in 0..n {
                for k2 in 0..n {
                    let xi1 = grid.freq_node(k1);
                    let xi2 = grid.freq_node(k2);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i1 in 0..n {
                        let t1 = grid.node(i1);
                        for i2 in 0..n {
                            let t2 = grid.node(i2);
                            let phase = -2.0 * std::f64::consts::PI * (xi1 * t1 + xi2 * t2);
                            acc += f.values[i1 * n + i2] * Complex64::from_polar(1.0, phase);
                        }
                    }
                    values.push(acc * hv);
                }
            }
        }
    }
    SampledFunction { grid: out_grid, values, tag: None }
}

// ---------------------------------------------------------------------------
// Seminorms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeminormKind {
    SupWeighted,
    L1Weighted,
    /// Sum of a time part and a frequency part.
    Bb,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeminormValue {
    pub value: f64,
    pub kind: SeminormKind,
    /// For `Bb` kind: the two summands, time part first.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parts: Option<(f64, f64)>,
}

/// `sup_x |f(x)| w(x)` over the grid.
pub fn sup_seminorm(f: &SampledFunction, w: &WeightFunction) -> Result<SeminormValue> {
    if w.dim() != f.grid.dim {
        return Err(BbError::DimensionMismatch { expected: f.grid.dim, got: w.dim() });
    }
    let mut best = 0.0f64;
    for_each_point(&f.grid, |idx, x| {
        let v = f.values[idx].norm() * w.eval_slice(x);
        if v > best {
            best = v;
        }
    });
    Ok(SeminormValue { value: best, kind: SeminormKind::SupWeighted, parts: None })
}

/// `h^d Σ |f(x)| w(x)` (Riemann sum for the weighted L¹ norm).
pub fn l1_seminorm(f: &SampledFunction, w: &WeightFunction) -> Result<SeminormValue> {
    if w.dim() != f.grid.dim {
        return Err(BbError::DimensionMismatch { expected: f.grid.dim, got: w.dim() });
    }
    let mut acc = 0.0f64;
    for_each_point(&f.grid, |idx, x| {
        acc += f.values[idx].norm() * w.eval_slice(x);
    });
    Ok(SeminormValue { value: acc * f.grid.cell_volume(), kind: SeminormKind::L1Weighted, parts: None })
}

/// `‖f‖_w + ‖f̂‖_v` with both parts sup-weighted.
pub fn bb_seminorm(f: &SampledFunction, v: &WeightFunction, w: &WeightFunction) -> Result<SeminormValue> {
    let time = sup_seminorm(f, w)?.value;
    let fhat = fourier_transform(f);
    let freq = sup_seminorm(&fhat, v)?.value;
    Ok(SeminormValue { value: time + freq, kind: SeminormKind::Bb, parts: Some((time, freq)) })
}

/// `‖f‖_{w,1} + ‖f̂‖_{v,1}`.
pub fn bb_l1_seminorm(f: &SampledFunction, v: &WeightFunction, w: &WeightFunction) -> Result<SeminormValue> {
    let time = l1_seminorm(f, w)?.value;
    let fhat = fourier_transform(f);
    let freq = l1_seminorm(&fhat, v)?.value;
    Ok(SeminormValue { value: time + freq, kind: SeminormKind::Bb, parts: Some((time, freq)) })
}

/// Iterate over all grid points, passing the flat index and the coordinates.
pub fn for_each_point<F: FnMut(usize, &[f64])>(grid: &Grid, mut f: F) {
    let n = grid.n;
    match grid.dim {
        1 => {
            for i in 0..n {
                f(i, &[grid.node(i)]);
            }
        }
        _ => {
            for i1 in 0..n {
                let x1 = grid.node(i1);
                for i2 in 0..n {
                    f(i1 * n + i2, &[x1, grid.node(i2)]);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Function library
// ---------------------------------------------------------------------------

/// Closed-form test corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum LibraryFunction {
    /// `e^{-π |t|²}`, self-dual under this Fourier convention.
    Gaussian,
    /// `t e^{-π t²}` (d = 1 only).
    Hermite1,
    /// `∏_i sin(2π x_i)/(2π x_i)`, the inverse-transform of the cube indicator.
    Chi,
    /// `e^{2πi b·t} g(t - a)`.
    ModulatedGaussian { shift: Vec<f64>, modulation: Vec<f64> },
    Zero,
}

impl LibraryFunction {
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "gaussian" => Ok(LibraryFunction::Gaussian),
            "hermite1" => Ok(LibraryFunction::Hermite1),
            "chi" => Ok(LibraryFunction::Chi),
            "zero" => Ok(LibraryFunction::Zero),
            other => Err(BbError::UnknownTag(other.to_string())),
        }
    }

    pub fn eval(&self, t: &[f64]) -> Complex64 {
        use std::f64::consts::PI;
        match self {
            LibraryFunction::Gaussian => {
                let r2: f64 = t.iter().map(|x| x * x).sum();
                Complex64::new((-PI * r2).exp(), 0.0)
            }
            LibraryFunction::Hermite1 => {
                let r2: f64 = t.iter().map(|x| x * x).sum();
                Complex64::new(t[0] * (-PI * r2).exp(), 0.0)
            }
            LibraryFunction::Chi => Complex64::new(chi_value(t), 0.0),
            LibraryFunction::ModulatedGaussian { shift, modulation } => {
                let r2: f64 = t.iter().zip(shift).map(|(x, a)| (x - a) * (x - a)).sum();
                let phase: f64 = t.iter().zip(modulation).map(|(x, b)| 2.0 * PI * b * x).sum();
                Complex64::from_polar((-PI * r2).exp(), phase)
            }
            LibraryFunction::Zero => Complex64::new(0.0, 0.0),
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<SampledFunction> {
        if matches!(self, LibraryFunction::Hermite1) && grid.dim != 1 {
            return Err(BbError::DimensionMismatch { expected: 1, got: grid.dim });
        }
        if let LibraryFunction::ModulatedGaussian { shift, modulation } = self {
            if shift.len() != grid.dim || modulation.len() != grid.dim {
                return Err(BbError::DimensionMismatch { expected: grid.dim, got: shift.len() });
            }
        }
        let mut f = SampledFunction::from_fn(grid, |t| self.eval(t));
        f.tag = Some(format!("{self:?}"));
        Ok(f)
    }
}

/// `χ(x) = ∏_i sin(2π x_i)/(2π x_i)` with the removable singularity filled in.
/// Vanishes at every non-zero half-integer lattice point.
pub fn chi_value(x: &[f64]) -> f64 {
    x.iter()
        .map(|&xi| {
            // exact values on the half-integer lattice, where sin(πk) would
            // otherwise leave ~1e-16 residue
            let doubled = 2.0 * xi;
            if doubled.fract() == 0.0 {
                if doubled == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                let u = 2.0 * std::f64::consts::PI * xi;
                u.sin() / u
            }
        })
        .product()
}
