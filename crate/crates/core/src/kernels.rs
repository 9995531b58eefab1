//! Bivariate kernels: the tensor embedding, its projective seminorm bound,
//! the time-frequency round-trip operator inverting the embedding, kernel
//! application, and separable (low-rank) approximation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};
use crate::funcgrid::{bb_seminorm, fourier_transform, Grid, SampledFunction};
use crate::report::BoundReport;
use crate::stft::{adjoint_stft, pairing_tolerance, stft, TimeFrequencyArray, BOUND_TOL};
use crate::weights::WeightFunction;

/// Hard cap on the number of complex entries in the 4-d time-frequency
/// array (48⁴ ≈ 85 MB of doubles).
pub const MAX_SPECTRUM_ENTRIES: usize = 48 * 48 * 48 * 48;

/// Kernel `K(x₁, x₂)` sampled on a pair of 1-d grids, with optional
/// separable-rank metadata recording `K = Σ_k φ_k ⊗ ψ_k` exactly.
#[derive(Debug, Clone)]
pub struct BivariateKernel {
    pub grid1: Grid,
    pub grid2: Grid,
    /// Row-major: `values[i1 * grid2.n + i2] = K(t_{i1}, t_{i2})`.
    pub values: Vec<Complex64>,
    pub factors: Option<Vec<(SampledFunction, SampledFunction)>>,
}

impl BivariateKernel {
    pub fn new(grid1: Grid, grid2: Grid, values: Vec<Complex64>) -> Result<Self> {
        if grid1.dim != 1 || grid2.dim != 1 {
            return Err(BbError::InvalidGrid("kernel grids must be one-dimensional".into()));
        }
        if values.len() != grid1.n * grid2.n {
            return Err(BbError::GridMismatch(format!(
                "kernel has {} values for a {}×{} grid",
                values.len(),
                grid1.n,
                grid2.n
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(BbError::InvalidWeight("kernel values must be finite".into()));
        }
        Ok(BivariateKernel { grid1, grid2, values, factors: None })
    }

    pub fn zero(grid1: Grid, grid2: Grid) -> Result<Self> {
        let n = grid1.n * grid2.n;
        let mut k = Self::new(grid1, grid2, vec![Complex64::new(0.0, 0.0); n])?;
        k.factors = Some(vec![]);
        Ok(k)
    }

    pub fn rank(&self) -> Option<usize> {
        self.factors.as_ref().map(|f| f.len())
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_error(&self, other: &BivariateKernel) -> Result<f64> {
        if self.grid1 != other.grid1 || self.grid2 != other.grid2 {
            return Err(BbError::GridMismatch("kernel grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_error(&self, other: &BivariateKernel) -> Result<f64> {
        if self.grid1 != other.grid1 || self.grid2 != other.grid2 {
            return Err(BbError::GridMismatch("kernel grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// View as a 2-d sampled function; requires the two axes to share one
    /// grid (isotropic sampling).
    pub fn as_sampled(&self) -> Result<SampledFunction> {
        if self.grid1 != self.grid2 {
            return Err(BbError::GridMismatch(
                "2-d view needs identical axis grids".into(),
            ));
        }
        let grid = Grid::new(2, self.grid1.n, self.grid1.h)?;
        SampledFunction::new(grid, self.values.clone())
    }
}

/// Round-trip diagnostics for the reconstruction operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelRoundTripReport {
    pub input_rank: Option<usize>,
    pub sup_error: f64,
    pub grid_sizes: (usize, usize),
    pub window_tags: Vec<String>,
    pub pairing1: Complex64,
    pub pairing2: Complex64,
}

/// `ι(Σ φ_k ⊗ ψ_k)(x₁, x₂) = Σ φ_k(x₁) ψ_k(x₂)`, exact on the grid.
pub fn tensor_embed(
    phi_list: &[SampledFunction],
    psi_list: &[SampledFunction],
) -> Result<BivariateKernel> {
    if phi_list.len() != psi_list.len() {
        return Err(BbError::GridMismatch(format!(
            "{} left factors vs {} right factors",
            phi_list.len(),
            psi_list.len()
        )));
    }
    if phi_list.is_empty() {
        return Err(BbError::EmptySearch(
            "tensor embedding needs at least the grids; use BivariateKernel::zero for the empty sum"
                .into(),
        ));
    }
    let grid1 = phi_list[0].grid;
    let grid2 = psi_list[0].grid;
    if grid1.dim != 1 || grid2.dim != 1 {
        return Err(BbError::InvalidGrid("tensor factors must be one-dimensional".into()));
    }
    for f in phi_list {
        if f.grid != grid1 {
            return Err(BbError::GridMismatch("left factors on mixed grids".into()));
        }
    }
    for f in psi_list {
        if f.grid != grid2 {
            return Err(BbError::GridMismatch("right factors on mixed grids".into()));
        }
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid1.n * grid2.n];
    for (phi, psi) in phi_list.iter().zip(psi_list) {
        for i1 in 0..grid1.n {
            let a = phi.values[i1];
            for i2 in 0..grid2.n {
                values[i1 * grid2.n + i2] += a * psi.values[i2];
            }
        }
    }
    let mut k = BivariateKernel::new(grid1, grid2, values)?;
    k.factors = Some(phi_list.iter().cloned().zip(psi_list.iter().cloned()).collect());
    Ok(k)
}

/// Weighted sup of a kernel array under the product weight `u₁ ⊗ u₂`.
fn product_weighted_sup(
    values: &[Complex64],
    grid1: &Grid,
    grid2: &Grid,
    u1: &WeightFunction,
    u2: &WeightFunction,
) -> Result<f64> {
    let t1: Vec<f64> = (0..grid1.n).map(|i| u1.eval(&[grid1.node(i)])).collect::<Result<_>>()?;
    let t2: Vec<f64> = (0..grid2.n).map(|i| u2.eval(&[grid2.node(i)])).collect::<Result<_>>()?;
    let mut sup = 0.0f64;
    for i1 in 0..grid1.n {
        for i2 in 0..grid2.n {
            sup = sup.max(values[i1 * grid2.n + i2].norm() * t1[i1] * t2[i2]);
        }
    }
    Ok(sup)
}

/// Projective bound: the tensor seminorm of the embedded kernel is at most
/// twice the sum of the factor seminorm products.
pub fn projective_bound_check(
    phi_list: &[SampledFunction],
    psi_list: &[SampledFunction],
    v1: &WeightFunction,
    w1: &WeightFunction,
    v2: &WeightFunction,
    w2: &WeightFunction,
) -> Result<BoundReport> {
    if phi_list.len() != psi_list.len() {
        return Err(BbError::GridMismatch(format!(
            "{} left factors vs {} right factors",
            phi_list.len(),
            psi_list.len()
        )));
    }
    let (lhs, rhs) = if phi_list.is_empty() {
        (0.0, 0.0)
    } else {
        let k = tensor_embed(phi_list, psi_list)?;
        let time_sup = product_weighted_sup(&k.values, &k.grid1, &k.grid2, w1, w2)?;
        // the 2-d Fourier transform of the kernel, for the frequency half
        let hat = fourier_transform(&k.as_sampled()?);
        let fgrid1 = k.grid1.frequency_grid();
        let fgrid2 = k.grid2.frequency_grid();
        let freq_sup = product_weighted_sup(&hat.values, &fgrid1, &fgrid2, v1, v2)?;
        let mut sum = 0.0;
        for (phi, psi) in phi_list.iter().zip(psi_list) {
            sum += bb_seminorm(phi, v1, w1)?.value * bb_seminorm(psi, v2, w2)?.value;
        }
        (time_sup + freq_sup, 2.0 * sum)
    };
    Ok(BoundReport::new(
        "projective-bound",
        lhs,
        rhs,
        vec![("rank".into(), phi_list.len() as f64)],
        BOUND_TOL,
    ))
}

/// 4-d time-frequency transform of a kernel with a separable window,
/// computed as nested 1-d transforms per axis.
///
/// Layout: `values[((a·n₁ + k)·n₂ + b)·n₂ + l]` holds the coefficient at
/// time shift `(x_a, x_b)` and frequency `(ξ_k, ξ_l)`.
#[derive(Debug, Clone)]
pub struct KernelSpectrum {
    pub grid1: Grid,
    pub grid2: Grid,
    pub values: Vec<Complex64>,
}

impl KernelSpectrum {
    pub fn flat(&self, a: usize, b: usize, k: usize, l: usize) -> usize {
        ((a * self.grid1.n + k) * self.grid2.n + b) * self.grid2.n + l
    }

    pub fn sup_error(&self, other: &KernelSpectrum) -> Result<f64> {
        if self.grid1 != other.grid1 || self.grid2 != other.grid2 {
            return Err(BbError::GridMismatch("spectrum grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn guard_entries(n1: usize, n2: usize) -> Result<usize> {
    let total = n1 * n1 * n2 * n2;
    if total > MAX_SPECTRUM_ENTRIES {
        return Err(BbError::MemoryGuard(format!(
            "{n1}²×{n2}² = {total} entries exceeds the {MAX_SPECTRUM_ENTRIES} cap"
        )));
    }
    Ok(total)
}

/// Analysis with the separable window `w₁ ⊗ w₂`: transform along `t₁` for
/// each `t₂` sample, then along `t₂` for each `(x₁, ξ₁)` pair.
pub fn kernel_stft(
    kernel: &BivariateKernel,
    w1: &SampledFunction,
    w2: &SampledFunction,
) -> Result<KernelSpectrum> {
    let (g1, g2) = (kernel.grid1, kernel.grid2);
    if w1.grid != g1 || w2.grid != g2 {
        return Err(BbError::GridMismatch("windows do not match the kernel grids".into()));
    }
    let total = guard_entries(g1.n, g2.n)?;
    let (n1, n2) = (g1.n, g2.n);
    // stage 1: per t₂ column, transform in t₁ -> partial[(a·n1 + k)·n2 + i2]
    let mut partial = vec![Complex64::new(0.0, 0.0); n1 * n1 * n2];
    for i2 in 0..n2 {
        let col: Vec<Complex64> = (0..n1).map(|i1| kernel.values[i1 * n2 + i2]).collect();
        let f = SampledFunction::new(g1, col)?;
        let tf = stft(&f, w1)?;
        for ak in 0..n1 * n1 {
            partial[ak * n2 + i2] = tf.values[ak];
        }
    }
    // stage 2: per (x₁, ξ₁) pair, transform in t₂
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    for ak in 0..n1 * n1 {
        let row = partial[ak * n2..(ak + 1) * n2].to_vec();
        let f = SampledFunction::new(g2, row)?;
        let tf = stft(&f, w2)?;
        values[ak * n2 * n2..(ak + 1) * n2 * n2].copy_from_slice(&tf.values);
    }
    Ok(KernelSpectrum { grid1: g1, grid2: g2, values })
}

/// Direct quadrature oracle for [`kernel_stft`]: the flat 4-d sum
/// `h₁h₂ Σ K(t₁,t₂) conj(w₁(t₁−x_a) w₂(t₂−x_b)) e^{−2πi(ξ_k t₁ + ξ_l t₂)}`.
pub fn kernel_stft_oracle(
    kernel: &BivariateKernel,
    w1: &SampledFunction,
    w2: &SampledFunction,
) -> Result<KernelSpectrum> {
    let (g1, g2) = (kernel.grid1, kernel.grid2);
    if w1.grid != g1 || w2.grid != g2 {
        return Err(BbError::GridMismatch("windows do not match the kernel grids".into()));
    }
    let total = guard_entries(g1.n, g2.n)?;
    let (n1, n2) = (g1.n, g2.n);
    let weight = g1.h * g2.h;
    let mut out = KernelSpectrum {
        grid1: g1,
        grid2: g2,
        values: vec![Complex64::new(0.0, 0.0); total],
    };
    let phase = |xi: f64, t: f64| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * xi * t);
    for a in 0..n1 {
        for b in 0..n2 {
            for k in 0..n1 {
                for l in 0..n2 {
                    let (xi1, xi2) = (g1.freq_node(k), g2.freq_node(l));
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i1 in 0..n1 {
                        let t1 = g1.node(i1);
                        // zero-filled node translate, as in the fast path
                        let j1 = i1 as i64 - (a as i64 - n1 as i64 / 2);
                        if j1 < 0 || j1 >= n1 as i64 {
                            continue;
                        }
                        let win1 = w1.values[j1 as usize].conj();
                        let p1 = phase(xi1, t1);
                        for i2 in 0..n2 {
                            let t2 = g2.node(i2);
                            let j2 = i2 as i64 - (b as i64 - n2 as i64 / 2);
                            if j2 < 0 || j2 >= n2 as i64 {
                                continue;
                            }
                            let win2 = w2.values[j2 as usize].conj();
                            acc += kernel.values[i1 * n2 + i2]
                                * win1
                                * win2
                                * p1
                                * phase(xi2, t2);
                        }
                    }
                    let flat = out.flat(a, b, k, l);
                    out.values[flat] = acc * weight;
                }
            }
        }
    }
    Ok(out)
}

/// Separable adjoint: synthesize along `(x₂, ξ₂)` per `(x₁, ξ₁)` pair, then
/// along `(x₁, ξ₁)` per `t₂` sample.
pub fn kernel_adjoint_stft(
    spectrum: &KernelSpectrum,
    w1: &SampledFunction,
    w2: &SampledFunction,
) -> Result<BivariateKernel> {
    let (g1, g2) = (spectrum.grid1, spectrum.grid2);
    if w1.grid != g1 || w2.grid != g2 {
        return Err(BbError::GridMismatch("windows do not match the spectrum grids".into()));
    }
    let (n1, n2) = (g1.n, g2.n);
    let mut partial = vec![Complex64::new(0.0, 0.0); n1 * n1 * n2];
    for ak in 0..n1 * n1 {
        let tf = TimeFrequencyArray::new(
            g2,
            g2.frequency_grid(),
            spectrum.values[ak * n2 * n2..(ak + 1) * n2 * n2].to_vec(),
        )?;
        let f = adjoint_stft(&tf, w2)?;
        partial[ak * n2..(ak + 1) * n2].copy_from_slice(&f.values);
    }
    let mut values = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for i2 in 0..n2 {
        let col: Vec<Complex64> = (0..n1 * n1).map(|ak| partial[ak * n2 + i2]).collect();
        let tf = TimeFrequencyArray::new(g1, g1.frequency_grid(), col)?;
        let f = adjoint_stft(&tf, w1)?;
        for i1 in 0..n1 {
            values[i1 * n2 + i2] = f.values[i1];
        }
    }
    BivariateKernel::new(g1, g2, values)
}

/// Round-trip operator: analyse the kernel with the separable reflected
/// windows, synthesize with `γ₁ ⊗ γ₂`, and divide by the pairing product.
/// Inverts the tensor embedding up to grid truncation.
pub fn kernel_stft_roundtrip(
    kernel: &BivariateKernel,
    psi1: &SampledFunction,
    gamma1: &SampledFunction,
    psi2: &SampledFunction,
    gamma2: &SampledFunction,
) -> Result<(BivariateKernel, KernelRoundTripReport)> {
    let check1 = psi1.reflect();
    let check2 = psi2.reflect();
    let c1 = gamma1.pairing(&check1)?;
    let c2 = gamma2.pairing(&check2)?;
    if c1.norm() <= pairing_tolerance(gamma1, &check1) {
        return Err(BbError::ZeroPairing(format!("first window pairing {c1} is numerically zero")));
    }
    if c2.norm() <= pairing_tolerance(gamma2, &check2) {
        return Err(BbError::ZeroPairing(format!("second window pairing {c2} is numerically zero")));
    }
    let spectrum = kernel_stft(kernel, &check1, &check2)?;
    let mut rec = kernel_adjoint_stft(&spectrum, gamma1, gamma2)?;
    let scale = (c1 * c2).inv();
    for v in &mut rec.values {
        *v *= scale;
    }
    let sup_error = rec.sup_error(kernel)?;
    let tags = [psi1, gamma1, psi2, gamma2]
        .iter()
        .map(|f| f.tag.clone().unwrap_or_else(|| "untagged".into()))
        .collect();
    let report = KernelRoundTripReport {
        input_rank: kernel.rank(),
        sup_error,
        grid_sizes: (kernel.grid1.n, kernel.grid2.n),
        window_tags: tags,
        pairing1: c1,
        pairing2: c2,
    };
    Ok((rec, report))
}

/// `(Lf)(x₁) = h₂ Σ_{x₂} K(x₁, x₂) f(x₂)`.
pub fn kernel_apply(kernel: &BivariateKernel, f: &SampledFunction) -> Result<SampledFunction> {
    if f.grid != kernel.grid2 {
        return Err(BbError::GridMismatch("argument does not live on the second axis grid".into()));
    }
    let (n1, n2) = (kernel.grid1.n, kernel.grid2.n);
    let h = kernel.grid2.h;
    let values: Vec<Complex64> = (0..n1)
        .map(|i1| {
            let row = &kernel.values[i1 * n2..(i1 + 1) * n2];
            row.iter().zip(&f.values).map(|(k, v)| k * v).sum::<Complex64>() * h
        })
        .collect();
    SampledFunction::new(kernel.grid1, values)
}

/// Report for [`separable_approximation`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparableReport {
    pub rank: usize,
    pub residual_frobenius: f64,
    pub residual_bb_seminorm: f64,
    pub method: String,
}

/// Best rank-`r` approximation in the Frobenius sense by singular-value
/// truncation, re-wrapped through the tensor embedding so the factor
/// metadata is exact. The residual is also measured in the weighted
/// sup + Fourier-sup seminorm under the caller's weights.
pub fn separable_approximation(
    kernel: &BivariateKernel,
    rank: usize,
    v1: &WeightFunction,
    w1: &WeightFunction,
    v2: &WeightFunction,
    w2: &WeightFunction,
) -> Result<(BivariateKernel, SeparableReport)> {
    let (n1, n2) = (kernel.grid1.n, kernel.grid2.n);
    if rank == 0 || rank > n1.min(n2) {
        return Err(BbError::Config(format!(
            "rank {rank} outside 1..={} for a {n1}×{n2} kernel",
            n1.min(n2)
        )));
    }
    let m = DMatrix::from_fn(n1, n2, |i, j| kernel.values[i * n2 + j]);
    // singular triples through the hermitian Gram matrix M^H M: its
    // eigenvectors are the right singular vectors v_k, M v_k = σ_k u_k, and
    // Σ_k (M v_k) v_k^H truncated at rank r is the Frobenius-best rank-r
    // approximation
    let gram = m.adjoint() * &m;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n2).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut phis = Vec::with_capacity(rank);
    let mut psis = Vec::with_capacity(rank);
    for &k in order.iter().take(rank) {
        let v_k = eig.eigenvectors.column(k);
        let mv = &m * v_k;
        let phi: Vec<Complex64> = (0..n1).map(|i| mv[i]).collect();
        let psi: Vec<Complex64> = (0..n2).map(|j| v_k[j].conj()).collect();
        phis.push(SampledFunction::new(kernel.grid1, phi)?);
        psis.push(SampledFunction::new(kernel.grid2, psi)?);
    }
    let approx = tensor_embed(&phis, &psis)?;
    let residual_frobenius = approx.frobenius_error(kernel)?;
    let mut diff = kernel.clone();
    for (d, a) in diff.values.iter_mut().zip(&approx.values) {
        *d -= a;
    }
    let time_sup = product_weighted_sup(&diff.values, &diff.grid1, &diff.grid2, w1, w2)?;
    let residual_bb = if diff.grid1 == diff.grid2 {
        let hat = fourier_transform(&diff.as_sampled()?);
        let freq_sup = product_weighted_sup(
            &hat.values,
            &diff.grid1.frequency_grid(),
            &diff.grid2.frequency_grid(),
            v1,
            v2,
        )?;
        time_sup + freq_sup
    } else {
        time_sup
    };
    let report = SeparableReport {
        rank,
        residual_frobenius,
        residual_bb_seminorm: residual_bb,
        method: "singular-value truncation".into(),
    };
    Ok((approx, report))
}
