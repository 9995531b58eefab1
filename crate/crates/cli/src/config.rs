//! JSON run configurations, one file per invocation.

use bbkit_core::funcgrid::{Grid, LibraryFunction};
use bbkit_core::weights::{WeightExpr, WeightSystem};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub omega: WeightExpr,
    #[serde(default = "one")]
    pub dim: usize,
}

fn one() -> usize {
    1
}

impl SystemSpec {
    pub fn build(&self) -> Result<WeightSystem, CliError> {
        WeightSystem::exponential(self.omega.clone(), self.dim).map_err(CliError::config)
    }
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec { omega: WeightExpr::power(1.0, 1.0), dim: 1 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub h: f64,
}

impl GridSpec {
    pub fn build(&self, dim: usize) -> Result<Grid, CliError> {
        Grid::new(dim, self.n, self.h).map_err(CliError::config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSpec {
    Beurling,
    Roumieu,
    Both,
}

impl Default for VariantSpec {
    fn default() -> Self {
        VariantSpec::Both
    }
}

impl VariantSpec {
    pub fn expand(self) -> Vec<bbkit_core::report::Variant> {
        use bbkit_core::report::Variant;
        match self {
            VariantSpec::Beurling => vec![Variant::Beurling],
            VariantSpec::Roumieu => vec![Variant::Roumieu],
            VariantSpec::Both => vec![Variant::Beurling, Variant::Roumieu],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsCheckConfig {
    pub system: SystemSpec,
    #[serde(default)]
    pub variant: VariantSpec,
    /// Subset of {"alpha","gamma","M","SQ","N","S"}; all when omitted.
    #[serde(default)]
    pub conditions: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StftReconstructConfig {
    #[serde(default = "default_stft_grid")]
    pub grid: GridSpec,
    #[serde(default = "gaussian")]
    pub window: LibraryFunction,
    /// Synthesis window; the analysis window is reused when omitted.
    #[serde(default)]
    pub synthesis: Option<LibraryFunction>,
    #[serde(default = "default_functions")]
    pub functions: Vec<LibraryFunction>,
    #[serde(default = "tol_1e5")]
    pub tolerance: f64,
}

fn default_stft_grid() -> GridSpec {
    GridSpec { n: 256, h: 1.0 / 16.0 }
}

fn gaussian() -> LibraryFunction {
    LibraryFunction::Gaussian
}

fn default_functions() -> Vec<LibraryFunction> {
    vec![
        LibraryFunction::Gaussian,
        LibraryFunction::Hermite1,
        LibraryFunction::ModulatedGaussian { shift: vec![1.0], modulation: vec![2.0] },
    ]
}

fn tol_1e5() -> f64 {
    1e-5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorPair {
    pub left: LibraryFunction,
    pub right: LibraryFunction,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelRoundtripConfig {
    #[serde(default = "default_kernel_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_factors")]
    pub factors: Vec<FactorPair>,
    #[serde(default = "gaussian")]
    pub psi1: LibraryFunction,
    #[serde(default = "gaussian")]
    pub gamma1: LibraryFunction,
    #[serde(default = "gaussian")]
    pub psi2: LibraryFunction,
    #[serde(default = "gaussian")]
    pub gamma2: LibraryFunction,
    #[serde(default = "tol_1e3")]
    pub tolerance: f64,
}

fn default_kernel_grid() -> GridSpec {
    GridSpec { n: 32, h: 0.25 }
}

fn default_factors() -> Vec<FactorPair> {
    vec![FactorPair { left: LibraryFunction::Gaussian, right: LibraryFunction::Gaussian }]
}

fn tol_1e3() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KotheReportConfig {
    pub system: SystemSpec,
    #[serde(default)]
    pub variant: VariantSpec,
    #[serde(default = "five")]
    pub window_radius: i64,
}

fn five() -> i64 {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsVerifyConfig {
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default = "default_stft_grid")]
    pub grid: GridSpec,
    #[serde(default = "gaussian")]
    pub phi: LibraryFunction,
    #[serde(default = "gaussian")]
    pub psi: LibraryFunction,
    #[serde(default = "default_analysis_lambdas")]
    pub analysis_lambdas: [f64; 4],
    #[serde(default = "default_synthesis_lambdas")]
    pub synthesis_lambdas: [f64; 4],
    #[serde(default = "one_f")]
    pub c0: f64,
    #[serde(default = "one_f")]
    pub c1: f64,
    /// Translated-gaussian family size for the summability bound.
    #[serde(default = "five_usize")]
    pub family_size: usize,
    #[serde(default = "one_f")]
    pub family_lambda: f64,
    #[serde(default = "two_f")]
    pub family_mu: f64,
}

fn default_analysis_lambdas() -> [f64; 4] {
    [1.0, 0.5, 0.5, 0.5]
}

fn default_synthesis_lambdas() -> [f64; 4] {
    [1.0 / 3.0, 1.0, 1.0, 1.0]
}

fn one_f() -> f64 {
    1.0
}

fn two_f() -> f64 {
    2.0
}

fn five_usize() -> usize {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phi0Config {
    #[serde(default = "default_phi0_grid")]
    pub grid: GridSpec,
    #[serde(default = "gaussian")]
    pub phi: LibraryFunction,
    #[serde(default = "five")]
    pub window_radius: i64,
    #[serde(default = "tol_1e6")]
    pub delta_tolerance: f64,
    #[serde(default = "three")]
    pub identity_radius: i64,
    #[serde(default = "tol_1e5")]
    pub identity_tolerance: f64,
}

fn default_phi0_grid() -> GridSpec {
    GridSpec { n: 4096, h: 1.0 / 128.0 }
}

fn tol_1e6() -> f64 {
    1e-6
}

fn three() -> i64 {
    3
}
