//! Weight functions, weight function systems, structural-condition checkers,
//! and Nachbin-family constructions.

mod conditions;
mod expr;
mod nachbin;
mod search;
mod system;

pub use conditions::{
    check_alpha, check_condition_m, check_condition_n, check_condition_s, check_condition_sq,
    check_gamma,
};
pub use expr::{associated_function, WeightExpr, WeightFunction, WeightMode};
pub use nachbin::{
    nachbin_integrable_majorant, nachbin_membership, nachbin_moderate, nachbin_square_check,
    MajorantReport, MembershipReport, NachbinWeight,
};
pub use search::{
    bounded_tail, default_lambda_lattice, integrable_tail, probe_directions, riemann_box,
    tail_probe, QuadratureSpec, SearchSpec, TailProbe,
};
pub use system::WeightSystem;

use crate::error::Result;

/// Build the exponential system `{ e^{ω/λ} : λ > 0 }` over a non-negative
/// generator `ω`.
pub fn make_exponential_system(omega: WeightExpr, dim: usize) -> Result<WeightSystem> {
    WeightSystem::exponential(omega, dim)
}

/// Tensor product system `{ w^λ ⊗ v^λ }` on the concatenated coordinates.
pub fn tensor_system(w1: WeightSystem, w2: WeightSystem) -> WeightSystem {
    WeightSystem::tensor(w1, w2)
}

/// Pointwise reflection `w̌(x) = w(-x)` of every weight in the system.
pub fn reflect_system(w: WeightSystem) -> WeightSystem {
    WeightSystem::reflected(w)
}
