//! Machine-readable reports emitted by the condition checkers and the
//! bound verifiers. Everything here serializes to JSON.

use serde::{Deserialize, Serialize};

/// Quantifier variant: `Beurling` reads "for all λ", `Roumieu` "for some λ".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Beurling,
    Roumieu,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Beurling => write!(f, "beurling"),
            Variant::Roumieu => write!(f, "roumieu"),
        }
    }
}

/// Three-valued verdict of a numerical condition checker.
///
/// The conditions quantify over all of ℝ^d, so a grid search can refute but
/// never prove; `VerifiedAnalytic` is reserved for families with a known
/// closed-form argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedAnalytic,
    NoCounterexampleOnGrid,
    CounterexampleFound,
}

impl Verdict {
    /// Whether the verdict counts as "the condition holds" for downstream
    /// consumers (tensor delegation, exit codes).
    pub fn holds(self) -> bool {
        !matches!(self, Verdict::CounterexampleFound)
    }
}

/// Witness constants found by a search, e.g. `(L, C)` for condition (α) or
/// `(μ, ν, C)` for a moderation condition.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    /// Auxiliary values (integral estimates, fitted tail rates, ...).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<(String, f64)>,
}

/// Report of a single structural-condition check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Condition identifier: "alpha", "gamma", "wM", "wSQ", "N", "S", ...
    pub condition: String,
    pub variant: Variant,
    pub verdict: Verdict,
    /// Per-lattice-point witnesses when the condition holds on the grid.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<Witness>,
    /// Violating point(s) when a counterexample was found.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub counterexamples: Vec<Vec<f64>>,
    /// Human-readable description of the search domain.
    pub search: String,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Report of a continuity-bound verification (`lhs ≤ rhs·(1+tol)`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Constants entering the right-hand side, by name.
    pub constants: Vec<(String, f64)>,
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, constants: Vec<(String, f64)>, tol: f64) -> Self {
        BoundReport {
            name: name.to_string(),
            lhs,
            rhs,
            constants,
            tolerance: tol,
            pass: lhs <= rhs * (1.0 + tol),
        }
    }

    /// Relative slack `1 - lhs/rhs`; positive when the bound is strict.
    pub fn slack(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            1.0 - self.lhs / self.rhs
        }
    }
}
