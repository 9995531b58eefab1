//! Closed parametric family of generator expressions `ω` and the weight
//! functions built from them.

use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};

/// Non-negative continuous generator `ω : ℝ^d → [0, ∞)` from a closed family.
///
/// All variants except `PosPart` are radial, `ω(x) = g(|x|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightExpr {
    Zero,
    /// `a·|x|^s`
    Power { a: f64, s: f64 },
    /// `a·log(1+|x|)^b`
    LogPower { a: f64, b: f64 },
    /// `a·e^{|x|}` — grows too fast for condition (α); kept in the library as
    /// the standard counterexample family.
    ExpAbs { a: f64 },
    /// Associated function of a weight sequence `M = (M_0, ..., M_P)`:
    /// `ω_M(x) = max_p log(|x|^p M_0 / M_p)`, with `ω_M(0) = 1`.
    SequenceAssoc { m: Vec<f64> },
    /// `a·max(x_1, 0)` — non-radial test family.
    PosPart { a: f64 },
    Sum { left: Box<WeightExpr>, right: Box<WeightExpr> },
    Max { left: Box<WeightExpr>, right: Box<WeightExpr> },
}

impl WeightExpr {
    pub fn power(a: f64, s: f64) -> Self {
        WeightExpr::Power { a, s }
    }

    pub fn log_power(a: f64, b: f64) -> Self {
        WeightExpr::LogPower { a, b }
    }

    pub fn sequence(m: Vec<f64>) -> Result<Self> {
        if m.is_empty() {
            return Err(BbError::InvalidWeight("empty weight sequence".into()));
        }
        if m.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(BbError::InvalidWeight("weight sequence entries must be positive".into()));
        }
        Ok(WeightExpr::SequenceAssoc { m })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightExpr::Zero => Ok(()),
            WeightExpr::Power { a, s } => {
                if *a > 0.0 && *s > 0.0 {
                    Ok(())
                } else {
                    Err(BbError::InvalidWeight(format!("power weight needs a,s > 0 (a={a}, s={s})")))
                }
            }
            WeightExpr::LogPower { a, b } => {
                if *a > 0.0 && *b > 0.0 {
                    Ok(())
                } else {
                    Err(BbError::InvalidWeight(format!("log-power weight needs a,b > 0 (a={a}, b={b})")))
                }
            }
            WeightExpr::ExpAbs { a } | WeightExpr::PosPart { a } => {
                if *a > 0.0 {
                    Ok(())
                } else {
                    Err(BbError::InvalidWeight(format!("scale must be positive, got {a}")))
                }
            }
            WeightExpr::SequenceAssoc { m } => {
                if m.is_empty() || m.iter().any(|&v| !(v > 0.0)) {
                    Err(BbError::InvalidWeight("weight sequence must be non-empty and positive".into()))
                } else {
                    Ok(())
                }
            }
            WeightExpr::Sum { left: l, right: r } | WeightExpr::Max { left: l, right: r } => {
                l.validate()?;
                r.validate()
            }
        }
    }

    pub fn is_radial(&self) -> bool {
        match self {
            WeightExpr::PosPart { .. } => false,
            WeightExpr::Sum { left: l, right: r } | WeightExpr::Max { left: l, right: r } => l.is_radial() && r.is_radial(),
            _ => true,
        }
    }

    /// Evaluate at a point of any dimension (radial families use `|x|`).
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            WeightExpr::PosPart { a } => a * x.first().copied().unwrap_or(0.0).max(0.0),
            WeightExpr::Sum { left: l, right: r } => l.eval(x) + r.eval(x),
            WeightExpr::Max { left: l, right: r } => l.eval(x).max(r.eval(x)),
            _ => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                self.eval_radius(r)
            }
        }
    }

    /// Radial evaluation; for non-radial variants this is the value on the
    /// positive first axis.
    pub fn eval_radius(&self, r: f64) -> f64 {
        match self {
            WeightExpr::Zero => 0.0,
            WeightExpr::Power { a, s } => a * r.powf(*s),
            WeightExpr::LogPower { a, b } => a * (1.0 + r).ln().powf(*b),
            WeightExpr::ExpAbs { a } => a * r.exp(),
            WeightExpr::SequenceAssoc { m } => associated_function_radius(m, r),
            WeightExpr::PosPart { a } => a * r.max(0.0),
            WeightExpr::Sum { left: l, right: r2 } => l.eval_radius(r) + r2.eval_radius(r),
            WeightExpr::Max { left: l, right: r2 } => l.eval_radius(r).max(r2.eval_radius(r)),
        }
    }

    /// Known closed-form witness `(L, C)` for condition (α), when one exists.
    /// `None` means "unknown, run the grid search", not "fails".
    pub fn analytic_alpha(&self) -> Option<(f64, f64)> {
        match self {
            WeightExpr::Zero => Some((1.0, 0.0)),
            // |x+y|^s ≤ (|x|+|y|)^s ≤ max(1, 2^{s-1}) (|x|^s + |y|^s)
            WeightExpr::Power { s, .. } => Some((1.0f64.max(2.0f64.powf(s - 1.0)), 0.0)),
            // 1+|x+y| ≤ (1+|x|)(1+|y|), then the power-mean bound on b-th powers
            WeightExpr::LogPower { b, .. } => Some((1.0f64.max(2.0f64.powf(b - 1.0)), 0.0)),
            WeightExpr::PosPart { .. } => Some((1.0, 0.0)),
            WeightExpr::ExpAbs { .. } | WeightExpr::SequenceAssoc { .. } => None,
            WeightExpr::Sum { left: l, right: r } | WeightExpr::Max { left: l, right: r } => {
                let (l1, c1) = l.analytic_alpha()?;
                let (l2, c2) = r.analytic_alpha()?;
                Some((l1.max(l2), c1 + c2))
            }
        }
    }
}

/// `ω_M(x) = max_{0 ≤ p ≤ P} log(|x|^p M_0 / M_p)` for `x ≠ 0`, and `1` at
/// `x = 0`.
pub fn associated_function(m: &[f64], x: &[f64]) -> Result<f64> {
    if m.is_empty() {
        return Err(BbError::InvalidWeight("empty weight sequence".into()));
    }
    if m.iter().any(|&v| !(v > 0.0)) {
        return Err(BbError::InvalidWeight("weight sequence entries must be positive".into()));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(associated_function_radius(m, r))
}

fn associated_function_radius(m: &[f64], r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let log_r = r.ln();
    let log_m0 = m[0].ln();
    let mut best = f64::NEG_INFINITY;
    for (p, mp) in m.iter().enumerate() {
        let v = p as f64 * log_r + log_m0 - mp.ln();
        if v > best {
            best = v;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// The generator itself, `ω(x)`.
    Raw,
    /// `e^{ω(x)/λ}`, always ≥ 1.
    Exponential { lambda: f64 },
}

/// A concrete evaluable weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    expr: WeightExpr,
    dim: usize,
    mode: WeightMode,
}

impl WeightFunction {
    pub fn raw(expr: WeightExpr, dim: usize) -> Self {
        WeightFunction { expr, dim, mode: WeightMode::Raw }
    }

    /// `e^{ω/λ}` weight over this expression.
    pub fn exponential(expr: WeightExpr, dim: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(BbError::InvalidWeight(format!("lambda must be positive, got {lambda}")));
        }
        expr.validate()?;
        Ok(WeightFunction { expr, dim, mode: WeightMode::Exponential { lambda } })
    }

    pub fn into_exponential(self, lambda: f64) -> Result<Self> {
        Self::exponential(self.expr, self.dim, lambda)
    }

    /// The constant weight 1.
    pub fn one(dim: usize) -> Self {
        WeightFunction { expr: WeightExpr::Zero, dim, mode: WeightMode::Exponential { lambda: 1.0 } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expr(&self) -> &WeightExpr {
        &self.expr
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(BbError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.eval_slice(x))
    }

    /// Unchecked evaluation (callers that iterate grids validate once).
    pub fn eval_slice(&self, x: &[f64]) -> f64 {
        match self.mode {
            WeightMode::Raw => self.expr.eval(x),
            WeightMode::Exponential { lambda } => (self.expr.eval(x) / lambda).exp(),
        }
    }

    /// `log w(x)`; finite arithmetic even where `w` itself overflows.
    pub fn log_eval(&self, x: &[f64]) -> f64 {
        match self.mode {
            WeightMode::Raw => self.expr.eval(x).ln(),
            WeightMode::Exponential { lambda } => self.expr.eval(x) / lambda,
        }
    }
}
