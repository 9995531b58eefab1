//! Monotone weight function systems `W = { w^λ : λ > 0 }`.

use serde::{Deserialize, Serialize};

use crate::error::{BbError, Result};
use crate::weights::expr::{WeightExpr, WeightFunction};

/// A weight function system. The base family is exponential,
/// `w^λ = e^{ω/λ}`, which is monotone decreasing in λ by construction;
/// tensor products and reflections preserve monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSystem {
    Exponential { omega: WeightExpr, dim: usize },
    Tensor { left: Box<WeightSystem>, right: Box<WeightSystem> },
    Reflected { inner: Box<WeightSystem> },
}

impl WeightSystem {
    pub fn exponential(omega: WeightExpr, dim: usize) -> Result<Self> {
        omega.validate()?;
        Ok(WeightSystem::Exponential { omega, dim })
    }

    pub fn tensor(left: WeightSystem, right: WeightSystem) -> Self {
        WeightSystem::Tensor { left: Box::new(left), right: Box::new(right) }
    }

    pub fn reflected(inner: WeightSystem) -> Self {
        WeightSystem::Reflected { inner: Box::new(inner) }
    }

    pub fn dim(&self) -> usize {
        match self {
            WeightSystem::Exponential { dim, .. } => *dim,
            WeightSystem::Tensor { left, right } => left.dim() + right.dim(),
            WeightSystem::Reflected { inner } => inner.dim(),
        }
    }

    /// `log w^λ(x)`.
    pub fn log_eval(&self, lambda: f64, x: &[f64]) -> f64 {
        match self {
            WeightSystem::Exponential { omega, .. } => omega.eval(x) / lambda,
            WeightSystem::Tensor { left, right } => {
                let (x1, x2) = x.split_at(left.dim());
                left.log_eval(lambda, x1) + right.log_eval(lambda, x2)
            }
            WeightSystem::Reflected { inner } => {
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                inner.log_eval(lambda, &neg)
            }
        }
    }

    pub fn eval(&self, lambda: f64, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(BbError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if !(lambda > 0.0) {
            return Err(BbError::InvalidWeight(format!("lambda must be positive, got {lambda}")));
        }
        Ok(self.log_eval(lambda, x).exp())
    }

    /// `log (w^λ / w^μ)(x)`. Factored as `ω(x)·(1/λ - 1/μ)` on exponential
    /// systems so that an overflowing generator still yields a signed
    /// infinity instead of `inf - inf = NaN`.
    pub fn log_ratio(&self, lambda: f64, mu: f64, x: &[f64]) -> f64 {
        match self {
            WeightSystem::Exponential { omega, .. } => {
                let c = 1.0 / lambda - 1.0 / mu;
                if c == 0.0 {
                    0.0
                } else {
                    omega.eval(x) * c
                }
            }
            WeightSystem::Tensor { left, right } => {
                let (x1, x2) = x.split_at(left.dim());
                left.log_ratio(lambda, mu, x1) + right.log_ratio(lambda, mu, x2)
            }
            WeightSystem::Reflected { inner } => {
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                inner.log_ratio(lambda, mu, &neg)
            }
        }
    }

    /// The concrete weight at index λ, for the plain exponential family.
    pub fn weight_fn(&self, lambda: f64) -> Result<WeightFunction> {
        match self {
            WeightSystem::Exponential { omega, dim } => {
                WeightFunction::exponential(omega.clone(), *dim, lambda)
            }
            _ => Err(BbError::InvalidWeight(
                "weight_fn is only available for plain exponential systems".into(),
            )),
        }
    }

    /// Generator of the exponential family, when the system is one
    /// (possibly under reflection, which does not change radial generators).
    pub fn generator(&self) -> Option<&WeightExpr> {
        match self {
            WeightSystem::Exponential { omega, .. } => Some(omega),
            WeightSystem::Reflected { inner } => {
                inner.generator().filter(|omega| omega.is_radial())
            }
            WeightSystem::Tensor { .. } => None,
        }
    }

    pub fn tensor_children(&self) -> Option<(&WeightSystem, &WeightSystem)> {
        match self {
            WeightSystem::Tensor { left, right } => Some((left, right)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_system() -> WeightSystem {
        WeightSystem::exponential(WeightExpr::power(1.0, 1.0), 1).unwrap()
    }

    #[test]
    fn exponential_values() {
        let w = abs_system();
        // ω = 0 → every w^λ ≡ 1
        let c = WeightSystem::exponential(WeightExpr::Zero, 1).unwrap();
        for lam in [0.25, 1.0, 4.0] {
            assert_eq!(c.eval(lam, &[3.7]).unwrap(), 1.0);
        }
        // ω = |x|, λ = 1, x = 1 → e
        assert!((w.eval(1.0, &[1.0]).unwrap() - std::f64::consts::E).abs() < 1e-14);
        // monotonicity sample: λ=2 vs μ=1 at x=1
        assert!(w.eval(2.0, &[1.0]).unwrap() <= w.eval(1.0, &[1.0]).unwrap());
    }

    #[test]
    fn monotone_in_lambda_on_lattice() {
        let w = abs_system();
        let lattice: Vec<f64> = (-6..=6).map(|k| 2f64.powi(k)).collect();
        for x in [-5.0, -0.5, 0.0, 0.1, 2.0, 30.0] {
            for pair in lattice.windows(2) {
                let (mu, lam) = (pair[0], pair[1]);
                assert!(w.eval(lam, &[x]).unwrap() <= w.eval(mu, &[x]).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn tensor_is_product_of_factors() {
        let t = WeightSystem::tensor(abs_system(), abs_system());
        assert_eq!(t.dim(), 2);
        let v = t.eval(1.0, &[1.0, 1.0]).unwrap();
        assert!((v - std::f64::consts::E.powi(2)).abs() < 1e-12);
        // one constant factor: tensor equals the other factor extended
        let c = WeightSystem::exponential(WeightExpr::Zero, 1).unwrap();
        let t2 = WeightSystem::tensor(abs_system(), c);
        for (x1, x2) in [(0.5, -2.0), (1.0, 7.0)] {
            let a = t2.eval(2.0, &[x1, x2]).unwrap();
            let b = abs_system().eval(2.0, &[x1]).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn double_reflection_is_identity() {
        let asym = WeightSystem::exponential(WeightExpr::PosPart { a: 1.0 }, 1).unwrap();
        let twice = WeightSystem::reflected(WeightSystem::reflected(asym.clone()));
        for i in 0..100 {
            let x = -5.0 + 0.1 * i as f64;
            assert_eq!(asym.eval(1.0, &[x]).unwrap(), twice.eval(1.0, &[x]).unwrap());
        }
        // reflected asymmetric weight: w(x) = e^{max(x,0)} reflected at x=1 is e^0
        let refl = WeightSystem::reflected(asym.clone());
        assert_eq!(refl.eval(1.0, &[1.0]).unwrap(), 1.0);
        // radial generator: reflection is pointwise the same
        let radial = abs_system();
        let refl = WeightSystem::reflected(radial.clone());
        for x in [-3.0, -1.0, 0.0, 2.5] {
            assert_eq!(radial.eval(1.0, &[x]).unwrap(), refl.eval(1.0, &[x]).unwrap());
        }
    }
}
