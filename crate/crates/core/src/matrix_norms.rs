//! Norms on M_n: the entrywise, column-sum, row-sum and spectral norms,
//! their maxima and scalings, and generalized induced norms.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gind::{gind_eval, GIndPair};
use crate::linalg::{
    hermitian_top_eig, Matrix, RandomStream, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL,
};
use crate::sphere_opt::{MatrixBall, MatrixDomain, OptBudget};
use crate::vector_norms::{dominance_check, VectorNormSpec};

/// Declarative description of a norm on M_n.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixNormSpec {
    /// `Σ |a_ij|`
    EntrywiseSum,
    /// `max |a_ij|`
    EntrywiseMax,
    /// Largest column ℓ₁ sum; induced by ℓ₁.
    MaxColSum,
    /// Largest row ℓ₁ sum; induced by ℓ_∞.
    MaxRowSum,
    /// `√λ_max(A*A)`; induced by ℓ₂.
    Spectral,
    MaxOf(Vec<MatrixNormSpec>),
    Scaled {
        gamma: f64,
        inner: Box<MatrixNormSpec>,
    },
    GInd(GIndPair),
}

/// Three-valued answer to "is this a submultiplicative norm?".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraClass {
    KnownYes,
    KnownNo,
    Unknown,
}

impl MatrixNormSpec {
    /// `max{‖·‖_C, ‖·‖_R}`
    pub fn max_col_row() -> Self {
        MatrixNormSpec::MaxOf(vec![MatrixNormSpec::MaxColSum, MatrixNormSpec::MaxRowSum])
    }

    pub fn scaled(gamma: f64, inner: MatrixNormSpec) -> Result<Self> {
        let spec = MatrixNormSpec::Scaled {
            gamma,
            inner: Box::new(inner),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn max_of(members: Vec<MatrixNormSpec>) -> Result<Self> {
        let spec = MatrixNormSpec::MaxOf(members);
        spec.validate()?;
        Ok(spec)
    }

    pub fn gind(norm1: VectorNormSpec, norm2: VectorNormSpec) -> Self {
        MatrixNormSpec::GInd(GIndPair::new(norm1, norm2))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MatrixNormSpec::MaxOf(members) => {
                if members.is_empty() {
                    return Err(LabError::InvalidNorm("empty maxof".into()));
                }
                members.iter().try_for_each(|m| m.validate())
            }
            MatrixNormSpec::Scaled { gamma, inner } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(LabError::InvalidNorm(format!(
                        "gamma must be positive (gamma = {gamma})"
                    )));
                }
                inner.validate()
            }
            MatrixNormSpec::GInd(pair) => {
                pair.norm1.validate()?;
                pair.norm2.validate()
            }
            _ => Ok(()),
        }
    }

    /// Short human-readable name.
    pub fn label(&self) -> String {
        match self {
            MatrixNormSpec::EntrywiseSum => "sigma".into(),
            MatrixNormSpec::EntrywiseMax => "entrywise-max".into(),
            MatrixNormSpec::MaxColSum => "maxcolsum".into(),
            MatrixNormSpec::MaxRowSum => "maxrowsum".into(),
            MatrixNormSpec::Spectral => "spectral".into(),
            MatrixNormSpec::MaxOf(m) => format!(
                "max{{{}}}",
                m.iter().map(|s| s.label()).collect::<Vec<_>>().join(", ")
            ),
            MatrixNormSpec::Scaled { gamma, inner } => format!("{gamma}*{}", inner.label()),
            MatrixNormSpec::GInd(_) => "gind".into(),
        }
    }

    /// Evaluate `N(A)`. Exact except for g-ind members, which are lower
    /// bounds from the sphere search under `budget`.
    pub fn eval(&self, a: &Matrix, budget: &OptBudget) -> Result<f64> {
        match self {
            MatrixNormSpec::EntrywiseSum => Ok(a.entries().iter().map(|z| z.norm()).sum()),
            MatrixNormSpec::EntrywiseMax => Ok(a.max_abs()),
            MatrixNormSpec::MaxColSum => Ok((0..a.dim())
                .map(|j| (0..a.dim()).map(|i| a.get(i, j).norm()).sum::<f64>())
                .fold(0.0, f64::max)),
            MatrixNormSpec::MaxRowSum => Ok(a
                .rows()
                .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max)),
            MatrixNormSpec::Spectral => spectral_norm(a),
            MatrixNormSpec::MaxOf(members) => {
                if members.is_empty() {
                    return Err(LabError::InvalidNorm("empty maxof".into()));
                }
                members
                    .iter()
                    .try_fold(0.0f64, |acc, m| Ok(acc.max(m.eval(a, budget)?)))
            }
            MatrixNormSpec::Scaled { gamma, inner } => Ok(gamma * inner.eval(a, budget)?),
            MatrixNormSpec::GInd(pair) => Ok(gind_eval(pair, a, budget)?.value),
        }
    }

    /// Whether the norm is known to be submultiplicative.
    pub fn algebra_class(&self) -> AlgebraClass {
        use AlgebraClass::*;
        match self {
            MatrixNormSpec::EntrywiseSum
            | MatrixNormSpec::MaxColSum
            | MatrixNormSpec::MaxRowSum
            | MatrixNormSpec::Spectral => KnownYes,
            MatrixNormSpec::EntrywiseMax => KnownNo,
            // max(N₁, N₂)(AB) ≤ max(N₁(A)N₁(B), N₂(A)N₂(B)) ≤ max(N₁, N₂)(A)·max(N₁, N₂)(B)
            MatrixNormSpec::MaxOf(members) => {
                if !members.is_empty() && members.iter().all(|m| m.algebra_class() == KnownYes) {
                    KnownYes
                } else {
                    Unknown
                }
            }
            MatrixNormSpec::Scaled { gamma, inner } => {
                if *gamma >= 1.0 && inner.algebra_class() == KnownYes {
                    KnownYes
                } else {
                    Unknown
                }
            }
            MatrixNormSpec::GInd(pair) => gind_algebra_class(pair),
        }
    }

    fn ball_kind(&self) -> MatrixBall {
        match self {
            MatrixNormSpec::EntrywiseSum => MatrixBall::EntrywiseSum,
            MatrixNormSpec::EntrywiseMax => MatrixBall::EntrywiseMax,
            MatrixNormSpec::Scaled { inner, .. } => inner.ball_kind(),
            MatrixNormSpec::MaxOf(m) if m.len() == 1 => m[0].ball_kind(),
            _ => MatrixBall::Generic,
        }
    }
}

/// Dimension used for the sampled dominance test behind g-ind classification.
const CLASSIFY_DIM: usize = 2;
const CLASSIFY_SAMPLES: usize = 256;
const CLASSIFY_SEED: u64 = 0x5eed_a1e6;

/// A g-ind norm is submultiplicative iff its domain norm is dominated by its
/// codomain norm. The dominance verdict comes from sampling; a counterexample
/// only counts when the codomain norm is evaluated exactly.
fn gind_algebra_class(pair: &GIndPair) -> AlgebraClass {
    let n = pair
        .norm1
        .fixed_dim()
        .or(pair.norm2.fixed_dim())
        .unwrap_or(CLASSIFY_DIM);
    let mut rng = RandomStream::new(CLASSIFY_SEED);
    match dominance_check(&pair.norm1, &pair.norm2, n, CLASSIFY_SAMPLES, &mut rng) {
        Ok(r) if r.dominated => AlgebraClass::KnownYes,
        Ok(_) if !pair.norm2.is_lower_bound() => AlgebraClass::KnownNo,
        _ => AlgebraClass::Unknown,
    }
}

/// `√λ_max(A*A)` by power iteration on the Gram matrix.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    let gram = a.conj_transpose().matmul(a)?;
    let eig = hermitian_top_eig(
        &gram,
        DEFAULT_EIG_TOL,
        DEFAULT_EIG_MAX_ITER,
        &mut RandomStream::new(0),
    )?;
    Ok(eig.eigenvalue.sqrt())
}

/// A matrix norm paired with the budget used for any optimization inside it.
pub struct MatrixNormDomain<'a> {
    pub spec: &'a MatrixNormSpec,
    pub budget: &'a OptBudget,
}

impl MatrixDomain for MatrixNormDomain<'_> {
    fn norm(&self, a: &Matrix) -> Result<f64> {
        self.spec.eval(a, self.budget)
    }

    fn ball(&self) -> MatrixBall {
        self.spec.ball_kind()
    }
}
