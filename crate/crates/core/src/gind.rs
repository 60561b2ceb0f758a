//! Generalized induced norms `‖A‖_{1,2} = max{‖Ax‖₂ : ‖x‖₁ = 1}` and the
//! four-way comparison of operator norms built from one pair of vector norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{check_dim, hermitian_top_eig, mat_apply, Matrix, RandomStream, Vector};
use crate::sphere_opt::{
    maximize_on_sphere_with, ComputationResult, Objective, OptBudget, SearchHints, VectorDomain,
};
use crate::vector_norms::VectorNormSpec;

/// Domain norm `norm1` and codomain norm `norm2` of a g-ind norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GIndPair {
    pub norm1: Box<VectorNormSpec>,
    pub norm2: Box<VectorNormSpec>,
}

impl GIndPair {
    pub fn new(norm1: VectorNormSpec, norm2: VectorNormSpec) -> Self {
        GIndPair {
            norm1: Box::new(norm1),
            norm2: Box::new(norm2),
        }
    }

    /// The pair with domain and codomain exchanged.
    pub fn swapped(&self) -> Self {
        GIndPair {
            norm1: self.norm2.clone(),
            norm2: self.norm1.clone(),
        }
    }
}

/// `x ↦ ‖Ax‖` for a fixed matrix and codomain norm.
pub struct ImageNorm<'a> {
    pub matrix: &'a Matrix,
    pub codomain: &'a VectorNormSpec,
}

impl Objective<Vector> for ImageNorm<'_> {
    fn eval(&self, x: &Vector) -> Result<f64> {
        self.codomain.eval(&mat_apply(self.matrix, x)?)
    }

    fn is_convex(&self) -> bool {
        !self.codomain.is_lower_bound()
    }

    fn l2_linear(&self) -> Option<(f64, Matrix)> {
        use crate::sphere_opt::VectorDomain as _;
        self.codomain
            .l2_scale()
            .map(|gamma| (gamma, self.matrix.clone()))
    }
}

/// Seeds derived from the matrix: for each row, the unimodular vector whose
/// phases align that row, plus the top right singular vector.
pub fn matrix_seeds(a: &Matrix) -> Vec<Vector> {
    let mut seeds: Vec<Vector> = a
        .rows()
        .map(|row| {
            Vector::new(
                row.iter()
                    .map(|z| {
                        let r = z.norm();
                        if r > 0.0 {
                            z.conj() / r
                        } else {
                            Complex64::new(1.0, 0.0)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    if let Ok(gram) = a.conj_transpose().matmul(a) {
        if let Ok(eig) = hermitian_top_eig(&gram, 1e-10, 10_000, &mut RandomStream::new(0)) {
            seeds.push(eig.eigenvector);
        }
    }
    seeds
}

/// `‖A‖_{norm1, norm2}` with a witness `x` on the unit sphere of `norm1`.
pub fn gind_eval(
    pair: &GIndPair,
    a: &Matrix,
    budget: &OptBudget,
) -> Result<ComputationResult<Vector>> {
    gind_eval_with(pair.norm1.as_ref(), &pair.norm2, a, budget, None)
}

/// g-ind value for an arbitrary domain, with an optional proven ceiling.
pub fn gind_eval_with(
    domain: &dyn VectorDomain,
    codomain: &VectorNormSpec,
    a: &Matrix,
    budget: &OptBudget,
    ceiling: Option<f64>,
) -> Result<ComputationResult<Vector>> {
    let n = a.dim();
    codomain.check_dim(n)?;
    if a.is_zero() {
        let objective = ImageNorm {
            matrix: a,
            codomain,
        };
        let x = Vector::basis(n, 0);
        let d = domain.norm(&x)?;
        let witness = x.scale_real(1.0 / d);
        return Ok(ComputationResult {
            value: objective.eval(&witness)?,
            witness,
            exactness: crate::sphere_opt::Exactness::ExactClosedForm,
            evaluations: 1,
        });
    }
    let hints = SearchHints {
        seeds: matrix_seeds(a),
        ceiling,
    };
    maximize_on_sphere_with(
        &ImageNorm {
            matrix: a,
            codomain,
        },
        domain,
        n,
        budget,
        &hints,
    )
}

/// The four operator norms obtainable from one pair, named
/// `v{domain}{codomain}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub v21: f64,
    pub v11: f64,
    pub v22: f64,
    pub v12: f64,
    pub chain_holds: bool,
    /// Smallest gap `larger − smaller` over the four required inequalities;
    /// negative when one fails.
    pub slack: f64,
}

pub const CHAIN_SLACK: f64 = 1e-9;

/// Compute `v21, v11, v22, v12` and check
/// `v21 ≤ v11 ≤ v12` and `v21 ≤ v22 ≤ v12`.
pub fn chain_compare(pair: &GIndPair, a: &Matrix, budget: &OptBudget) -> Result<ChainReport> {
    if let Some(d) = pair.norm1.fixed_dim() {
        check_dim(d, a.dim())?;
    }
    let (n1, n2) = (pair.norm1.as_ref(), pair.norm2.as_ref());
    let v21 = gind_eval_with(n2, n1, a, budget, None)?.value;
    let v11 = gind_eval_with(n1, n1, a, budget, None)?.value;
    let v22 = gind_eval_with(n2, n2, a, budget, None)?.value;
    let v12 = gind_eval_with(n1, n2, a, budget, None)?.value;
    let links = [(v21, v11), (v11, v12), (v21, v22), (v22, v12)];
    let slack = links
        .iter()
        .map(|(lo, hi)| hi - lo)
        .fold(f64::INFINITY, f64::min);
    let chain_holds = links
        .iter()
        .all(|(lo, hi)| *lo <= hi + CHAIN_SLACK * hi.abs().max(1.0));
    Ok(ChainReport {
        v21,
        v11,
        v22,
        v12,
        chain_holds,
        slack,
    })
}
