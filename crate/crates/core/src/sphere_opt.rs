//! Maximization of absolutely homogeneous objectives over norm spheres.
//!
//! Every objective `f` used here satisfies `f(αx) = |α| f(x)`, so maximizing
//! `f` over `{x : ‖x‖ = 1}` is the same as maximizing the ratio
//! `f(x) / ‖x‖` over nonzero `x`. The ascent works on that ratio with points
//! kept at unit Euclidean length, and only the reported witness is rescaled
//! onto the domain sphere.
//!
//! Two structured domains are solved exactly: an ℓ₁-type domain (weighted
//! sums of moduli) whose extreme points are phase multiples of basis vectors,
//! and an ℓ₂-type domain paired with an ℓ₂-of-linear-map objective, which is
//! a top singular value. Everything else goes through a seeded multi-start
//! random-direction hill climb and is reported as a lower bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{
    hermitian_top_eig, Matrix, RandomStream, Vector, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL,
};

/// Effort knobs for every lower-bound optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptBudget {
    pub multistarts: usize,
    pub max_iters: usize,
    pub samples: usize,
    pub step_init: f64,
    pub tol: f64,
    pub seed: u64,
}

impl OptBudget {
    /// Default budget for a top-level optimization in dimension `n`.
    pub fn for_dim(n: usize) -> Self {
        OptBudget {
            multistarts: 8 * n,
            max_iters: 400,
            samples: 64 * n,
            step_init: 0.5,
            tol: 1e-7,
            seed: 0,
        }
    }

    /// Smaller budget for optimizations nested inside other optimizations
    /// (extracted norms and their reconstructions).
    pub fn nested(n: usize) -> Self {
        OptBudget {
            multistarts: 2,
            max_iters: 120,
            samples: 4 * n,
            step_init: 0.5,
            tol: 1e-7,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(LabError::InvalidBudget(what.to_string()));
        if self.multistarts == 0 || self.max_iters == 0 || self.samples == 0 {
            return bad("multistarts, max_iters and samples must be positive");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return bad("tol must lie in (0, 1e-2)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    ExactClosedForm,
    ExactVertex,
    LowerBound,
}

impl Exactness {
    pub fn is_exact(self) -> bool {
        self != Exactness::LowerBound
    }

    /// Exactness of a quantity computed from several inputs.
    pub fn combine(self, other: Exactness) -> Exactness {
        if self.is_exact() && other.is_exact() {
            if self == other {
                self
            } else {
                Exactness::ExactClosedForm
            }
        } else {
            Exactness::LowerBound
        }
    }
}

/// An optimized value together with the point attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputationResult<P> {
    pub value: f64,
    pub witness: P,
    pub exactness: Exactness,
    pub evaluations: usize,
}

/// A continuous, absolutely homogeneous function to be maximized.
pub trait Objective<P>: Sync {
    fn eval(&self, x: &P) -> Result<f64>;

    /// Whether the objective is convex; convex objectives attain their
    /// maximum over a norm ball at an extreme point.
    fn is_convex(&self) -> bool {
        false
    }

    /// `Some((c, M))` when the objective is exactly `x ↦ c·ℓ₂(Mx)`.
    fn l2_linear(&self) -> Option<(f64, Matrix)> {
        None
    }
}

/// Objective from a closure.
pub struct FnObjective<F> {
    f: F,
    convex: bool,
}

impl<F> FnObjective<F> {
    /// The caller asserts the closure is convex.
    pub fn convex(f: F) -> Self {
        FnObjective { f, convex: true }
    }

    pub fn general(f: F) -> Self {
        FnObjective { f, convex: false }
    }
}

impl<P, F> Objective<P> for FnObjective<F>
where
    F: Fn(&P) -> Result<f64> + Sync,
{
    fn eval(&self, x: &P) -> Result<f64> {
        (self.f)(x)
    }

    fn is_convex(&self) -> bool {
        self.convex
    }
}

/// A norm on ℂⁿ used as the constraint of a vector-sphere maximization.
pub trait VectorDomain: Sync {
    fn norm(&self, x: &Vector) -> Result<f64>;

    /// `Some(w)` when the norm is `Σ w_j |x_j|`.
    fn vertex_weights(&self, _n: usize) -> Option<Vec<f64>> {
        None
    }

    /// `Some(γ)` when the norm is `γ·ℓ₂`.
    fn l2_scale(&self) -> Option<f64> {
        None
    }
}

/// Structure of a matrix-norm ball that the matrix-sphere search exploits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixBall {
    /// `Σ |a_ij|`: extreme points are phase multiples of single-entry matrices.
    EntrywiseSum,
    /// `max |a_ij|`: extreme points have unimodular entries.
    EntrywiseMax,
    Generic,
}

/// A norm on M_n used as the constraint of a matrix-sphere maximization.
pub trait MatrixDomain: Sync {
    fn norm(&self, a: &Matrix) -> Result<f64>;

    fn ball(&self) -> MatrixBall {
        MatrixBall::Generic
    }
}

/// Extra problem knowledge supplied by the caller.
#[derive(Debug, Clone)]
pub struct SearchHints<P> {
    /// Additional seed points (any nonzero scale).
    pub seeds: Vec<P>,
    /// A proven upper bound on the maximum; the search stops once reached.
    pub ceiling: Option<f64>,
}

impl<P> Default for SearchHints<P> {
    fn default() -> Self {
        SearchHints {
            seeds: Vec::new(),
            ceiling: None,
        }
    }
}

/// Points the hill climb can move through.
pub trait SearchPoint: Clone + Send + Sync {
    fn len(&self) -> usize;
    fn l2(&self) -> f64;
    fn axpy(&self, alpha: f64, other: &Self) -> Self;
    fn scale_real(&self, alpha: f64) -> Self;
    fn scale_complex(&self, alpha: Complex64) -> Self;
    fn random_like(&self, rng: &mut RandomStream) -> Self;
}

impl SearchPoint for Vector {
    fn len(&self) -> usize {
        self.dim()
    }
    fn l2(&self) -> f64 {
        Vector::l2(self)
    }
    fn axpy(&self, alpha: f64, other: &Self) -> Self {
        Vector::axpy(self, alpha, other)
    }
    fn scale_real(&self, alpha: f64) -> Self {
        Vector::scale_real(self, alpha)
    }
    fn scale_complex(&self, alpha: Complex64) -> Self {
        self.scale(alpha)
    }
    fn random_like(&self, rng: &mut RandomStream) -> Self {
        rng.complex_gaussian_vector(self.dim())
    }
}

impl SearchPoint for Matrix {
    fn len(&self) -> usize {
        self.dim() * self.dim()
    }
    fn l2(&self) -> f64 {
        self.frobenius()
    }
    fn axpy(&self, alpha: f64, other: &Self) -> Self {
        Matrix::axpy(self, alpha, other)
    }
    fn scale_real(&self, alpha: f64) -> Self {
        Matrix::scale_real(self, alpha)
    }
    fn scale_complex(&self, alpha: Complex64) -> Self {
        self.scale(alpha)
    }
    fn random_like(&self, rng: &mut RandomStream) -> Self {
        rng.complex_gaussian_matrix(self.dim())
    }
}

const HOMOGENEITY_PROBES: usize = 10;
const HOMOGENEITY_RTOL: f64 = 1e-6;
const STEP_GROW: f64 = 1.3;
const STEP_SHRINK: f64 = 0.7;
const STEP_CAP: f64 = 2.0;

// Child-stream indices under the budget seed.
const STREAM_SEEDS: u64 = 0;
const STREAM_PROBES: u64 = 1;
const STREAM_STARTS: u64 = 16;

fn unit<P: SearchPoint>(x: &P) -> Option<P> {
    let n = x.l2();
    (n > 0.0 && n.is_finite()).then(|| x.scale_real(1.0 / n))
}

fn check_homogeneous<P: SearchPoint>(
    objective: &dyn Objective<P>,
    template: &P,
    rng: &mut RandomStream,
) -> Result<()> {
    for _ in 0..HOMOGENEITY_PROBES {
        let x = template.random_like(rng);
        let alpha = rng.complex_gaussian();
        let fx = objective.eval(&x)?;
        let fax = objective.eval(&x.scale_complex(alpha))?;
        let expected = alpha.norm() * fx;
        if !fax.is_finite() || !fx.is_finite() || fx < 0.0 {
            return Err(LabError::NotHomogeneous(format!(
                "objective returned {fx} / {fax}"
            )));
        }
        if (fax - expected).abs() > HOMOGENEITY_RTOL * expected + 1e-12 {
            return Err(LabError::NotHomogeneous(format!(
                "f(αx) = {fax} but |α| f(x) = {expected}"
            )));
        }
    }
    Ok(())
}

struct Climb<P> {
    point: P,
    value: f64,
    evaluations: usize,
}

/// Random-direction hill climb with geometric step control.
fn climb<P: SearchPoint>(
    start: P,
    start_value: f64,
    budget: &OptBudget,
    ceiling: Option<f64>,
    rng: &mut RandomStream,
    perturb: &(dyn Fn(&P, f64, &mut RandomStream) -> Option<P> + Sync),
    score: &(dyn Fn(&P) -> Result<Option<f64>> + Sync),
) -> Result<Climb<P>> {
    let mut point = start;
    let mut value = start_value;
    let mut step = budget.step_init;
    let mut evaluations = 0;
    for _ in 0..budget.max_iters {
        if step < budget.tol || reached(value, ceiling) {
            break;
        }
        let Some(candidate) = perturb(&point, step, rng) else {
            step *= STEP_SHRINK;
            continue;
        };
        evaluations += 1;
        match score(&candidate)? {
            Some(v) if v > value => {
                point = candidate;
                value = v;
                step = (step * STEP_GROW).min(STEP_CAP);
            }
            _ => step *= STEP_SHRINK,
        }
    }
    Ok(Climb {
        point,
        value,
        evaluations,
    })
}

fn reached(value: f64, ceiling: Option<f64>) -> bool {
    ceiling.is_some_and(|c| value >= c * (1.0 - 1e-12))
}

/// Scores all seeds, climbs from the best ones, and merges the results with
/// ties broken by lowest start index.
fn multistart<P: SearchPoint>(
    seeds: Vec<P>,
    budget: &OptBudget,
    ceiling: Option<f64>,
    perturb: &(dyn Fn(&P, f64, &mut RandomStream) -> Option<P> + Sync),
    score: &(dyn Fn(&P) -> Result<Option<f64>> + Sync),
) -> Result<Climb<P>> {
    let mut scored = Vec::with_capacity(seeds.len());
    let mut evaluations = 0;
    for seed in seeds {
        evaluations += 1;
        if let Some(v) = score(&seed)? {
            scored.push((seed, v));
        }
    }
    if scored.is_empty() {
        return Err(LabError::InvalidNorm(
            "objective or domain vanished at every seed point".into(),
        ));
    }
    // Stable sort: equal values keep seed order.
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[b].1.total_cmp(&scored[a].1));

    let best_seed = order[0];
    if reached(scored[best_seed].1, ceiling) {
        let (point, value) = scored.swap_remove(best_seed);
        return Ok(Climb {
            point,
            value,
            evaluations,
        });
    }

    let root = RandomStream::new(budget.seed);
    let starts: Vec<usize> = order.into_iter().take(budget.multistarts).collect();
    let climbs: Vec<Result<Climb<P>>> = starts
        .par_iter()
        .enumerate()
        .map(|(k, &idx)| {
            let mut rng = root.child(STREAM_STARTS + k as u64);
            let (p, v) = &scored[idx];
            climb(p.clone(), *v, budget, ceiling, &mut rng, perturb, score)
        })
        .collect();

    let mut best: Option<Climb<P>> = None;
    for c in climbs {
        let c = c?;
        evaluations += c.evaluations;
        if best.as_ref().is_none_or(|b| c.value > b.value) {
            best = Some(c);
        }
    }
    let mut best = best.expect("at least one start");
    best.evaluations = evaluations;
    Ok(best)
}

/// Maximize `objective` over the unit sphere of `domain` in ℂⁿ.
pub fn maximize_on_sphere(
    objective: &dyn Objective<Vector>,
    domain: &dyn VectorDomain,
    n: usize,
    budget: &OptBudget,
) -> Result<ComputationResult<Vector>> {
    maximize_on_sphere_with(objective, domain, n, budget, &SearchHints::default())
}

pub fn maximize_on_sphere_with(
    objective: &dyn Objective<Vector>,
    domain: &dyn VectorDomain,
    n: usize,
    budget: &OptBudget,
    hints: &SearchHints<Vector>,
) -> Result<ComputationResult<Vector>> {
    budget.validate()?;
    if n == 0 {
        return Err(LabError::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for s in &hints.seeds {
        crate::linalg::check_dim(n, s.dim())?;
    }
    let root = RandomStream::new(budget.seed);
    check_homogeneous(objective, &Vector::zeros(n), &mut root.child(STREAM_PROBES))?;

    if objective.is_convex() {
        if let Some(weights) = domain.vertex_weights(n) {
            // Extreme points of {Σ w_j|x_j| ≤ 1} are e^{iθ} e_j / w_j and the
            // objective ignores the phase.
            let mut best: Option<(Vector, f64)> = None;
            for (j, w) in weights.iter().enumerate() {
                let x = Vector::basis(n, j).scale_real(1.0 / w);
                let v = objective.eval(&x)?;
                if best.as_ref().is_none_or(|(_, b)| v > *b) {
                    best = Some((x, v));
                }
            }
            let (x, _) = best.expect("n >= 1");
            return finish(objective, domain, x, Exactness::ExactVertex, n);
        }
    }

    if let (Some(gamma), Some((_, m))) = (domain.l2_scale(), objective.l2_linear()) {
        crate::linalg::check_dim(n, m.dim())?;
        let gram = m.conj_transpose().matmul(&m)?;
        let eig = hermitian_top_eig(
            &gram,
            DEFAULT_EIG_TOL,
            DEFAULT_EIG_MAX_ITER,
            &mut root.child(STREAM_SEEDS),
        )?;
        let x = eig.eigenvector.scale_real(1.0 / gamma);
        return finish(objective, domain, x, Exactness::ExactClosedForm, n + eig.iterations);
    }

    let mut rng = root.child(STREAM_SEEDS);
    let mut seeds: Vec<Vector> = (0..n).map(|j| Vector::basis(n, j)).collect();
    seeds.push(Vector::ones(n));
    for _ in 0..n {
        seeds.push(Vector::new((0..n).map(|_| rng.unit_phase()).collect()));
    }
    seeds.extend(hints.seeds.iter().cloned());
    for _ in 0..budget.samples {
        seeds.push(rng.complex_gaussian_vector(n));
    }
    let seeds: Vec<Vector> = seeds.iter().filter_map(unit).collect();

    let score = |x: &Vector| -> Result<Option<f64>> {
        let d = domain.norm(x)?;
        if d <= 0.0 || !d.is_finite() {
            return Ok(None);
        }
        Ok(Some(objective.eval(x)? / d))
    };
    // Joint moves in all 2n real directions alternate with phase-only moves,
    // which keep every modulus and so slide along ridges of ℓ∞-like spheres.
    let perturb = |x: &Vector, step: f64, rng: &mut RandomStream| -> Option<Vector> {
        if rng.uniform() < 0.5 {
            let d = unit(&rng.complex_gaussian_vector(x.dim()))?;
            unit(&x.axpy(step, &d))
        } else {
            Some(Vector::new(
                x.iter()
                    .map(|z| z * Complex64::from_polar(1.0, step * rng.gaussian()))
                    .collect(),
            ))
        }
    };
    let best = multistart(seeds, budget, hints.ceiling, &perturb, &score)?;
    finish(objective, domain, best.point, Exactness::LowerBound, best.evaluations)
}

/// Rescale the winning point onto the domain sphere and report the value at
/// the rescaled point.
fn finish(
    objective: &dyn Objective<Vector>,
    domain: &dyn VectorDomain,
    x: Vector,
    exactness: Exactness,
    evaluations: usize,
) -> Result<ComputationResult<Vector>> {
    let d = domain.norm(&x)?;
    let witness = x.scale_real(1.0 / d);
    let value = objective.eval(&witness)? / domain.norm(&witness)?;
    Ok(ComputationResult {
        value,
        witness,
        exactness,
        evaluations: evaluations + 3,
    })
}

/// Maximize `objective` over `{A ∈ M_n : domain(A) = 1}`.
///
/// `EntrywiseSum` balls with a convex objective are solved exactly over the
/// single-entry matrices. `EntrywiseMax` balls are searched over their
/// extreme points by perturbing entry phases. All other balls use the
/// generic ascent seeded with the identity, all `E_ij`, and Gaussian samples.
pub fn maximize_on_matrix_sphere(
    objective: &dyn Objective<Matrix>,
    domain: &dyn MatrixDomain,
    n: usize,
    budget: &OptBudget,
) -> Result<ComputationResult<Matrix>> {
    maximize_on_matrix_sphere_with(objective, domain, n, budget, &SearchHints::default())
}

pub fn maximize_on_matrix_sphere_with(
    objective: &dyn Objective<Matrix>,
    domain: &dyn MatrixDomain,
    n: usize,
    budget: &OptBudget,
    hints: &SearchHints<Matrix>,
) -> Result<ComputationResult<Matrix>> {
    budget.validate()?;
    if n == 0 {
        return Err(LabError::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for s in &hints.seeds {
        crate::linalg::check_dim(n, s.dim())?;
    }
    let root = RandomStream::new(budget.seed);
    check_homogeneous(objective, &Matrix::zeros(n), &mut root.child(STREAM_PROBES))?;

    let ball = domain.ball();
    if ball == MatrixBall::EntrywiseSum && objective.is_convex() {
        let mut best: Option<(Matrix, f64)> = None;
        for i in 0..n {
            for j in 0..n {
                let e = Matrix::unit(n, i, j);
                let v = objective.eval(&e)?;
                if best.as_ref().is_none_or(|(_, b)| v > *b) {
                    best = Some((e, v));
                }
            }
        }
        let (e, _) = best.expect("n >= 1");
        return finish_matrix(objective, domain, e, Exactness::ExactVertex, n * n);
    }

    let mut rng = root.child(STREAM_SEEDS);
    let mut seeds = vec![Matrix::identity(n)];
    for i in 0..n {
        for j in 0..n {
            seeds.push(Matrix::unit(n, i, j));
        }
    }
    seeds.push(Matrix::ones(n));
    seeds.extend(hints.seeds.iter().cloned());
    for _ in 0..budget.samples {
        seeds.push(rng.complex_gaussian_matrix(n));
    }

    let score = |a: &Matrix| -> Result<Option<f64>> {
        let d = domain.norm(a)?;
        if d <= 0.0 || !d.is_finite() {
            return Ok(None);
        }
        Ok(Some(objective.eval(a)? / d))
    };

    let best = if ball == MatrixBall::EntrywiseMax {
        let seeds: Vec<Matrix> = seeds.iter().map(to_torus).collect();
        let perturb = |a: &Matrix, step: f64, rng: &mut RandomStream| -> Option<Matrix> {
            Some(Matrix::from_fn(a.dim(), |i, j| {
                a.get(i, j) * Complex64::from_polar(1.0, step * rng.gaussian())
            }))
        };
        multistart(seeds, budget, hints.ceiling, &perturb, &score)?
    } else {
        let seeds: Vec<Matrix> = seeds.iter().filter_map(unit).collect();
        let perturb = |a: &Matrix, step: f64, rng: &mut RandomStream| -> Option<Matrix> {
            let d = unit(&rng.complex_gaussian_matrix(a.dim()))?;
            unit(&a.axpy(step, &d))
        };
        multistart(seeds, budget, hints.ceiling, &perturb, &score)?
    };
    finish_matrix(objective, domain, best.point, Exactness::LowerBound, best.evaluations)
}

/// Replace every entry by its phase (zero entries become 1).
fn to_torus(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.dim(), |i, j| {
        let z = a.get(i, j);
        let r = z.norm();
        if r > 0.0 {
            z / r
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

fn finish_matrix(
    objective: &dyn Objective<Matrix>,
    domain: &dyn MatrixDomain,
    a: Matrix,
    exactness: Exactness,
    evaluations: usize,
) -> Result<ComputationResult<Matrix>> {
    let d = domain.norm(&a)?;
    let witness = a.scale_real(1.0 / d);
    let value = objective.eval(&witness)? / domain.norm(&witness)?;
    Ok(ComputationResult {
        value,
        witness,
        exactness,
        evaluations: evaluations + 3,
    })
}
