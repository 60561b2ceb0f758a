//! Norms on ℂⁿ: ℓ_p, positive scalings, maxima, weighted ℓ_p and the two
//! norms extracted from a matrix norm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::extraction;
use crate::linalg::{check_dim, RandomStream, Vector};
use crate::matrix_norms::MatrixNormSpec;
use crate::sphere_opt::{
    maximize_on_sphere, maximize_on_sphere_with, ComputationResult, Exactness, FnObjective,
    Objective, OptBudget, SearchHints, VectorDomain,
};

/// Which of the two extracted norms a spec stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtractedRole {
    /// `‖x‖ = max{N(C_{Ax}) : N(A) = 1}`, evaluated by optimization.
    Norm1,
    /// `‖x‖ = N(C_x)`, evaluated exactly.
    Norm2,
}

impl ExtractedRole {
    pub fn index(self) -> u8 {
        match self {
            ExtractedRole::Norm1 => 1,
            ExtractedRole::Norm2 => 2,
        }
    }
}

/// Declarative description of a norm on ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorNormSpec {
    /// ℓ_p with `p ∈ [1, ∞]`; `f64::INFINITY` is the max norm.
    Lp(f64),
    Scaled {
        gamma: f64,
        inner: Box<VectorNormSpec>,
    },
    MaxOf(Vec<VectorNormSpec>),
    /// `ℓ_p(w₁x₁, …, w_nx_n)` with strictly positive weights.
    WeightedLp { weights: Vec<f64>, p: f64 },
    Extracted {
        role: ExtractedRole,
        source: Box<MatrixNormSpec>,
        budget: OptBudget,
    },
}

pub fn l1() -> VectorNormSpec {
    VectorNormSpec::Lp(1.0)
}

pub fn l2() -> VectorNormSpec {
    VectorNormSpec::Lp(2.0)
}

pub fn linf() -> VectorNormSpec {
    VectorNormSpec::Lp(f64::INFINITY)
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidNorm(format!("p < 1 (p = {p})")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidNorm(format!("gamma must be positive (gamma = {gamma})")))
    }
}

impl VectorNormSpec {
    pub fn lp(p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(VectorNormSpec::Lp(p))
    }

    pub fn scaled(gamma: f64, inner: VectorNormSpec) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(VectorNormSpec::Scaled {
            gamma,
            inner: Box::new(inner),
        })
    }

    pub fn max_of(members: Vec<VectorNormSpec>) -> Result<Self> {
        if members.is_empty() {
            return Err(LabError::InvalidNorm("empty maxof".into()));
        }
        Ok(VectorNormSpec::MaxOf(members))
    }

    pub fn weighted(weights: Vec<f64>, p: f64) -> Result<Self> {
        let spec = VectorNormSpec::WeightedLp { weights, p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VectorNormSpec::Lp(p) => check_p(*p),
            VectorNormSpec::Scaled { gamma, inner } => {
                check_gamma(*gamma)?;
                inner.validate()
            }
            VectorNormSpec::MaxOf(members) => {
                if members.is_empty() {
                    return Err(LabError::InvalidNorm("empty maxof".into()));
                }
                members.iter().try_for_each(|m| m.validate())
            }
            VectorNormSpec::WeightedLp { weights, p } => {
                check_p(*p)?;
                if weights.is_empty() {
                    return Err(LabError::InvalidNorm("empty weight list".into()));
                }
                if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                    return Err(LabError::InvalidNorm("weights must be strictly positive".into()));
                }
                Ok(())
            }
            VectorNormSpec::Extracted { source, budget, .. } => {
                budget.validate()?;
                source.validate()
            }
        }
    }

    /// Dimension fixed by the spec itself, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            VectorNormSpec::WeightedLp { weights, .. } => Some(weights.len()),
            VectorNormSpec::Scaled { inner, .. } => inner.fixed_dim(),
            VectorNormSpec::MaxOf(members) => members.iter().find_map(|m| m.fixed_dim()),
            _ => None,
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) => check_dim(d, n),
            None => Ok(()),
        }
    }

    /// True when evaluation involves an optimization (extracted norm 1
    /// somewhere in the tree).
    pub fn is_lower_bound(&self) -> bool {
        match self {
            VectorNormSpec::Scaled { inner, .. } => inner.is_lower_bound(),
            VectorNormSpec::MaxOf(members) => members.iter().any(|m| m.is_lower_bound()),
            VectorNormSpec::Extracted { role, .. } => *role == ExtractedRole::Norm1,
            _ => false,
        }
    }

    /// Evaluate the norm at `x`.
    ///
    /// Exact for every kind except an extracted norm 1, whose value is the
    /// best lower bound found by the matrix-sphere search.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        match self {
            VectorNormSpec::Lp(p) => {
                check_p(*p)?;
                Ok(lp_of(x.moduli(), *p))
            }
            VectorNormSpec::Scaled { gamma, inner } => {
                check_gamma(*gamma)?;
                Ok(gamma * inner.eval(x)?)
            }
            VectorNormSpec::MaxOf(members) => {
                if members.is_empty() {
                    return Err(LabError::InvalidNorm("empty maxof".into()));
                }
                members
                    .iter()
                    .try_fold(0.0f64, |acc, m| Ok(acc.max(m.eval(x)?)))
            }
            VectorNormSpec::WeightedLp { weights, p } => {
                check_dim(weights.len(), x.dim())?;
                check_p(*p)?;
                Ok(lp_of(x.moduli().zip(weights).map(|(m, w)| m * w), *p))
            }
            VectorNormSpec::Extracted {
                role,
                source,
                budget,
            } => match role {
                ExtractedRole::Norm2 => extraction::norm2_value(source, x, budget),
                ExtractedRole::Norm1 => {
                    Ok(extraction::norm1_value(source, x, budget, &[])?.value)
                }
            },
        }
    }

    /// Dual norm `max{|⟨v, x⟩| : ‖x‖ = 1}` with witness `x`.
    ///
    /// Closed form (Hölder conjugate) for ℓ_p, weighted ℓ_p and their
    /// scalings; a sphere-search lower bound otherwise.
    pub fn dual(&self, v: &Vector, budget: &OptBudget) -> Result<ComputationResult<Vector>> {
        self.check_dim(v.dim())?;
        if let Some(r) = self.dual_closed_form(v)? {
            return Ok(r);
        }
        let objective = FnObjective::convex(|x: &Vector| Ok(v.inner(x)?.norm()));
        maximize_on_sphere(&objective, self, v.dim(), budget)
    }

    pub fn dual_eval(&self, v: &Vector, budget: &OptBudget) -> Result<f64> {
        Ok(self.dual(v, budget)?.value)
    }

    fn dual_closed_form(&self, v: &Vector) -> Result<Option<ComputationResult<Vector>>> {
        Ok(match self {
            VectorNormSpec::Lp(p) => {
                check_p(*p)?;
                let witness = norming_vector(v, *p);
                Some(ComputationResult {
                    value: lp_of(v.moduli(), conjugate_exponent(*p)),
                    witness,
                    exactness: Exactness::ExactClosedForm,
                    evaluations: 1,
                })
            }
            VectorNormSpec::Scaled { gamma, inner } => {
                inner.dual_closed_form(v)?.map(|r| ComputationResult {
                    value: r.value / gamma,
                    witness: r.witness.scale_real(1.0 / gamma),
                    ..r
                })
            }
            VectorNormSpec::WeightedLp { weights, p } => {
                check_dim(weights.len(), v.dim())?;
                // With y = w⊙x the constraint is ℓ_p(y) = 1 and ⟨v, x⟩ = ⟨v/w, y⟩.
                let reweighted =
                    Vector::new(v.iter().zip(weights).map(|(z, w)| z / w).collect());
                let y = norming_vector(&reweighted, *p);
                let x = Vector::new(y.iter().zip(weights).map(|(z, w)| z / w).collect());
                Some(ComputationResult {
                    value: lp_of(reweighted.moduli(), conjugate_exponent(*p)),
                    witness: x,
                    exactness: Exactness::ExactClosedForm,
                    evaluations: 1,
                })
            }
            VectorNormSpec::MaxOf(members) if members.len() == 1 => {
                members[0].dual_closed_form(v)?
            }
            _ => None,
        })
    }

    /// A functional `f` with `‖f‖_dual = 1` and `⟨f, x⟩ = ‖x‖`, when it has
    /// a closed form.
    pub fn norming_functional(&self, x: &Vector) -> Result<Option<Vector>> {
        self.check_dim(x.dim())?;
        let norm = self.eval(x)?;
        if norm == 0.0 {
            return Ok(None);
        }
        Ok(match self {
            VectorNormSpec::Lp(p) => {
                // The dual of ℓ_q is ℓ_p, so the norming functional of x in
                // ℓ_p is the ℓ_q-norming vector of x, rescaled.
                let q = conjugate_exponent(*p);
                let f = norming_vector(x, q);
                Some(f)
            }
            VectorNormSpec::Scaled { gamma, inner } => inner
                .norming_functional(x)?
                .map(|f| f.scale_real(*gamma)),
            VectorNormSpec::WeightedLp { weights, p } => {
                let y = Vector::new(x.iter().zip(weights).map(|(z, w)| z * w).collect());
                let g = norming_vector(&y, conjugate_exponent(*p));
                Some(Vector::new(g.iter().zip(weights).map(|(z, w)| z * w).collect()))
            }
            VectorNormSpec::MaxOf(members) if members.len() == 1 => {
                members[0].norming_functional(x)?
            }
            _ => None,
        })
    }

    fn weights_l1(&self, n: usize) -> Option<Vec<f64>> {
        match self {
            VectorNormSpec::Lp(p) if *p == 1.0 => Some(vec![1.0; n]),
            VectorNormSpec::Scaled { gamma, inner } => inner
                .weights_l1(n)
                .map(|w| w.into_iter().map(|w| w * gamma).collect()),
            VectorNormSpec::WeightedLp { weights, p } if *p == 1.0 && weights.len() == n => {
                Some(weights.clone())
            }
            VectorNormSpec::MaxOf(members) if members.len() == 1 => members[0].weights_l1(n),
            _ => None,
        }
    }

    fn scale_l2(&self) -> Option<f64> {
        match self {
            VectorNormSpec::Lp(p) if *p == 2.0 => Some(1.0),
            VectorNormSpec::Scaled { gamma, inner } => inner.scale_l2().map(|s| s * gamma),
            VectorNormSpec::WeightedLp { weights, p } if *p == 2.0 => {
                let w0 = weights[0];
                weights.iter().all(|w| *w == w0).then_some(w0)
            }
            VectorNormSpec::MaxOf(members) if members.len() == 1 => members[0].scale_l2(),
            _ => None,
        }
    }
}

impl VectorDomain for VectorNormSpec {
    fn norm(&self, x: &Vector) -> Result<f64> {
        self.eval(x)
    }

    fn vertex_weights(&self, n: usize) -> Option<Vec<f64>> {
        self.weights_l1(n)
    }

    fn l2_scale(&self) -> Option<f64> {
        self.scale_l2()
    }
}

/// A vector norm is itself a convex homogeneous objective.
impl Objective<Vector> for VectorNormSpec {
    fn eval(&self, x: &Vector) -> Result<f64> {
        VectorNormSpec::eval(self, x)
    }

    fn is_convex(&self) -> bool {
        // Extracted norm 1 is only evaluated to a lower bound, which need
        // not be convex.
        !self.is_lower_bound()
    }
}

/// Hölder conjugate exponent q with 1/p + 1/q = 1.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// ℓ_p of a list of nonnegative reals, scaled to avoid overflow.
pub fn lp_of(moduli: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == 1.0 {
        return moduli.sum();
    }
    if p.is_infinite() {
        return moduli.fold(0.0, f64::max);
    }
    if p == 2.0 {
        return moduli.map(|m| m * m).sum::<f64>().sqrt();
    }
    let values: Vec<f64> = moduli.collect();
    let top = values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return top;
    }
    top * values.iter().map(|m| (m / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Unit-ℓ_p vector `x` maximizing `|⟨v, x⟩|` (the maximum is `ℓ_q(v)`).
fn norming_vector(v: &Vector, p: f64) -> Vector {
    let n = v.dim();
    if v.is_zero() {
        return Vector::basis(n, 0);
    }
    if p == 1.0 {
        let k = (0..n)
            .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()).then(b.cmp(&a)))
            .expect("n >= 1");
        return Vector::basis(n, k).scale(phase(v[k]));
    }
    if p.is_infinite() {
        return Vector::new(v.iter().map(|z| phase(*z)).collect());
    }
    let q = conjugate_exponent(p);
    let top = v.moduli().fold(0.0, f64::max);
    let raw = Vector::new(
        v.iter()
            .map(|z| phase(*z) * (z.norm() / top).powf(q - 1.0))
            .collect(),
    );
    let norm = lp_of(raw.moduli(), p);
    raw.scale_real(1.0 / norm)
}

/// `α = max{|Σ y_j| : ‖y‖ = 1}`, the dual norm of the all-ones vector.
pub fn sum_functional_alpha(spec: &VectorNormSpec, n: usize, budget: &OptBudget) -> Result<f64> {
    spec.dual_eval(&Vector::ones(n), budget)
}

/// Verdict of a sampled pointwise comparison `‖x‖_a ≤ ‖x‖_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub dominated: bool,
    /// Present iff not dominated; normalized to the unit sphere of `b`.
    pub counterexample: Option<Vector>,
    pub samples_used: usize,
    /// Largest observed `‖x‖_a / ‖x‖_b`.
    pub max_ratio: f64,
}

pub const DOMINANCE_MARGIN: f64 = 1e-9;

/// Check `‖·‖_a ≤ ‖·‖_b` on ℂⁿ by sampling, then refine the worst ratio by
/// sphere ascent. A verdict of "dominated" is evidence, not proof.
pub fn dominance_check(
    a: &VectorNormSpec,
    b: &VectorNormSpec,
    n: usize,
    samples: usize,
    rng: &mut RandomStream,
) -> Result<DominanceReport> {
    a.check_dim(n)?;
    b.check_dim(n)?;
    let mut points: Vec<Vector> = (0..n).map(|j| Vector::basis(n, j)).collect();
    points.push(Vector::ones(n));
    for _ in 1..n {
        points.push(Vector::new((0..n).map(|_| rng.unit_phase()).collect()));
    }
    for _ in 0..samples {
        points.push(rng.complex_gaussian_vector(n));
    }

    let mut scored: Vec<(Vector, f64)> = Vec::with_capacity(points.len());
    for x in points {
        let nb = b.eval(&x)?;
        if nb <= 0.0 {
            continue;
        }
        let x = x.scale_real(1.0 / nb);
        let ratio = a.eval(&x)? / b.eval(&x)?;
        scored.push((x, ratio));
    }
    let mut samples_used = scored.len();
    let mut best = 0;
    for (i, (_, r)) in scored.iter().enumerate() {
        if *r > scored[best].1 * (1.0 + 1e-12) {
            best = i;
        }
    }
    let (mut worst_x, mut max_ratio) = scored[best].clone();

    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&i, &j| scored[j].1.total_cmp(&scored[i].1));
    let budget = OptBudget {
        samples: 1,
        ..OptBudget::for_dim(n).with_seed(rng.next_u64())
    };
    let hints = SearchHints {
        seeds: order.iter().take(8).map(|&i| scored[i].0.clone()).collect(),
        ceiling: None,
    };
    let refined = maximize_on_sphere_with(a, b, n, &budget, &hints)?;
    samples_used += refined.evaluations;
    if refined.value > max_ratio * (1.0 + 1e-12) {
        max_ratio = refined.value;
        worst_x = refined.witness;
    }

    let dominated = max_ratio <= 1.0 + DOMINANCE_MARGIN;
    Ok(DominanceReport {
        dominated,
        counterexample: (!dominated).then_some(worst_x),
        samples_used,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(values: &[f64]) -> Vector {
        Vector::from_real(values)
    }

    fn budget(n: usize) -> OptBudget {
        OptBudget::for_dim(n).with_seed(3)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(l2().eval(&v(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(linf().eval(&v(&[3.0, 4.0])).unwrap(), 4.0);
        assert_eq!(l1().eval(&v(&[3.0, 4.0])).unwrap(), 7.0);
        let beta = VectorNormSpec::scaled(2.0, l2()).unwrap();
        assert_eq!(beta.eval(&v(&[3.0, 4.0])).unwrap(), 10.0);
    }

    #[test]
    fn general_p_and_weights() {
        let x = v(&[1.0, 2.0]);
        assert_relative_eq!(
            VectorNormSpec::Lp(3.0).eval(&x).unwrap(),
            9.0f64.powf(1.0 / 3.0),
            max_relative = 1e-14
        );
        let w = VectorNormSpec::weighted(vec![2.0, 0.5], 1.0).unwrap();
        assert_eq!(w.eval(&x).unwrap(), 3.0);
        let m = VectorNormSpec::max_of(vec![l1(), VectorNormSpec::scaled(3.0, linf()).unwrap()])
            .unwrap();
        assert_eq!(m.eval(&x).unwrap(), 6.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(VectorNormSpec::lp(0.5), Err(LabError::InvalidNorm(m)) if m.contains("p < 1")));
        assert!(VectorNormSpec::scaled(0.0, l1()).is_err());
        assert!(VectorNormSpec::scaled(-1.0, l1()).is_err());
        assert!(VectorNormSpec::max_of(vec![]).is_err());
        assert!(VectorNormSpec::weighted(vec![1.0, 0.0], 2.0).is_err());
        let w = VectorNormSpec::weighted(vec![1.0, 1.0], 2.0).unwrap();
        assert!(matches!(w.eval(&v(&[1.0, 2.0, 3.0])), Err(LabError::DimensionMismatch { .. })));
    }

    #[test]
    fn dual_examples() {
        let d = l1().dual(&v(&[1.0, 2.0]), &budget(2)).unwrap();
        assert_eq!(d.value, 2.0);
        assert_eq!(d.exactness, Exactness::ExactClosedForm);
        assert_relative_eq!(l2().dual_eval(&v(&[3.0, 4.0]), &budget(2)).unwrap(), 5.0);
        assert_eq!(linf().dual_eval(&v(&[1.0, 1.0, 1.0]), &budget(3)).unwrap(), 3.0);
    }

    /// Dense sampling of the unit sphere at n = 2 as an independent check of
    /// the closed-form duals.
    fn sampled_dual(spec: &VectorNormSpec, w: &Vector) -> f64 {
        let mut best: f64 = 0.0;
        let steps = 400;
        for a in 0..=steps {
            let t = std::f64::consts::FRAC_PI_2 * a as f64 / steps as f64;
            for b in 0..steps {
                let phi = std::f64::consts::TAU * b as f64 / steps as f64;
                let x = Vector::new(vec![
                    Complex64::new(t.cos(), 0.0),
                    Complex64::from_polar(t.sin(), phi),
                ]);
                let x = x.scale_real(1.0 / spec.eval(&x).unwrap());
                best = best.max(w.inner(&x).unwrap().norm());
            }
        }
        best
    }

    #[test]
    fn dual_matches_sampling_oracle() {
        let w = Vector::new(vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 2.0)]);
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let spec = VectorNormSpec::Lp(p);
            let closed = spec.dual_eval(&w, &budget(2)).unwrap();
            let sampled = sampled_dual(&spec, &w);
            assert!(sampled <= closed * (1.0 + 1e-12));
            assert_relative_eq!(sampled, closed, max_relative = 1e-4);
        }
    }

    #[test]
    fn dual_of_maxof_falls_back_to_search() {
        let spec = VectorNormSpec::max_of(vec![l1(), VectorNormSpec::scaled(2.0, linf()).unwrap()])
            .unwrap();
        let w = v(&[1.0, 3.0]);
        let d = spec.dual(&w, &budget(2)).unwrap();
        assert_eq!(d.exactness, Exactness::LowerBound);
        assert_relative_eq!(d.value, sampled_dual(&spec, &w), max_relative = 1e-4);
    }

    #[test]
    fn weighted_dual_matches_search() {
        let spec = VectorNormSpec::weighted(vec![1.0, 3.0], 1.5).unwrap();
        let w = Vector::new(vec![Complex64::new(0.2, 1.0), Complex64::new(2.0, -1.0)]);
        let closed = spec.dual(&w, &budget(2)).unwrap();
        assert_relative_eq!(closed.value, sampled_dual(&spec, &w), max_relative = 1e-4);
        assert_relative_eq!(spec.eval(&closed.witness).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(w.inner(&closed.witness).unwrap().norm(), closed.value, max_relative = 1e-12);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(sum_functional_alpha(&l1(), 3, &budget(3)).unwrap(), 1.0);
        assert_eq!(sum_functional_alpha(&linf(), 2, &budget(2)).unwrap(), 2.0);
        assert_relative_eq!(sum_functional_alpha(&l2(), 4, &budget(4)).unwrap(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn norming_functional_attains_norm() {
        let x = Vector::new(vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, -2.0)]);
        for spec in [l1(), l2(), linf(), VectorNormSpec::Lp(3.0), VectorNormSpec::scaled(2.0, l2()).unwrap()] {
            let f = spec.norming_functional(&x).unwrap().unwrap();
            assert_relative_eq!(f.inner(&x).unwrap().re, spec.eval(&x).unwrap(), max_relative = 1e-12);
            let dual = spec.dual_eval(&f, &budget(2)).unwrap();
            assert_relative_eq!(dual, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn dominance_examples() {
        let mut rng = RandomStream::new(8);
        let r = dominance_check(&linf(), &l1(), 2, 200, &mut rng).unwrap();
        assert!(r.dominated);
        assert!(r.counterexample.is_none());

        let r = dominance_check(&l1(), &linf(), 2, 200, &mut rng).unwrap();
        assert!(!r.dominated);
        let x = r.counterexample.unwrap();
        assert_eq!(x, v(&[1.0, 1.0]));
        assert_eq!(l1().eval(&x).unwrap(), 2.0);
        assert_eq!(linf().eval(&x).unwrap(), 1.0);

        let r = dominance_check(&l2(), &l2(), 3, 200, &mut rng).unwrap();
        assert!(r.dominated);
        assert_eq!(r.max_ratio, 1.0);
    }

    fn arb_spec() -> impl Strategy<Value = VectorNormSpec> {
        let leaf = prop_oneof![
            Just(l1()),
            Just(l2()),
            Just(linf()),
            (1.0f64..6.0).prop_map(VectorNormSpec::Lp),
            (0.1f64..4.0, 1.0f64..4.0).prop_map(|(w, p)| VectorNormSpec::WeightedLp { weights: vec![w, 1.0, 2.0 * w, 0.5], p }),
        ];
        leaf.prop_recursive(2, 6, 3, |inner| {
            prop_oneof![
                (0.2f64..5.0, inner.clone()).prop_map(|(g, s)| VectorNormSpec::Scaled { gamma: g, inner: Box::new(s) }),
                prop::collection::vec(inner, 1..3).prop_map(VectorNormSpec::MaxOf),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn norm_axioms_hold(spec in arb_spec(), seed in any::<u64>()) {
            let mut s = RandomStream::new(seed);
            let n = spec.fixed_dim().unwrap_or(2 + s.index(3));
            prop_assert_eq!(spec.eval(&Vector::zeros(n)).unwrap(), 0.0);
            for _ in 0..16 {
                let x = s.complex_gaussian_vector(n);
                let y = s.complex_gaussian_vector(n);
                let alpha = s.complex_gaussian();
                let nx = spec.eval(&x).unwrap();
                prop_assert!(nx > 0.0);
                let nax = spec.eval(&x.scale(alpha)).unwrap();
                prop_assert!((nax - alpha.norm() * nx).abs() <= 1e-12 * alpha.norm() * nx + 1e-300);
                let nxy = spec.eval(&(&x + &y)).unwrap();
                prop_assert!(nxy <= nx + spec.eval(&y).unwrap() + 1e-12 * (1.0 + nxy));
            }
        }

        #[test]
        fn lp_chain(seed in any::<u64>()) {
            let mut s = RandomStream::new(seed);
            let dim = 2 + s.index(3);
            let x = s.complex_gaussian_vector(dim);
            let (a, b, c) = (linf().eval(&x).unwrap(), l2().eval(&x).unwrap(), l1().eval(&x).unwrap());
            prop_assert!(a <= b * (1.0 + 1e-15) && b <= c * (1.0 + 1e-15));
        }

        #[test]
        fn dual_is_holder_conjugate(seed in any::<u64>(), pick in 0usize..5) {
            let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][pick];
            let mut s = RandomStream::new(seed);
            let n = 2 + s.index(3);
            let w = s.complex_gaussian_vector(n);
            let r = VectorNormSpec::Lp(p).dual(&w, &budget(n)).unwrap();
            let q = conjugate_exponent(p);
            let expected = lp_of(w.moduli(), q);
            prop_assert!((r.value - expected).abs() <= 1e-9 * expected);
            // The witness is feasible and attains the value.
            prop_assert!((VectorNormSpec::Lp(p).eval(&r.witness).unwrap() - 1.0).abs() <= 1e-12);
            prop_assert!((w.inner(&r.witness).unwrap().norm() - r.value).abs() <= 1e-9 * r.value);
        }

        #[test]
        fn alpha_is_n_to_one_over_q(n in 2usize..5, pick in 0usize..5) {
            let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][pick];
            let alpha = sum_functional_alpha(&VectorNormSpec::Lp(p), n, &budget(n)).unwrap();
            let q = conjugate_exponent(p);
            let expected = if q.is_infinite() { 1.0 } else { (n as f64).powf(1.0 / q) };
            prop_assert!((alpha - expected).abs() <= 1e-9 * expected);
        }
    }
}
