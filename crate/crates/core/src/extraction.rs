//! Recovering a pair of vector norms from a matrix norm `N`:
//! `‖x‖₂ = N(C_x)` and `‖x‖₁ = max{N(C_{Bx}) : N(B) = 1}`, where `C_x` has
//! every column equal to `x`. The g-ind norm of the recovered pair never
//! exceeds `N`, and equals it when `N` is minimal.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gind::{gind_eval, gind_eval_with, GIndPair};
use crate::linalg::{Matrix, RandomStream, Vector};
use crate::matrix_norms::{AlgebraClass, MatrixNormDomain, MatrixNormSpec};
use crate::sphere_opt::{
    maximize_on_matrix_sphere_with, ComputationResult, Exactness, FnObjective, OptBudget,
    SearchHints, VectorDomain,
};
use crate::vector_norms::{sum_functional_alpha, ExtractedRole, VectorNormSpec};

/// `C_{x,j}`: `x` in column `j` (zero-based), zeros elsewhere.
pub fn column_embed(x: &Vector, j: usize) -> Result<Matrix> {
    let n = x.dim();
    if j >= n {
        return Err(LabError::IndexOutOfRange { index: j, dim: n });
    }
    Ok(Matrix::from_fn(n, |r, c| {
        if c == j {
            x[r]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `C_x`: every column equal to `x`.
pub fn column_replicate(x: &Vector) -> Matrix {
    Matrix::from_fn(x.dim(), |r, _| x[r])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    pub source: MatrixNormSpec,
    pub norm1: VectorNormSpec,
    pub norm2: VectorNormSpec,
    pub budget: OptBudget,
}

impl ExtractionResult {
    pub fn pair(&self) -> GIndPair {
        GIndPair::new(self.norm1.clone(), self.norm2.clone())
    }
}

pub fn extract_norm2(source: &MatrixNormSpec, budget: &OptBudget) -> VectorNormSpec {
    VectorNormSpec::Extracted {
        role: ExtractedRole::Norm2,
        source: Box::new(source.clone()),
        budget: *budget,
    }
}

pub fn extract_norm1(source: &MatrixNormSpec, budget: &OptBudget) -> VectorNormSpec {
    VectorNormSpec::Extracted {
        role: ExtractedRole::Norm1,
        source: Box::new(source.clone()),
        budget: *budget,
    }
}

pub fn extract(source: &MatrixNormSpec, budget: &OptBudget) -> Result<ExtractionResult> {
    source.validate()?;
    budget.validate()?;
    Ok(ExtractionResult {
        source: source.clone(),
        norm1: extract_norm1(source, budget),
        norm2: extract_norm2(source, budget),
        budget: *budget,
    })
}

/// `N(C_x)`.
pub fn norm2_value(source: &MatrixNormSpec, x: &Vector, budget: &OptBudget) -> Result<f64> {
    source.eval(&column_replicate(x), budget)
}

/// True when `N` is evaluated exactly (no g-ind member anywhere).
fn exact_source(source: &MatrixNormSpec) -> bool {
    match source {
        MatrixNormSpec::GInd(_) => false,
        MatrixNormSpec::MaxOf(m) => m.iter().all(exact_source),
        MatrixNormSpec::Scaled { inner, .. } => exact_source(inner),
        _ => true,
    }
}

const CACHE_QUANTUM: f64 = 1e-12;
const CACHE_CAPACITY: usize = 200_000;

type CacheKey = (String, Vec<i64>);

fn cache() -> &'static Mutex<HashMap<CacheKey, (f64, Matrix, Exactness)>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, (f64, Matrix, Exactness)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `‖x‖₁` for the norm extracted from `source`, with a witness `B` on the
/// unit sphere of `source`.
///
/// The base maximization runs on `x/ℓ₂(x)` rounded to a 1e-12 grid and is
/// cached, so repeated evaluations are cheap and independent of call order.
/// Each matrix in `hints` is also evaluated as a candidate `B` (after
/// normalization) and can only raise the result.
pub fn norm1_value(
    source: &MatrixNormSpec,
    x: &Vector,
    budget: &OptBudget,
    hints: &[Matrix],
) -> Result<ComputationResult<Matrix>> {
    let n = x.dim();
    let scale = x.l2();
    let mut best = if scale == 0.0 {
        ComputationResult {
            value: 0.0,
            witness: Matrix::identity(n).scale_real(1.0 / source.eval(&Matrix::identity(n), budget)?),
            exactness: Exactness::ExactClosedForm,
            evaluations: 1,
        }
    } else {
        let grid: Vec<i64> = x
            .iter()
            .flat_map(|z| {
                let z = z / scale;
                [
                    (z.re / CACHE_QUANTUM).round() as i64,
                    (z.im / CACHE_QUANTUM).round() as i64,
                ]
            })
            .collect();
        let key = (format!("{source:?}|{budget:?}"), grid);
        let cached = cache().lock().expect("cache lock").get(&key).cloned();
        let (value, witness, exactness) = match cached {
            Some(hit) => hit,
            None => {
                let u = Vector::new(
                    key.1
                        .chunks(2)
                        .map(|c| Complex64::new(c[0] as f64, c[1] as f64) * CACHE_QUANTUM)
                        .collect(),
                );
                let r = norm1_base(source, &u, budget)?;
                let entry = (r.value, r.witness, r.exactness);
                let mut map = cache().lock().expect("cache lock");
                if map.len() >= CACHE_CAPACITY {
                    map.clear();
                }
                map.insert(key, entry.clone());
                entry
            }
        };
        ComputationResult {
            value: value * scale,
            witness,
            exactness,
            evaluations: 1,
        }
    };
    for h in hints {
        let nh = source.eval(h, budget)?;
        if nh <= 0.0 {
            continue;
        }
        let b = h.scale_real(1.0 / nh);
        let v = source.eval(&column_replicate(&crate::linalg::mat_apply(&b, x)?), budget)?;
        if v > best.value {
            best = ComputationResult {
                value: v,
                witness: b,
                exactness: Exactness::LowerBound,
                evaluations: best.evaluations + 1,
            };
        }
    }
    Ok(best)
}

fn norm1_base(
    source: &MatrixNormSpec,
    x: &Vector,
    budget: &OptBudget,
) -> Result<ComputationResult<Matrix>> {
    let n = x.dim();
    let exact = exact_source(source);
    let objective_fn = |b: &Matrix| -> Result<f64> {
        source.eval(&column_replicate(&crate::linalg::mat_apply(b, x)?), budget)
    };
    let objective = if exact {
        FnObjective::convex(objective_fn)
    } else {
        FnObjective::general(objective_fn)
    };
    // C_{Bx} = B·C_x, so a submultiplicative N gives ‖x‖₁ ≤ N(C_x), attained at B = I.
    let ceiling = (exact && source.algebra_class() == AlgebraClass::KnownYes)
        .then(|| norm2_value(source, x, budget))
        .transpose()?;
    let phases = Vector::new(
        x.iter()
            .map(|z| {
                let r = z.norm();
                if r > 0.0 {
                    z / r
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect(),
    );
    let hints = SearchHints {
        seeds: vec![Matrix::outer(&Vector::ones(n), &phases)?],
        ceiling,
    };
    maximize_on_matrix_sphere_with(
        &objective,
        &MatrixNormDomain {
            spec: source,
            budget,
        },
        n,
        budget,
        &hints,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaIdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub const ALPHA_RTOL: f64 = 1e-6;

/// Check `‖C_x‖_{1,2} = α·‖x‖₂` with `α` the dual norm of the all-ones vector.
pub fn alpha_identity_check(
    pair: &GIndPair,
    x: &Vector,
    budget: &OptBudget,
) -> Result<AlphaIdentityReport> {
    let lhs = gind_eval(pair, &column_replicate(x), budget)?.value;
    let rhs = sum_functional_alpha(&pair.norm1, x.dim(), budget)? * pair.norm2.eval(x)?;
    let holds = (lhs - rhs).abs() <= ALPHA_RTOL * lhs.abs().max(rhs.abs())
        || (lhs == 0.0 && rhs == 0.0);
    Ok(AlphaIdentityReport { lhs, rhs, holds })
}

/// The extracted domain norm with `A/N(A)` offered as an extra candidate.
/// This makes `‖Ax‖₂ ≤ N(A)‖x‖₁` hold for the computed values, not just for
/// the true ones.
struct HintedNorm1<'a> {
    source: &'a MatrixNormSpec,
    budget: &'a OptBudget,
    hint: Matrix,
}

impl VectorDomain for HintedNorm1<'_> {
    fn norm(&self, x: &Vector) -> Result<f64> {
        Ok(norm1_value(self.source, x, self.budget, std::slice::from_ref(&self.hint))?.value)
    }
}

/// `‖A‖_{1,2}` for the extracted pair. `budget` drives the outer search over
/// `x`; the extracted norms keep their own budget.
pub fn reconstruct(
    ext: &ExtractionResult,
    a: &Matrix,
    budget: &OptBudget,
) -> Result<ComputationResult<Vector>> {
    let na = ext.source.eval(a, &ext.budget)?;
    if na == 0.0 {
        return gind_eval(&ext.pair(), a, budget);
    }
    let domain = HintedNorm1 {
        source: &ext.source,
        budget: &ext.budget,
        hint: a.clone(),
    };
    let mut r = gind_eval_with(&domain, &ext.norm2, a, budget, Some(na))?;
    r.exactness = r.exactness.combine(Exactness::LowerBound);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    GapFound,
    NoGapFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub max_gap_ratio: f64,
    pub witness: Matrix,
    pub trials: usize,
    pub verdict: ProbeVerdict,
}

pub const GAP_THRESHOLD: f64 = 1e-4;

/// Matrices always probed, in order, before the random trials.
pub fn deterministic_probes(n: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(n)];
    for i in 0..n {
        for j in 0..n {
            out.push(Matrix::unit(n, i, j));
        }
    }
    out.push(Matrix::ones(n));
    if n >= 2 {
        out.push(Matrix::from_real(&[&[1.0, 1.0], &[1.0, -1.0]]).pad_to(n));
        out.push(Matrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]).pad_to(n));
    }
    out
}

/// Random test matrix: complex Gaussian, then kept raw, Hermitian-symmetrized
/// or replaced by a rank-one `u v*`, each with probability 1/3.
pub fn random_test_matrix(n: usize, rng: &mut RandomStream) -> Matrix {
    match rng.index(3) {
        0 => rng.complex_gaussian_matrix(n),
        1 => {
            let g = rng.complex_gaussian_matrix(n);
            (&g + &g.conj_transpose()).scale_real(0.5)
        }
        _ => {
            let u = rng.complex_gaussian_vector(n);
            let v = rng.complex_gaussian_vector(n);
            Matrix::outer(&u, &v).expect("same dimension")
        }
    }
}

/// `r(A) = reconstruction(A) / N(A)`.
pub fn reconstruction_ratio(ext: &ExtractionResult, a: &Matrix, budget: &OptBudget) -> Result<f64> {
    let na = ext.source.eval(a, &ext.budget)?;
    Ok(reconstruct(ext, a, budget)?.value / na)
}

/// Search for a matrix where the g-ind norm of the extracted pair falls
/// below `N`. A gap certifies that `N` is not minimal; no gap is only
/// evidence.
pub fn minimality_probe(
    source: &MatrixNormSpec,
    n: usize,
    trials: usize,
    budget: &OptBudget,
    rng: &mut RandomStream,
) -> Result<ProbeReport> {
    if trials == 0 {
        return Err(LabError::InvalidBudget("trials must be at least 1".into()));
    }
    let ext = extract(source, &OptBudget::nested(n).with_seed(budget.seed))?;
    let mut matrices = deterministic_probes(n);
    let base = RandomStream::new(rng.next_u64());
    matrices.extend((0..trials).map(|i| random_test_matrix(n, &mut base.child(i as u64))));
    let ratios: Vec<f64> = matrices
        .par_iter()
        .map(|a| reconstruction_ratio(&ext, a, budget))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in ratios.iter().enumerate() {
        if *r < ratios[best] {
            best = i;
        }
    }
    let ratio = ratios[best].clamp(0.0, 1.0);
    Ok(ProbeReport {
        max_gap_ratio: ratio,
        witness: matrices.swap_remove(best),
        trials,
        verdict: if ratio < 1.0 - GAP_THRESHOLD {
            ProbeVerdict::GapFound
        } else {
            ProbeVerdict::NoGapFound
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_apply;
    use crate::vector_norms::{l1, l2, linf};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(re: &[f64]) -> Vector {
        Vector::from_real(re)
    }

    fn b2() -> OptBudget {
        OptBudget::nested(2)
    }

    #[test]
    fn column_matrices() {
        assert_eq!(
            column_embed(&v(&[1.0, 2.0]), 1).unwrap(),
            Matrix::from_real(&[&[0.0, 1.0], &[0.0, 2.0]])
        );
        assert!(column_embed(&Vector::zeros(3), 2).unwrap().is_zero());
        let c = column_embed(&v(&[1.0, 2.0]), 0).unwrap();
        assert_eq!(mat_apply(&c, &v(&[3.0, 5.0])).unwrap(), v(&[3.0, 6.0]));
        assert!(matches!(
            column_embed(&v(&[1.0, 2.0]), 2),
            Err(LabError::IndexOutOfRange { index: 2, dim: 2 })
        ));

        assert_eq!(
            column_replicate(&v(&[1.0, 2.0])),
            Matrix::from_real(&[&[1.0, 1.0], &[2.0, 2.0]])
        );
        assert_eq!(
            column_replicate(&Vector::basis(2, 0)),
            Matrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]])
        );
    }

    proptest! {
        #[test]
        fn replicate_is_sum_of_embeds(seed in any::<u64>(), n in 1usize..5) {
            let x = RandomStream::new(seed).complex_gaussian_vector(n);
            let mut sum = Matrix::zeros(n);
            for j in 0..n {
                sum = &sum + &column_embed(&x, j).unwrap();
            }
            prop_assert_eq!(sum, column_replicate(&x));
        }

        #[test]
        fn embed_acts_by_coordinate(seed in any::<u64>(), n in 1usize..5) {
            let mut s = RandomStream::new(seed);
            let x = s.complex_gaussian_vector(n);
            let y = s.complex_gaussian_vector(n);
            let j = s.index(n);
            let got = mat_apply(&column_embed(&x, j).unwrap(), &y).unwrap();
            let want = x.scale(y[j]);
            prop_assert!((&got - &want).l2() <= 1e-12 * (1.0 + want.l2()));
        }
    }

    #[test]
    fn extracted_norm2_examples() {
        let b = b2();
        let s = extract_norm2(&MatrixNormSpec::Spectral, &b);
        assert_relative_eq!(s.eval(&v(&[1.0, 0.0])).unwrap(), 2f64.sqrt(), max_relative = 1e-10);
        let c = extract_norm2(&MatrixNormSpec::MaxColSum, &b);
        assert_relative_eq!(c.eval(&v(&[1.0, 2.0])).unwrap(), 3.0, max_relative = 1e-15);
        let r = extract_norm2(&MatrixNormSpec::MaxRowSum, &b);
        assert_relative_eq!(r.eval(&v(&[1.0, 2.0])).unwrap(), 4.0, max_relative = 1e-15);
    }

    #[test]
    fn extracted_norm1_examples() {
        let b = b2();
        let c = extract_norm1(&MatrixNormSpec::MaxColSum, &b);
        assert_relative_eq!(c.eval(&v(&[1.0, 2.0])).unwrap(), 3.0, max_relative = 1e-9);
        let s = extract_norm1(&MatrixNormSpec::Spectral, &b);
        assert_relative_eq!(s.eval(&v(&[1.0, 0.0])).unwrap(), 2f64.sqrt(), max_relative = 1e-9);
        let sigma = extract_norm1(&MatrixNormSpec::EntrywiseSum, &b);
        assert_relative_eq!(sigma.eval(&v(&[1.0, 2.0])).unwrap(), 4.0, max_relative = 1e-12);
        assert_eq!(sigma.eval(&Vector::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn extracted_norm1_of_entrywise_max_is_l1() {
        // m(C_y) = ℓ∞(y) and max{ℓ∞(Bx) : max|b_ij| ≤ 1} = ℓ₁(x).
        let b = b2();
        let m = extract_norm1(&MatrixNormSpec::EntrywiseMax, &b);
        let mut rng = RandomStream::new(8);
        for _ in 0..10 {
            let x = rng.complex_gaussian_vector(2);
            let want = l1().eval(&x).unwrap();
            let got = m.eval(&x).unwrap();
            assert!(got <= want * (1.0 + 1e-9));
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn hints_only_raise_norm1() {
        let b = b2();
        let x = v(&[1.0, -2.0]);
        let plain = norm1_value(&MatrixNormSpec::EntrywiseSum, &x, &b, &[]).unwrap();
        let hinted = norm1_value(
            &MatrixNormSpec::EntrywiseSum,
            &x,
            &b,
            &[Matrix::ones(2), Matrix::zeros(2)],
        )
        .unwrap();
        assert!(hinted.value >= plain.value);
    }

    #[test]
    fn alpha_identity_examples() {
        let b = OptBudget::for_dim(2);
        let r = alpha_identity_check(&GIndPair::new(l1(), l1()), &v(&[1.0, 2.0]), &b).unwrap();
        assert_relative_eq!(r.lhs, 3.0, max_relative = 1e-12);
        assert_relative_eq!(r.rhs, 3.0, max_relative = 1e-12);
        assert!(r.holds);
        let r = alpha_identity_check(&GIndPair::new(linf(), l2()), &v(&[1.0, 0.0]), &b).unwrap();
        assert_relative_eq!(r.lhs, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.rhs, 2.0, max_relative = 1e-12);
        let r = alpha_identity_check(&GIndPair::new(l2(), l2()), &Vector::zeros(2), &b).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn probe_examples() {
        let b = OptBudget::for_dim(2).with_seed(1);
        let mut rng = RandomStream::new(7);
        let r = minimality_probe(&MatrixNormSpec::EntrywiseSum, 2, 10, &b, &mut rng).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::GapFound);
        assert!((r.max_gap_ratio - 0.5f64.sqrt()).abs() < 1e-3, "{}", r.max_gap_ratio);
        assert_eq!(r.witness, Matrix::from_real(&[&[1.0, 1.0], &[1.0, -1.0]]));

        let r = minimality_probe(&MatrixNormSpec::max_col_row(), 2, 10, &b, &mut rng).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::GapFound);
        assert!((r.max_gap_ratio - 0.5).abs() < 1e-3);
        assert_eq!(r.witness, Matrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]));

        let r = minimality_probe(&MatrixNormSpec::MaxColSum, 2, 10, &b, &mut rng).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::NoGapFound);
        assert!(r.max_gap_ratio >= 1.0 - GAP_THRESHOLD);
    }

    #[test]
    fn probe_witness_replays() {
        let b = OptBudget::for_dim(2).with_seed(3);
        let r = minimality_probe(
            &MatrixNormSpec::EntrywiseSum,
            2,
            5,
            &b,
            &mut RandomStream::new(11),
        )
        .unwrap();
        let ext = extract(&MatrixNormSpec::EntrywiseSum, &OptBudget::nested(2).with_seed(3)).unwrap();
        let again = reconstruction_ratio(&ext, &r.witness, &b).unwrap();
        assert!((again - r.max_gap_ratio).abs() <= 1e-9);
    }

    #[test]
    fn probe_rejects_zero_trials() {
        let b = OptBudget::for_dim(2);
        assert!(minimality_probe(&MatrixNormSpec::Spectral, 2, 0, &b, &mut RandomStream::new(0))
            .is_err());
    }

    #[test]
    fn spectral_extraction_is_scaled_l2() {
        let b = OptBudget::nested(3);
        let ext = extract(&MatrixNormSpec::Spectral, &b).unwrap();
        let mut rng = RandomStream::new(4);
        for _ in 0..30 {
            let x = rng.complex_gaussian_vector(3);
            let want = 3f64.sqrt() * x.l2();
            assert_relative_eq!(ext.norm2.eval(&x).unwrap(), want, max_relative = 1e-6);
            assert_relative_eq!(ext.norm1.eval(&x).unwrap(), want, max_relative = 1e-6);
        }
    }

    #[test]
    fn upper_bound_law_on_catalog() {
        let outer = OptBudget::nested(2);
        let mut rng = RandomStream::new(21);
        for source in [
            MatrixNormSpec::EntrywiseSum,
            MatrixNormSpec::EntrywiseMax,
            MatrixNormSpec::max_col_row(),
        ] {
            let ext = extract(&source, &OptBudget::nested(2)).unwrap();
            for _ in 0..5 {
                let a = random_test_matrix(2, &mut rng);
                let r = reconstruct(&ext, &a, &outer).unwrap().value;
                let na = source.eval(&a, &outer).unwrap();
                assert!(r <= na * (1.0 + 1e-6), "{source:?}: {r} > {na}");
            }
        }
    }
}
