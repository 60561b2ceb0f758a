//! Property suites for the submultiplicativity criterion, the scaling
//! uniqueness of g-ind pairs, norm extraction and the introductory
//! examples. Every suite is a deterministic function of its inputs and seed.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::extraction::{
    alpha_identity_check, deterministic_probes, extract, minimality_probe, random_test_matrix,
    reconstruct, ProbeVerdict,
};
use crate::gind::{chain_compare, gind_eval, GIndPair};
use crate::linalg::{Matrix, RandomStream, Vector};
use crate::matrix_norms::{AlgebraClass, MatrixNormSpec};
use crate::sphere_opt::OptBudget;
use crate::vector_norms::{dominance_check, l1, l2, linf, VectorNormSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    Vector(Vector),
    Matrix(Matrix),
    Matrices(Vec<Matrix>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub description: String,
    pub status: CaseStatus,
    pub witness: Option<Witness>,
    pub values: Vec<NamedValue>,
}

impl CaseReport {
    fn new(description: impl Into<String>, status: CaseStatus) -> Self {
        CaseReport {
            description: description.into(),
            status,
            witness: None,
            values: Vec::new(),
        }
    }

    fn value(mut self, name: &str, value: f64) -> Self {
        self.values.push(NamedValue {
            name: name.to_string(),
            value,
        });
        self
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|v| v.name == name).map(|v| v.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != CaseStatus::Fail)
    }

    pub fn has_failure(&self) -> bool {
        !self.passed()
    }
}

fn finish(name: &str, seed: u64, cases: Vec<CaseReport>, start: Instant) -> SuiteReport {
    SuiteReport {
        suite_name: name.to_string(),
        seed,
        cases,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Relative gap `|a − b| / max(|a|, |b|)`, zero when both vanish.
fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub const SUBMULT_SLACK: f64 = 1e-9;
const DOMINANCE_SAMPLES: usize = 256;

/// `g(AB) / (g(A)·g(B))` with the exactness of the three evaluations.
fn product_ratio(
    pair: &GIndPair,
    a: &Matrix,
    b: &Matrix,
    budget: &OptBudget,
) -> Result<(f64, f64, f64, bool)> {
    let ga = gind_eval(pair, a, budget)?;
    let gb = gind_eval(pair, b, budget)?;
    let gab = gind_eval(pair, &a.matmul(b)?, budget)?;
    let exact = ga.exactness.is_exact() && gb.exactness.is_exact();
    Ok((gab.value, ga.value, gb.value, exact))
}

/// Submultiplicativity of `‖·‖_{1,2}` against dominance `‖·‖₁ ≤ ‖·‖₂`.
pub fn verify_lemma21(
    pair: &GIndPair,
    n: usize,
    trials: usize,
    rng: &mut RandomStream,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let seed = rng.seed();
    let budget = OptBudget::for_dim(n).with_seed(rng.next_u64());
    let dom = dominance_check(
        &pair.norm1,
        &pair.norm2,
        n,
        DOMINANCE_SAMPLES,
        &mut rng.child(0),
    )?;
    let mut cases = vec![{
        let c = CaseReport::new(
            if dom.dominated {
                "dominance: norm1 <= norm2 on all samples"
            } else {
                "dominance: norm1 exceeds norm2 somewhere"
            },
            CaseStatus::Pass,
        )
        .value("max_ratio", dom.max_ratio)
        .value("samples_used", dom.samples_used as f64);
        match &dom.counterexample {
            Some(x) => c.witness(Witness::Vector(x.clone())),
            None => c,
        }
    }];

    if dom.dominated {
        let streams = rng.child(1);
        let results: Vec<(Matrix, Matrix, (f64, f64, f64, bool))> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut s = streams.child(i as u64);
                let a = random_test_matrix(n, &mut s);
                let b = random_test_matrix(n, &mut s);
                let r = product_ratio(pair, &a, &b, &budget)?;
                Ok((a, b, r))
            })
            .collect::<Result<_>>()?;
        let mut worst: Option<usize> = None;
        let mut max_ratio: f64 = 0.0;
        for (i, (_, _, (gab, ga, gb, _))) in results.iter().enumerate() {
            let ratio = gab / (ga * gb);
            if ratio > max_ratio {
                max_ratio = ratio;
                worst = Some(i);
            }
        }
        let violated = max_ratio > 1.0 + SUBMULT_SLACK;
        let mut case = CaseReport::new(
            format!("submultiplicativity on {trials} random products"),
            CaseStatus::Pass,
        )
        .value("max_product_ratio", max_ratio)
        .value("trials", trials as f64);
        if violated {
            let (a, b, (_, _, _, exact)) = &results[worst.expect("violation has an index")];
            case.status = if *exact {
                CaseStatus::Fail
            } else {
                CaseStatus::Inconclusive
            };
            case.description = format!(
                "submultiplicativity violated although dominated ({})",
                if *exact {
                    "exact certificates"
                } else {
                    "factor norms are lower bounds"
                }
            );
            case = case.witness(Witness::Matrices(vec![a.clone(), b.clone()]));
        }
        cases.push(case);
    } else {
        let x0 = dom
            .counterexample
            .clone()
            .expect("counterexample when not dominated");
        let mut candidates = vec![Matrix::ones(n)];
        if let Some(f) = pair.norm1.norming_functional(&x0)? {
            candidates.push(Matrix::outer(&x0, &f)?);
        }
        candidates.push(crate::extraction::column_replicate(&x0));
        for j in 0..n {
            candidates.push(crate::extraction::column_embed(&x0, j)?);
        }
        let mut best: Option<(Matrix, f64, f64, f64)> = None;
        for a in candidates {
            let (gab, ga, _, _) = product_ratio(pair, &a, &a, &budget)?;
            let ratio = if ga > 0.0 { gab / (ga * ga) } else { 0.0 };
            if best.as_ref().is_none_or(|(_, r, _, _)| ratio > *r) {
                best = Some((a, ratio, gab, ga));
            }
        }
        let (a, _, gab, ga) = best.expect("at least one candidate");
        let found = gab > ga * ga * (1.0 + SUBMULT_SLACK);
        cases.push(
            CaseReport::new(
                if found {
                    "submultiplicativity violated at A = B"
                } else {
                    "no submultiplicativity witness found"
                },
                if found {
                    CaseStatus::Pass
                } else {
                    CaseStatus::Inconclusive
                },
            )
            .value("norm_ab", gab)
            .value("norm_a", ga)
            .value("norm_b", ga)
            .witness(Witness::Matrices(vec![a.clone(), a])),
        );
    }
    Ok(finish("lemma21", seed, cases, start))
}

pub const LEMMA22_RTOL: f64 = 1e-9;

/// Whether two pairs are proportional, against whether their g-ind norms agree.
pub fn verify_lemma22(
    pair_a: &GIndPair,
    pair_b: &GIndPair,
    n: usize,
    trials: usize,
    rng: &mut RandomStream,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let seed = rng.seed();
    let budget = OptBudget::for_dim(n).with_seed(rng.next_u64());
    let reference = Vector::ones(n);
    let denom = pair_b.norm1.eval(&reference)?;
    let numer = pair_a.norm1.eval(&reference)?;
    if denom == 0.0 || numer == 0.0 {
        return Err(LabError::DegenerateReference(
            "a norm vanished at the all-ones reference point".into(),
        ));
    }
    let gamma = numer / denom;

    let mut points = vec![reference];
    let mut s = rng.child(0);
    points.extend((0..trials).map(|_| s.complex_gaussian_vector(n)));
    let mut dev1: f64 = 0.0;
    let mut dev2: f64 = 0.0;
    let mut worst_point = points[0].clone();
    for x in &points {
        let d1 = rel_dev(pair_a.norm1.eval(x)?, gamma * pair_b.norm1.eval(x)?);
        let d2 = rel_dev(pair_a.norm2.eval(x)?, gamma * pair_b.norm2.eval(x)?);
        if d1.max(d2) > dev1.max(dev2) {
            worst_point = x.clone();
        }
        dev1 = dev1.max(d1);
        dev2 = dev2.max(d2);
    }
    let proportional = dev1 <= LEMMA22_RTOL && dev2 <= LEMMA22_RTOL;
    let mut prop_case = CaseReport::new(
        if proportional {
            "both slots proportional with a common factor"
        } else {
            "slots are not proportional with a common factor"
        },
        CaseStatus::Pass,
    )
    .value("gamma_hat", gamma)
    .value("max_dev_norm1", dev1)
    .value("max_dev_norm2", dev2);
    if !proportional {
        prop_case = prop_case.witness(Witness::Vector(worst_point));
    }

    let mut matrices = vec![Matrix::ones(n), Matrix::identity(n)];
    for i in 0..n {
        for j in 0..n {
            matrices.push(Matrix::unit(n, i, j));
        }
    }
    let streams = rng.child(1);
    matrices.extend((0..trials).map(|i| random_test_matrix(n, &mut streams.child(i as u64))));
    let values: Vec<(f64, f64, bool)> = matrices
        .par_iter()
        .map(|m| {
            let ga = gind_eval(pair_a, m, &budget)?;
            let gb = gind_eval(pair_b, m, &budget)?;
            Ok((
                ga.value,
                gb.value,
                ga.exactness.is_exact() && gb.exactness.is_exact(),
            ))
        })
        .collect::<Result<_>>()?;
    // First matrix where the two g-ind values differ.
    let differing = values
        .iter()
        .position(|(a, b, _)| rel_dev(*a, *b) > LEMMA22_RTOL);
    let max_dev = values
        .iter()
        .map(|(a, b, _)| rel_dev(*a, *b))
        .fold(0.0, f64::max);

    let mut gind_case = match (proportional, differing) {
        (true, None) => CaseReport::new("scaled and equal", CaseStatus::Pass),
        (false, Some(_)) => CaseReport::new("not scaled and unequal", CaseStatus::Pass),
        (true, Some(k)) => CaseReport::new(
            "inconsistent: proportional pairs with different g-ind values",
            if values[k].2 {
                CaseStatus::Fail
            } else {
                CaseStatus::Inconclusive
            },
        ),
        (false, None) => CaseReport::new(
            "not scaled, but no differing matrix found",
            CaseStatus::Inconclusive,
        ),
    }
    .value("max_gind_dev", max_dev)
    .value("matrices", matrices.len() as f64);
    if let Some(k) = differing {
        gind_case = gind_case
            .value("gind_a", values[k].0)
            .value("gind_b", values[k].1)
            .witness(Witness::Matrix(matrices[k].clone()));
    }
    Ok(finish("lemma22", seed, vec![prop_case, gind_case], start))
}

pub const AXIOM_RTOL: f64 = 1e-6;
pub const UPPER_BOUND_RTOL: f64 = 1e-6;
pub const ROUND_TRIP_RTOL: f64 = 1e-6;
const AXIOM_POINTS: usize = 20;

/// Norm axioms for one extracted norm at random points: the largest relative
/// violation of homogeneity and of the triangle inequality, whether
/// positivity held, and the point with the largest violation.
fn axiom_violation(
    spec: &VectorNormSpec,
    n: usize,
    rng: &mut RandomStream,
) -> Result<(f64, f64, bool, Vector)> {
    let mut homog: f64 = 0.0;
    let mut triangle: f64 = 0.0;
    let mut positive = spec.eval(&Vector::zeros(n))? == 0.0;
    let mut worst = (0.0, Vector::zeros(n));
    for _ in 0..AXIOM_POINTS {
        let x = rng.complex_gaussian_vector(n);
        let y = rng.complex_gaussian_vector(n);
        let alpha = rng.complex_gaussian();
        let nx = spec.eval(&x)?;
        let ny = spec.eval(&y)?;
        positive &= nx > 0.0 && ny > 0.0;
        let h = rel_dev(spec.eval(&x.scale(alpha))?, alpha.norm() * nx);
        let t = (spec.eval(&(&x + &y))? - nx - ny) / (nx + ny);
        if h.max(t) > worst.0 {
            worst = (h.max(t), x.clone());
        }
        homog = homog.max(h);
        triangle = triangle.max(t);
    }
    Ok((homog, triangle.max(0.0), positive, worst.1))
}

/// Extraction, the upper-bound law, the minimality probe and, when no gap is
/// found, the round trip and equality of the extracted pair.
pub fn verify_theorem23(
    source: &MatrixNormSpec,
    n: usize,
    trials: usize,
    budget: &OptBudget,
    rng: &mut RandomStream,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let seed = rng.seed();
    let ext = extract(source, &OptBudget::nested(n).with_seed(budget.seed))?;
    let mut cases = Vec::new();

    for (label, spec, k) in [("norm1", &ext.norm1, 0u64), ("norm2", &ext.norm2, 1)] {
        let (homog, triangle, positive, worst_x) = axiom_violation(spec, n, &mut rng.child(k))?;
        let ok = homog <= AXIOM_RTOL && triangle <= AXIOM_RTOL && positive;
        // Only an exactly evaluated norm can certify a violation.
        let status = match (ok, spec.is_lower_bound()) {
            (true, _) => CaseStatus::Pass,
            (false, true) => CaseStatus::Inconclusive,
            (false, false) => CaseStatus::Fail,
        };
        let mut case = CaseReport::new(format!("extracted {label} satisfies the norm axioms"), status)
            .value("homogeneity_dev", homog)
            .value("triangle_excess", triangle);
        if status == CaseStatus::Fail {
            case = case.witness(Witness::Vector(worst_x));
        }
        cases.push(case);
    }

    let mut matrices = deterministic_probes(n);
    let streams = rng.child(2);
    matrices.extend((0..trials).map(|i| random_test_matrix(n, &mut streams.child(i as u64))));
    let pairs: Vec<(f64, f64)> = matrices
        .par_iter()
        .map(|a| {
            let r = reconstruct(&ext, a, budget)?.value;
            Ok((r, source.eval(a, &ext.budget)?))
        })
        .collect::<Result<_>>()?;
    let worst_excess = pairs
        .iter()
        .enumerate()
        .map(|(i, (r, na))| (i, r / na - 1.0))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one matrix");
    let mut upper = CaseReport::new(
        "upper bound: g-ind of extracted pair <= N",
        if worst_excess.1 <= UPPER_BOUND_RTOL {
            CaseStatus::Pass
        } else {
            CaseStatus::Fail
        },
    )
    .value("max_excess", worst_excess.1.max(0.0))
    .value("matrices", matrices.len() as f64);
    if worst_excess.1 > UPPER_BOUND_RTOL {
        upper = upper.witness(Witness::Matrix(matrices[worst_excess.0].clone()));
    }
    cases.push(upper);

    let probe = minimality_probe(source, n, trials, budget, &mut rng.child(3))?;
    let gap = probe.verdict == ProbeVerdict::GapFound;
    cases.push(
        CaseReport::new(
            if gap {
                "minimality probe: gap found, N is not minimal"
            } else {
                "minimality probe: no gap found"
            },
            CaseStatus::Pass,
        )
        .value("max_gap_ratio", probe.max_gap_ratio)
        .value("trials", probe.trials as f64)
        .witness(Witness::Matrix(probe.witness.clone())),
    );

    if !gap {
        let (k, dev) = pairs
            .iter()
            .map(|(r, na)| rel_dev(*r, *na))
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one matrix");
        let mut case = CaseReport::new(
            "round trip: g-ind of extracted pair equals N",
            if dev <= ROUND_TRIP_RTOL {
                CaseStatus::Pass
            } else {
                CaseStatus::Inconclusive
            },
        )
        .value("max_rel_dev", dev);
        if dev > ROUND_TRIP_RTOL {
            case = case.witness(Witness::Matrix(matrices[k].clone()));
        }
        cases.push(case);

        if source.algebra_class() == AlgebraClass::KnownYes {
            let mut s = rng.child(4);
            let mut worst: f64 = 0.0;
            let mut worst_x = Vector::zeros(n);
            for _ in 0..trials.max(1) {
                let x = s.complex_gaussian_vector(n);
                let d = rel_dev(ext.norm1.eval(&x)?, ext.norm2.eval(&x)?);
                if d > worst {
                    worst = d;
                    worst_x = x;
                }
            }
            let mut case = CaseReport::new(
                "minimal algebra norm: extracted norm1 equals norm2",
                if worst <= ROUND_TRIP_RTOL {
                    CaseStatus::Pass
                } else {
                    CaseStatus::Inconclusive
                },
            )
            .value("max_rel_dev", worst);
            if worst > ROUND_TRIP_RTOL {
                case = case.witness(Witness::Vector(worst_x));
            }
            cases.push(case);
        }
    }
    Ok(finish("theorem23", seed, cases, start))
}

fn scaled(gamma: f64, inner: VectorNormSpec) -> VectorNormSpec {
    VectorNormSpec::Scaled {
        gamma,
        inner: Box::new(inner),
    }
}

const DEMO_DIM: usize = 2;
const DEMO_TRIALS: usize = 20;

type DemoCase = fn(&RandomStream) -> Result<CaseReport>;

/// Submultiplicativity of the entrywise sum, and the entrywise-max failure at J.
fn demo_entrywise(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n);
    let sigma = MatrixNormSpec::EntrywiseSum;
    let m = MatrixNormSpec::EntrywiseMax;
    let mut worst: f64 = 0.0;
    for i in 0..DEMO_TRIALS {
        let mut s = rng.child(i as u64);
        let a = random_test_matrix(n, &mut s);
        let b = random_test_matrix(n, &mut s);
        let ratio = sigma.eval(&a.matmul(&b)?, &budget)?
            / (sigma.eval(&a, &budget)? * sigma.eval(&b, &budget)?);
        worst = worst.max(ratio);
    }
    let j = Matrix::ones(n);
    let mj2 = m.eval(&j.matmul(&j)?, &budget)?;
    let mj = m.eval(&j, &budget)?;
    let ok = worst <= 1.0 + SUBMULT_SLACK && mj2 > mj * mj;
    Ok(CaseReport::new(
        "sigma is submultiplicative; entrywise max fails at A = B = J",
        if ok { CaseStatus::Pass } else { CaseStatus::Fail },
    )
    .value("sigma_max_product_ratio", worst)
    .value("m_of_j_squared", mj2)
    .value("m_of_j_squared_bound", mj * mj)
    .witness(Witness::Matrices(vec![j.clone(), j])))
}

/// The three classical induced norms as g-ind norms.
fn demo_induced(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n).with_seed(rng.seed());
    let mut case = CaseReport::new("l1, linf and l2 induce the column, row and spectral norms", CaseStatus::Pass);
    let mut all_ok = true;
    for (name, v, m) in [
        ("max_dev_col", l1(), MatrixNormSpec::MaxColSum),
        ("max_dev_row", linf(), MatrixNormSpec::MaxRowSum),
        ("max_dev_spectral", l2(), MatrixNormSpec::Spectral),
    ] {
        let pair = GIndPair::new(v.clone(), v);
        let mut worst: f64 = 0.0;
        for i in 0..DEMO_TRIALS {
            let a = random_test_matrix(n, &mut rng.child(i as u64));
            worst = worst.max(rel_dev(gind_eval(&pair, &a, &budget)?.value, m.eval(&a, &budget)?));
        }
        all_ok &= worst <= ROUND_TRIP_RTOL;
        case = case.value(name, worst);
    }
    if !all_ok {
        case.status = CaseStatus::Inconclusive;
    }
    Ok(case)
}

/// With α = ℓ∞, β = 2ℓ₂, γ = ℓ₂: ‖·‖_{γ,β} ≤ ‖·‖_{α,β}, strictly at J.
fn demo_non_minimal_gind(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n).with_seed(rng.seed());
    let ab = GIndPair::new(linf(), scaled(2.0, l2()));
    let gb = GIndPair::new(l2(), scaled(2.0, l2()));
    let mut dominated = true;
    for i in 0..DEMO_TRIALS {
        let a = random_test_matrix(n, &mut rng.child(i as u64));
        let small = gind_eval(&gb, &a, &budget)?.value;
        let big = gind_eval(&ab, &a, &budget)?.value;
        dominated &= small <= big * (1.0 + 1e-9);
    }
    let j = Matrix::ones(n);
    let small = gind_eval(&gb, &j, &budget)?.value;
    let big = gind_eval(&ab, &j, &budget)?.value;
    let strict = small < big * (1.0 - 1e-9);
    Ok(CaseReport::new(
        "g-ind (l2, 2 l2) lies below g-ind (linf, 2 l2), strictly at J",
        if dominated && strict {
            CaseStatus::Pass
        } else {
            CaseStatus::Inconclusive
        },
    )
    .value("gamma_beta_at_j", small)
    .value("alpha_beta_at_j", big)
    .witness(Witness::Matrix(j)))
}

/// Gaps for the entrywise sum and for max{column, row}.
fn demo_probes(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n).with_seed(rng.seed());
    let sigma = minimality_probe(&MatrixNormSpec::EntrywiseSum, n, DEMO_TRIALS, &budget, &mut rng.child(0))?;
    let cr = minimality_probe(&MatrixNormSpec::max_col_row(), n, DEMO_TRIALS, &budget, &mut rng.child(1))?;
    let both = sigma.verdict == ProbeVerdict::GapFound && cr.verdict == ProbeVerdict::GapFound;
    Ok(CaseReport::new(
        "sigma and max{column, row} are not minimal",
        if both {
            CaseStatus::Pass
        } else {
            CaseStatus::Inconclusive
        },
    )
    .value("sigma_gap_ratio", sigma.max_gap_ratio)
    .value("max_col_row_gap_ratio", cr.max_gap_ratio)
    .witness(Witness::Matrices(vec![sigma.witness, cr.witness])))
}

/// `‖C_x‖_{1,2} = α‖x‖₂` for a few pairs and points.
fn demo_alpha(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n).with_seed(rng.seed());
    let norms = [l1(), l2(), linf()];
    let mut s = rng.child(0);
    let mut worst: f64 = 0.0;
    let mut all = true;
    for a in &norms {
        for b in &norms {
            let x = s.complex_gaussian_vector(n);
            let r = alpha_identity_check(&GIndPair::new(a.clone(), b.clone()), &x, &budget)?;
            worst = worst.max(rel_dev(r.lhs, r.rhs));
            all &= r.holds;
        }
    }
    Ok(CaseReport::new(
        "column-replicate identity with the sum-functional constant",
        if all {
            CaseStatus::Pass
        } else {
            CaseStatus::Inconclusive
        },
    )
    .value("max_rel_dev", worst))
}

/// The chain `v21 ≤ v11, v22 ≤ v12` for the dominated pair (ℓ∞, ℓ₁) at J.
fn demo_chain(rng: &RandomStream) -> Result<CaseReport> {
    let n = DEMO_DIM;
    let budget = OptBudget::for_dim(n).with_seed(rng.seed());
    let j = Matrix::ones(n);
    let r = chain_compare(&GIndPair::new(linf(), l1()), &j, &budget)?;
    let reversed = chain_compare(&GIndPair::new(l1(), linf()), &j, &budget)?;
    Ok(CaseReport::new(
        "operator-norm chain for the dominated pair (linf, l1) at J",
        if r.chain_holds {
            CaseStatus::Pass
        } else {
            CaseStatus::Inconclusive
        },
    )
    .value("v21", r.v21)
    .value("v11", r.v11)
    .value("v22", r.v22)
    .value("v12", r.v12)
    .value("slack", r.slack)
    .value("reversed_pair_slack", reversed.slack)
    .witness(Witness::Matrix(j)))
}

/// The introductory examples, in order: entrywise norms, induced norms, a
/// non-minimal g-ind norm, minimality probes, the column-replicate identity
/// and the operator-norm chain.
pub fn paper_demo_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let root = RandomStream::new(seed);
    let demos: [DemoCase; 6] = [
        demo_entrywise,
        demo_induced,
        demo_non_minimal_gind,
        demo_probes,
        demo_alpha,
        demo_chain,
    ];
    let cases: Vec<CaseReport> = demos
        .par_iter()
        .enumerate()
        .map(|(k, demo)| demo(&root.child(k as u64)))
        .collect::<Result<_>>()?;
    Ok(finish("paper-demos", seed, cases, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lemma21_examples() {
        let r = verify_lemma21(&GIndPair::new(linf(), l1()), 2, 50, &mut RandomStream::new(1)).unwrap();
        assert!(r.cases.iter().all(|c| c.status == CaseStatus::Pass), "{r:?}");
        assert_eq!(r.cases.len(), 2);

        let r = verify_lemma21(&GIndPair::new(l1(), linf()), 2, 50, &mut RandomStream::new(1)).unwrap();
        let c = &r.cases[1];
        assert_eq!(c.status, CaseStatus::Pass);
        assert_eq!(c.get("norm_ab"), Some(2.0));
        assert_eq!(c.get("norm_a"), Some(1.0));
        assert_eq!(
            c.witness,
            Some(Witness::Matrices(vec![Matrix::ones(2), Matrix::ones(2)]))
        );

        let r = verify_lemma21(&GIndPair::new(l2(), l2()), 3, 20, &mut RandomStream::new(2)).unwrap();
        assert!(r.cases.iter().all(|c| c.status == CaseStatus::Pass));
    }

    #[test]
    fn lemma22_examples() {
        let a = GIndPair::new(scaled(3.0, linf()), scaled(6.0, l2()));
        let b = GIndPair::new(linf(), scaled(2.0, l2()));
        let r = verify_lemma22(&a, &b, 2, 20, &mut RandomStream::new(3)).unwrap();
        assert_relative_eq!(r.cases[0].get("gamma_hat").unwrap(), 3.0, max_relative = 1e-12);
        assert_eq!(r.cases[1].description, "scaled and equal");

        let c = GIndPair::new(l2(), scaled(2.0, l2()));
        let r = verify_lemma22(&b, &c, 2, 20, &mut RandomStream::new(3)).unwrap();
        let g = &r.cases[1];
        assert_eq!(g.description, "not scaled and unequal");
        assert_eq!(g.witness, Some(Witness::Matrix(Matrix::ones(2))));
        assert_relative_eq!(g.get("gind_a").unwrap(), 4.0 * 2f64.sqrt(), max_relative = 1e-6);
        assert_relative_eq!(g.get("gind_b").unwrap(), 4.0, max_relative = 1e-6);

        let r = verify_lemma22(&b, &b, 2, 5, &mut RandomStream::new(3)).unwrap();
        assert_eq!(r.cases[0].get("gamma_hat"), Some(1.0));
        assert_eq!(r.cases[1].description, "scaled and equal");
    }

    #[test]
    fn theorem23_examples() {
        let b = OptBudget::for_dim(2);
        let r = verify_theorem23(&MatrixNormSpec::Spectral, 2, 10, &b, &mut RandomStream::new(5)).unwrap();
        assert!(r.cases.iter().all(|c| c.status == CaseStatus::Pass), "{r:#?}");
        assert!(r.cases.iter().any(|c| c.description.starts_with("round trip")));
        assert!(r.cases.iter().any(|c| c.description.contains("norm1 equals norm2")));

        let r = verify_theorem23(&MatrixNormSpec::EntrywiseSum, 2, 10, &b, &mut RandomStream::new(5))
            .unwrap();
        assert!(r.passed());
        assert!(r.cases.iter().any(|c| c.description.contains("gap found")));
        assert!(!r.cases.iter().any(|c| c.description.starts_with("round trip")));

        let b3 = OptBudget::for_dim(3);
        let r = verify_theorem23(&MatrixNormSpec::MaxRowSum, 3, 5, &b3, &mut RandomStream::new(6))
            .unwrap();
        let rt = r
            .cases
            .iter()
            .find(|c| c.description.starts_with("round trip"))
            .expect("round trip case");
        assert_eq!(rt.status, CaseStatus::Pass);
    }

    #[test]
    fn demo_suite_cases() {
        let r = paper_demo_suite(42).unwrap();
        assert_eq!(r.cases.len(), 6);
        assert!(r.cases.iter().all(|c| c.status == CaseStatus::Pass), "{r:#?}");
        assert_eq!(r.cases[0].get("m_of_j_squared"), Some(2.0));
        assert_eq!(r.cases[0].get("m_of_j_squared_bound"), Some(1.0));
        assert_relative_eq!(r.cases[2].get("gamma_beta_at_j").unwrap(), 4.0, max_relative = 1e-9);
        assert_relative_eq!(
            r.cases[2].get("alpha_beta_at_j").unwrap(),
            4.0 * 2f64.sqrt(),
            max_relative = 1e-6
        );
        assert!((r.cases[3].get("sigma_gap_ratio").unwrap() - 0.5f64.sqrt()).abs() < 1e-3);
        assert!((r.cases[3].get("max_col_row_gap_ratio").unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn suites_replay() {
        let strip = |mut r: SuiteReport| {
            r.elapsed_ms = 0;
            r
        };
        let a = strip(paper_demo_suite(9).unwrap());
        let b = strip(paper_demo_suite(9).unwrap());
        assert_eq!(a, b);
    }
}
