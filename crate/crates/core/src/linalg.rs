//! Dense complex vectors and square matrices, Hermitian top-eigenpair
//! computation, and the seeded random streams every sampler draws from.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const DEFAULT_EIG_TOL: f64 = 1e-10;
pub const DEFAULT_EIG_MAX_ITER: usize = 10_000;

/// Largest dimension the library accepts.
pub const MAX_DIM: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A complex n-vector.
#[derive(Clone, PartialEq)]
pub struct Vector {
    entries: Vec<Complex64>,
}

impl Vector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        assert!(!entries.is_empty(), "vectors have dimension >= 1");
        Vector { entries }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Vector::new(values.iter().map(|&v| c(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Vector::new(vec![Complex64::default(); n])
    }

    pub fn ones(n: usize) -> Self {
        Vector::new(vec![c(1.0, 0.0); n])
    }

    /// Standard basis vector e_j (zero-based index).
    pub fn basis(n: usize, j: usize) -> Self {
        let mut v = Vector::zeros(n);
        v.entries[j] = c(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.entries.iter()
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|z| z.norm())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, alpha: Complex64) -> Vector {
        Vector::new(self.entries.iter().map(|z| z * alpha).collect())
    }

    pub fn scale_real(&self, alpha: f64) -> Vector {
        Vector::new(self.entries.iter().map(|z| z * alpha).collect())
    }

    pub fn conj(&self) -> Vector {
        Vector::new(self.entries.iter().map(|z| z.conj()).collect())
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b * alpha)
                .collect(),
        )
    }

    /// Sesquilinear inner product `<self, x> = sum conj(self_i) x_i`.
    pub fn inner(&self, x: &Vector) -> Result<Complex64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&x.entries)
            .map(|(v, x)| v.conj() * x)
            .sum())
    }

    pub fn l2(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<usize> for Vector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.axpy(-1.0, rhs)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.iter().map(|z| (z.re, z.im)))
            .finish()
    }
}

/// An n×n complex matrix, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "matrices have dimension >= 1");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(LabError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for row in &rows {
            check_dim(n, row.len())?;
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for real test matrices.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| c(v, 0.0)).collect())
                .collect(),
        )
        .expect("square real matrix")
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| Complex64::default())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    /// The all-ones matrix J.
    pub fn ones(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| c(1.0, 0.0))
    }

    /// Single-entry matrix E_ij (zero-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Matrix::from_fn(n, |r, s| {
            if r == i && s == j {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    /// Rank-one matrix `u v*`, entries `u_i conj(v_j)`.
    pub fn outer(u: &Vector, v: &Vector) -> Result<Self> {
        check_dim(u.dim(), v.dim())?;
        Ok(Matrix::from_fn(u.dim(), |i, j| u[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, alpha: Complex64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * alpha)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        Ok(Matrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |H_ij - conj(H_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Embed `self` as the top-left block of an m×m zero matrix.
    pub fn pad_to(&self, m: usize) -> Matrix {
        assert!(m >= self.n);
        Matrix::from_fn(m, |i, j| {
            if i < self.n && j < self.n {
                self.get(i, j)
            } else {
                c(0.0, 0.0)
            }
        })
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.axpy(-1.0, rhs)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.rows()
                    .map(|r| r.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>()),
            )
            .finish()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LabError::DimensionMismatch { expected, found })
    }
}

/// Matrix-vector product `Ax`.
pub fn mat_apply(a: &Matrix, x: &Vector) -> Result<Vector> {
    check_dim(a.dim(), x.dim())?;
    Ok(Vector::new(
        a.rows()
            .map(|row| row.iter().zip(x.iter()).map(|(a, x)| a * x).sum())
            .collect(),
    ))
}

/// Top eigenpair of a Hermitian positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalue: f64,
    pub eigenvector: Vector,
    pub iterations: usize,
    /// `‖Hv − λv‖₂` for unit `v`, measured on H scaled to unit largest entry.
    pub residual: f64,
}

/// Squarings attempted before falling back to plain power steps. 2^48
/// effective iterations separate any two eigenvalues whose ratio differs
/// from one by more than about 1e-13.
const MAX_SQUARINGS: usize = 48;

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration.
///
/// The iteration runs on repeated squares `H, H², H⁴, …` of the scaled
/// matrix, so the number of matrix products grows only logarithmically in
/// the inverse spectral gap; the eigenvalue is the Rayleigh quotient of the
/// original matrix. If the squared iterates stall, plain power steps with
/// `H` continue up to `max_iter` total iterations.
pub fn hermitian_top_eig(
    h: &Matrix,
    tol: f64,
    max_iter: usize,
    rng: &mut RandomStream,
) -> Result<EigResult> {
    let n = h.dim();
    let scale = h.max_abs();
    let deviation = h.hermitian_deviation();
    if deviation > 1e-12 * scale.max(1.0) {
        return Err(LabError::NotHermitian { deviation });
    }
    if scale == 0.0 {
        return Ok(EigResult {
            eigenvalue: 0.0,
            eigenvector: Vector::basis(n, 0),
            iterations: 0,
            residual: 0.0,
        });
    }
    let hn = h.scale_real(1.0 / scale);
    let start = rng.complex_gaussian_vector(n);

    let rayleigh = |v: &Vector| -> (f64, f64) {
        let hv = mat_apply(&hn, v).expect("square");
        let lambda = v.inner(&hv).expect("same dim").re;
        let residual = hv.axpy(-lambda, v).l2();
        (lambda, residual)
    };

    let mut iterations = 0;
    let mut power = hn.clone();
    let mut best: Option<(f64, Vector, f64)> = None;
    for _ in 0..MAX_SQUARINGS.min(max_iter) {
        iterations += 1;
        if let Some(v) = normalized(mat_apply(&power, &start)?).or_else(|| dominant_column(&power))
        {
            let (lambda, residual) = rayleigh(&v);
            let improved = best.as_ref().is_none_or(|(_, _, r)| residual < *r);
            if improved {
                best = Some((lambda, v, residual));
            }
            if residual <= tol {
                break;
            }
        }
        let next = power.matmul(&power)?;
        let m = next.max_abs();
        if m == 0.0 || !m.is_finite() {
            break;
        }
        power = next.scale_real(1.0 / m);
    }

    let (mut lambda, mut v, mut residual) =
        best.unwrap_or_else(|| (0.0, Vector::basis(n, 0), f64::INFINITY));
    while residual > tol && iterations < max_iter {
        iterations += 1;
        match normalized(mat_apply(&hn, &v)?) {
            Some(next) => v = next,
            None => break,
        }
        (lambda, residual) = rayleigh(&v);
    }
    if residual > tol {
        return Err(LabError::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(EigResult {
        eigenvalue: (lambda * scale).max(0.0),
        eigenvector: v,
        iterations,
        residual,
    })
}

fn normalized(v: Vector) -> Option<Vector> {
    let norm = v.l2();
    (norm > 0.0 && norm.is_finite()).then(|| v.scale_real(1.0 / norm))
}

fn dominant_column(m: &Matrix) -> Option<Vector> {
    (0..m.dim())
        .map(|j| m.column(j))
        .max_by(|a, b| a.l2().total_cmp(&b.l2()))
        .and_then(normalized)
}

/// Deterministic random stream: a ChaCha8 generator keyed by a 64-bit seed.
///
/// `counter` is the generator's word position, so `(seed, counter)` pins the
/// next draw on every platform. Child streams depend only on the parent seed
/// and the child index, never on how much the parent has consumed.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream positioned at `counter` (in 32-bit words) past the start.
    pub fn at(seed: u64, counter: u128) -> Self {
        let mut s = RandomStream::new(seed);
        s.rng.set_word_pos(counter);
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn child(&self, index: u64) -> RandomStream {
        RandomStream::new(split_seed(self.seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian (unit variance in total).
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        c(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn unit_phase(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.uniform())
    }

    pub fn complex_gaussian_vector(&mut self, n: usize) -> Vector {
        Vector::new((0..n).map(|_| self.complex_gaussian()).collect())
    }

    pub fn complex_gaussian_matrix(&mut self, n: usize) -> Matrix {
        Matrix::from_fn(n, |_, _| self.complex_gaussian())
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }
}

/// SplitMix64 finalizer applied to `(seed, index)`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|z| ComplexRepr { re: z.re, im: z.im }))
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<ComplexRepr>::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom("empty vector"));
        }
        Ok(Vector::new(raw.into_iter().map(|z| c(z.re, z.im)).collect()))
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: Vec<Vec<ComplexRepr>>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self
                .rows()
                .map(|r| r.iter().map(|z| ComplexRepr { re: z.re, im: z.im }).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixRepr::deserialize(d)?;
        Matrix::from_rows(
            raw.rows
                .into_iter()
                .map(|r| r.into_iter().map(|z| c(z.re, z.im)).collect())
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
