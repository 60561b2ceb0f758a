//! Oracles computed without the library's optimizers or eigen-solver.
#![allow(dead_code)]

use normlab::{Matrix, Vector};
use num_complex::Complex64;

pub fn max_col_sum(a: &Matrix) -> f64 {
    (0..a.dim())
        .map(|j| (0..a.dim()).map(|i| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_row_sum(a: &Matrix) -> f64 {
    (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn gram(a: &Matrix) -> Vec<Vec<Complex64>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.get(k, i).conj() * a.get(k, j)).sum())
                .collect()
        })
        .collect()
}

/// Largest eigenvalue of a 2×2 or 3×3 Hermitian matrix from its
/// characteristic polynomial (quadratic formula / trigonometric cubic
/// solution), polished by Newton steps on the polynomial.
pub fn hermitian_lambda_max(h: &[Vec<Complex64>]) -> f64 {
    match h.len() {
        1 => h[0][0].re,
        2 => {
            let tr = h[0][0].re + h[1][1].re;
            let det = h[0][0].re * h[1][1].re - h[0][1].norm_sqr();
            (tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0
        }
        3 => {
            let d = |i: usize| h[i][i].re;
            let tr = d(0) + d(1) + d(2);
            let minors = d(0) * d(1) - h[0][1].norm_sqr() + d(0) * d(2) - h[0][2].norm_sqr()
                + d(1) * d(2)
                - h[1][2].norm_sqr();
            let det = (h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
                - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
                + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]))
                .re;
            // λ³ + aλ² + bλ + c
            let (a, b, c) = (-tr, minors, -det);
            let p = b - a * a / 3.0;
            let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
            let mut lambda = if p.abs() < 1e-300 {
                -a / 3.0
            } else {
                let m = 2.0 * (-p / 3.0).sqrt();
                let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
                m * (arg.acos() / 3.0).cos() - a / 3.0
            };
            for _ in 0..3 {
                let f = ((lambda + a) * lambda + b) * lambda + c;
                let df = (3.0 * lambda + 2.0 * a) * lambda + b;
                if df.abs() > 0.0 {
                    lambda -= f / df;
                }
            }
            lambda
        }
        _ => panic!("oracle supports n <= 3"),
    }
}

pub fn spectral(a: &Matrix) -> f64 {
    hermitian_lambda_max(&gram(a)).max(0.0).sqrt()
}

pub fn lp(x: &Vector, p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else {
        x.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn apply(a: &Matrix, x: &Vector) -> Vector {
    Vector::new(
        (0..a.dim())
            .map(|i| (0..a.dim()).map(|j| a.get(i, j) * x[j]).sum())
            .collect(),
    )
}

/// `max f(x)/g(x)` over ℂ² by enumerating `x = (cos t, e^{iφ} sin t)` on a
/// grid of about 10⁵ points (global phase and scale do not matter), then
/// repeatedly refining a shrinking grid around the best point.
pub fn dense_ratio_max_2d(ratio: impl Fn(&Vector) -> f64) -> f64 {
    let point = |t: f64, phi: f64| {
        Vector::new(vec![
            Complex64::new(t.cos(), 0.0),
            Complex64::from_polar(t.sin(), phi),
        ])
    };
    let (nt, nphi) = (250usize, 400usize);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=nt {
        let t = half_pi * i as f64 / nt as f64;
        for k in 0..nphi {
            let phi = two_pi * k as f64 / nphi as f64;
            let v = ratio(&point(t, phi));
            if v > best.0 {
                best = (v, t, phi);
            }
        }
    }
    let (mut dt, mut dphi) = (half_pi / nt as f64, two_pi / nphi as f64);
    for _ in 0..40 {
        let (_, t0, p0) = best;
        for i in -4i32..=4 {
            for k in -4i32..=4 {
                let t = (t0 + dt * i as f64 / 2.0).clamp(0.0, half_pi);
                let phi = p0 + dphi * k as f64 / 2.0;
                let v = ratio(&point(t, phi));
                if v > best.0 {
                    best = (v, t, phi);
                }
            }
        }
        dt *= 0.5;
        dphi *= 0.5;
    }
    best.0
}
