//! Base test functions on an already transformed vector `z`.
//!
//! Every function here has its global minimum value 0. All but `rosenbrock`
//! attain it at `z = 0`; `rosenbrock` attains it at `z = 1` and
//! `rosenbrock_centered` at `z = 0`. Sums are arranged so the minimum is
//! exactly 0.0 in floating point, not merely close to it.

use std::f64::consts::PI;

/// Optimum of a single Schwefel 1.2.26 coordinate.
pub const SCHWEFEL_OPT: f64 = 420.968_746_227_503_6;

pub fn sphere(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

pub fn zakharov(z: &[f64]) -> f64 {
    let s1: f64 = z.iter().map(|v| v * v).sum();
    let s2: f64 = z.iter().enumerate().map(|(i, v)| 0.5 * (i + 1) as f64 * v).sum();
    s1 + s2 * s2 + s2.powi(4)
}

/// Standard Rosenbrock valley, minimum at all ones.
pub fn rosenbrock(z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

/// Rosenbrock shifted so the minimum sits at the origin.
pub fn rosenbrock_centered(z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| {
            let (a, b) = (w[0] + 1.0, w[1] + 1.0);
            100.0 * (a * a - b).powi(2) + w[0] * w[0]
        })
        .sum()
}

pub fn rastrigin(z: &[f64]) -> f64 {
    z.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn schwefel_term(t: f64, dim: usize) -> f64 {
    if t > 500.0 {
        let m = 500.0 - t % 500.0;
        m * m.abs().sqrt().sin() - (t - 500.0).powi(2) / (10_000.0 * dim as f64)
    } else if t < -500.0 {
        let m = t.abs() % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - (t + 500.0).powi(2) / (10_000.0 * dim as f64)
    } else {
        t * t.abs().sqrt().sin()
    }
}

/// Modified Schwefel with boundary penalties; `z = 0` maps to the optimum.
pub fn schwefel(z: &[f64]) -> f64 {
    let peak = SCHWEFEL_OPT * SCHWEFEL_OPT.sqrt().sin();
    z.iter()
        .map(|v| peak - schwefel_term(v + SCHWEFEL_OPT, z.len()))
        .sum()
}

/// `sin(pi * x)` that is exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

pub fn levy(z: &[f64]) -> f64 {
    let w: Vec<f64> = z.iter().map(|v| 1.0 + v / 4.0).collect();
    let d = w.len();
    let mut total = sin_pi(w[0]).powi(2);
    for wi in &w[..d - 1] {
        total += (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2));
    }
    let last = w[d - 1];
    total + (last - 1.0).powi(2) * (1.0 + sin_pi(2.0 * last).powi(2))
}

pub fn ackley(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let a = (-0.2 * (sphere(z) / d).sqrt()).exp();
    let b = (z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d).exp();
    (20.0 - 20.0 * a) + (1f64.exp() - b)
}

pub fn griewank(z: &[f64]) -> f64 {
    let sum: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = z
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    (1.0 - prod) + sum
}

pub fn elliptic(z: &[f64]) -> f64 {
    let d = z.len();
    if d == 1 {
        return z[0] * z[0];
    }
    z.iter()
        .enumerate()
        .map(|(i, v)| 1e6f64.powf(i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

pub fn bent_cigar(z: &[f64]) -> f64 {
    z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
}
