//! Shift/rotation instances and their text file format.
//!
//! File layout, whitespace separated:
//!
//! ```text
//! D
//! o_1 ... o_D
//! M_11 ... M_1D
//! ...
//! M_D1 ... M_DD
//! f_bias
//! ```

use std::fmt::Write as _;
use std::path::Path;

use mco_core::{Bounds, Draws, RngStream};
use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Maximum entry of `|MᵀM - I|` accepted for a rotation.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Default search interval of the benchmark families.
pub const BENCH_LOWER: f64 = -100.0;
pub const BENCH_UPPER: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    pub shift: Vec<f64>,
    /// Row-major D×D orthogonal matrix.
    pub rotation: DMatrix<f64>,
    pub bias: f64,
}

impl TransformSpec {
    /// Zero shift, identity rotation.
    pub fn identity(dim: usize, bias: f64) -> Self {
        Self {
            shift: vec![0.0; dim],
            rotation: DMatrix::identity(dim, dim),
            bias,
        }
    }

    pub fn new(shift: Vec<f64>, rotation: DMatrix<f64>, bias: f64) -> Result<Self> {
        let t = Self { shift, rotation, bias };
        t.validate()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::InvalidTransform("zero dimensions".into()));
        }
        if self.rotation.nrows() != d || self.rotation.ncols() != d {
            return Err(Error::InvalidTransform(format!(
                "rotation is {}x{}, shift has {d} entries",
                self.rotation.nrows(),
                self.rotation.ncols()
            )));
        }
        if !self.bias.is_finite() || self.shift.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTransform("non-finite shift or bias".into()));
        }
        let dev = orthogonality_error(&self.rotation);
        if dev.is_nan() || dev > ORTHOGONALITY_TOL {
            return Err(Error::InvalidTransform(format!(
                "rotation is not orthogonal: max |MᵀM - I| = {dev:e}"
            )));
        }
        Ok(())
    }

    /// `M (x - o)`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let diff: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        (0..d)
            .map(|r| (0..d).map(|c| self.rotation[(r, c)] * diff[c]).sum())
            .collect()
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::InvalidTransform(format!("unexpected end of input reading {what}")))?;
            tok.parse::<f64>()
                .map_err(|_| Error::InvalidTransform(format!("bad number {tok:?} in {what}")))
        };
        let d_raw = next("dimension")?;
        if d_raw < 1.0 || d_raw.fract() != 0.0 {
            return Err(Error::InvalidTransform(format!("dimension must be a positive integer, got {d_raw}")));
        }
        let d = d_raw as usize;
        let shift = (0..d).map(|_| next("shift")).collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(d * d);
        for _ in 0..d * d {
            rows.push(next("rotation")?);
        }
        let bias = next("bias")?;
        if tokens.next().is_some() {
            return Err(Error::InvalidTransform("trailing tokens after bias".into()));
        }
        Self::new(shift, DMatrix::from_row_slice(d, d, &rows), bias)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Renders the text format with round-trip precision.
    pub fn to_text(&self) -> String {
        let d = self.dim();
        let mut out = format!("{d}\n");
        let join = |v: &mut dyn Iterator<Item = f64>| v.map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "{}", join(&mut self.shift.iter().copied()));
        for r in 0..d {
            let _ = writeln!(out, "{}", join(&mut (0..d).map(|c| self.rotation[(r, c)])));
        }
        let _ = writeln!(out, "{:e}", self.bias);
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// Largest entry of `|MᵀM - I|`.
pub fn orthogonality_error(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let d = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..d {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((g[(r, c)] - target).abs());
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

/// Seeded transform on the default benchmark box.
pub fn generate_transform(dim: usize, seed: u64) -> TransformSpec {
    let bounds = Bounds::uniform(dim.max(1), BENCH_LOWER, BENCH_UPPER).expect("static bounds are valid");
    generate_transform_in(&bounds, seed)
}

/// Seeded transform whose shift is uniform in the middle 80% of `bounds`.
pub fn generate_transform_in(bounds: &Bounds, seed: u64) -> TransformSpec {
    let d = bounds.dim();
    let mut rng = RngStream::new(seed);
    let shift = (0..d)
        .map(|i| {
            let w = bounds.width(i);
            bounds.lower()[i] + 0.1 * w + 0.8 * w * rng.uniform()
        })
        .collect();
    TransformSpec {
        shift,
        rotation: random_rotation(d, &mut rng),
        bias: 0.0,
    }
}

/// Orthogonal factor of a Gaussian matrix, signs fixed so diag(R) > 0.
pub fn random_rotation(dim: usize, rng: &mut impl Draws) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.normal());
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..dim {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = generate_transform(10, 42);
        let b = generate_transform(10, 42);
        assert_eq!(a, b);
        assert_ne!(a, generate_transform(10, 43));
    }

    #[test]
    fn rotation_preserves_norm() {
        let t = generate_transform(10, 7);
        let mut rng = RngStream::new(1);
        for _ in 0..100 {
            let x: Vec<f64> = (0..10).map(|_| rng.normal() * 50.0).collect();
            let mx = TransformSpec { shift: vec![0.0; 10], ..t.clone() }.apply(&x);
            let n0 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let n1 = mx.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n0 - n1).abs() <= 1e-10 * n0.max(1.0));
        }
        assert!(orthogonality_error(&t.rotation) <= ORTHOGONALITY_TOL);
    }

    #[test]
    fn shift_is_strictly_interior() {
        for seed in 0..50 {
            let t = generate_transform(10, seed);
            assert!(t.shift.iter().all(|v| *v > BENCH_LOWER && *v < BENCH_UPPER));
            assert!(t.shift.iter().all(|v| v.abs() <= 80.0));
        }
    }

    #[test]
    fn text_round_trip() {
        let t = generate_transform(4, 3).with_bias(800.0);
        let back = TransformSpec::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(TransformSpec::parse("2\n0 0\n1 0\n0 1\n").is_err());
        assert!(TransformSpec::parse("2\n0 0\n1 1\n0 1\n0\n").is_err());
        assert!(TransformSpec::parse("0\n0\n").is_err());
        assert!(TransformSpec::parse("2\n0 0\n1 0\n0 1\n0\n9\n").is_err());
        assert!(TransformSpec::parse("1\nx\n1\n0\n").is_err());
        let ok = TransformSpec::parse("2\n1 -1\n0 1\n1 0\n5\n").unwrap();
        assert_eq!(ok.apply(&[2.0, 0.0]), vec![1.0, 1.0]);
    }
}
