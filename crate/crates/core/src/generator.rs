//! Seeded dense random LPs.
//!
//! The stream is ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`. Each
//! draw takes the top 53 bits of one `next_u64` as `u in [0, 1)` and returns
//! `low + (high - low) * u`. Draw order: `A` row by row, then `b`, then `c`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lp_core::{LpProblem, Sense};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("rows and columns must be at least 1")]
    EmptyShape,
    #[error("coefficient range ({0}, {1}) must satisfy 0 < low < high")]
    BadRange(f64, f64),
    #[error("rhs scale {0} must be positive")]
    BadRhsScale(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub coeff_range: (f64, f64),
    pub rhs_scale: f64,
}

impl GenSpec {
    pub fn new(rows: usize, cols: usize, seed: u64) -> Self {
        GenSpec {
            rows,
            cols,
            seed,
            coeff_range: (1.0, 10.0),
            rhs_scale: 1.0,
        }
    }
}

struct Uniform(ChaCha8Rng);

impl Uniform {
    fn draw(&mut self, low: f64, high: f64) -> f64 {
        let u = (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        low + (high - low) * u
    }
}

/// `max c.x` s.t. `A x <= b`, `x >= 0` with `A, c ~ U(low, high)` and
/// `b ~ U(rhs_scale * n, 2 * rhs_scale * n)`. Positive `A` keeps the problem
/// bounded and positive `b` makes the slack basis feasible.
pub fn generate_dense(spec: &GenSpec) -> Result<LpProblem, GenError> {
    let (m, n) = (spec.rows, spec.cols);
    if m == 0 || n == 0 {
        return Err(GenError::EmptyShape);
    }
    let (low, high) = spec.coeff_range;
    if !(low.is_finite() && high.is_finite() && 0.0 < low && low < high) {
        return Err(GenError::BadRange(low, high));
    }
    if !(spec.rhs_scale.is_finite() && spec.rhs_scale > 0.0) {
        return Err(GenError::BadRhsScale(spec.rhs_scale));
    }
    let mut rng = Uniform(ChaCha8Rng::seed_from_u64(spec.seed));
    let matrix: Vec<f64> = (0..m * n).map(|_| rng.draw(low, high)).collect();
    let scale = spec.rhs_scale * n as f64;
    let rhs: Vec<f64> = (0..m).map(|_| rng.draw(scale, 2.0 * scale)).collect();
    let costs: Vec<f64> = (0..n).map(|_| rng.draw(low, high)).collect();
    let name = format!("DENSE_{m}x{n}_S{}", spec.seed);
    Ok(LpProblem::new(name, m, n, matrix, rhs, costs, Sense::Maximize).expect("generated data is finite and shaped"))
}
