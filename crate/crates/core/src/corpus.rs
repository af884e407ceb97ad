//! Seeded random test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{SampledFunction1D, SampledFunction2D};
use crate::rearrangement::StepProfile;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Between 1 and `max_pieces` pieces with values in `(0, 10]` and
/// measures in `(0, 2]`; equal values are merged by the constructor.
pub fn random_profile(rng: &mut impl Rng, max_pieces: usize) -> StepProfile {
    let k = rng.gen_range(1..=max_pieces.max(1));
    let pieces: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            // a few repeated values exercise the merging path
            let v = if rng.gen_bool(0.2) { 1.0 } else { 10.0 * (1.0 - rng.gen::<f64>()) };
            (v, 2.0 * (1.0 - rng.gen::<f64>()))
        })
        .collect();
    StepProfile::from_pieces(&pieces).expect("generated pieces are valid")
}

/// Random signed cell values with a sprinkling of zeros and ties.
pub fn random_values(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(-4.0..4.0),
        })
        .collect()
}

/// Grid on `[0, n spacing)` with `n` in `[min_len, max_len]` and dyadic spacing.
pub fn random_grid_1d(rng: &mut impl Rng, min_len: usize, max_len: usize) -> SampledFunction1D {
    let n = rng.gen_range(min_len..=max_len);
    let spacing = 2f64.powi(-rng.gen_range(0..=6));
    let values = random_values(rng, n);
    SampledFunction1D::new(0.0, spacing, values).expect("valid grid")
}

pub fn random_grid_2d(rng: &mut impl Rng, ncols: usize, nrows: usize, spacing: f64) -> SampledFunction2D {
    let values = random_values(rng, ncols * nrows);
    SampledFunction2D::new(0.0, 0.0, spacing, ncols, nrows, values).expect("valid grid")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
    pub amplitude: f64,
}

impl Bump {
    /// `amplitude (1 - rho^2)^4` with `rho` the scaled distance to the center.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let rho2 = ((x - self.cx).powi(2) + (y - self.cy).powi(2)) / (self.radius * self.radius);
        if rho2 >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - rho2).powi(4)
        }
    }
}

/// A sum of compactly supported bumps inside the unit square, samplable at
/// any resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothField {
    pub bumps: Vec<Bump>,
}

impl SmoothField {
    pub fn random(rng: &mut impl Rng, max_bumps: usize) -> Self {
        let k = rng.gen_range(1..=max_bumps.max(1));
        let bumps = (0..k)
            .map(|_| {
                let radius = rng.gen_range(0.1..0.3);
                Bump {
                    cx: rng.gen_range(radius..1.0 - radius),
                    cy: rng.gen_range(radius..1.0 - radius),
                    radius,
                    amplitude: rng.gen_range(-2.0..2.0),
                }
            })
            .collect();
        Self { bumps }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.bumps.iter().map(|b| b.eval(x, y)).sum()
    }

    /// Cell-center samples on the unit square with `n x n` cells.
    pub fn sample(&self, n: usize) -> Result<SampledFunction2D> {
        SampledFunction2D::from_fn(0.0, 0.0, 1.0 / n as f64, n, n, |x, y| self.eval(x, y))
    }
}
