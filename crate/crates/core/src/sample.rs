//! Seeded sample points and residual bookkeeping.
//!
//! Identities that hold exactly are checked by evaluating both sides on a
//! reproducible set of points. The generator is ChaCha8 seeded from a `u64`,
//! so the same seed yields the same points on every platform.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{EvalPoint, ScalarExpr};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_COUNT: usize = 64;
/// Positive box keeps `sin(x1)` away from zero for the sphere chart.
pub const DEFAULT_BOX: (f64, f64) = (0.2, 1.5);
/// Redraws allowed per point before giving up on a singular region.
pub const MAX_REDRAWS: usize = 10;

/// Tolerance for symbolic-vs-symbolic comparisons and yes/no decisions.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for symbolic-vs-finite-difference comparisons.
pub const FD_TOL: f64 = 1e-6;

/// Axis-aligned sampling box.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    bounds: Vec<(f64, f64)>,
}

impl SampleBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidBox(format!(
                    "axis {} has bounds [{lo}, {hi}]",
                    axis + 1
                )));
            }
        }
        Ok(Self { bounds })
    }

    /// The same interval on every axis.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    pub bbox: SampleBox,
}

impl SampleSpec {
    /// Default protocol: 64 points in `[0.2, 1.5]^n` from seed 42.
    pub fn standard(dim: usize) -> Self {
        Self {
            seed: DEFAULT_SEED,
            count: DEFAULT_COUNT,
            bbox: SampleBox::uniform(dim, DEFAULT_BOX.0, DEFAULT_BOX.1)
                .expect("default box is valid"),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    /// Draws `count` points, redrawing any point at which one of `guards`
    /// fails to evaluate to a finite number.
    pub fn draw(&self, guards: &[&ScalarExpr]) -> Result<Vec<EvalPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut points = Vec::with_capacity(self.count);
        for _ in 0..self.count {
            let mut accepted = None;
            for _ in 0..MAX_REDRAWS {
                let coords: Vec<f64> = self
                    .bbox
                    .bounds
                    .iter()
                    .map(|&(lo, hi)| rng.random_range(lo..hi))
                    .collect();
                if guards.iter().all(|g| g.eval_coords(&coords).is_ok()) {
                    accepted = Some(EvalPoint::new(coords)?);
                    break;
                }
            }
            points.push(accepted.ok_or(Error::SamplingExhausted {
                attempts: MAX_REDRAWS,
            })?);
        }
        Ok(points)
    }
}

/// Largest residual seen so far and the point where it occurred.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Residual {
    pub value: f64,
    pub witness: Option<Vec<f64>>,
}

impl Residual {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `value` at `point` if it beats the current maximum; the first
    /// occurrence wins ties so reductions stay deterministic.
    pub fn observe(&mut self, value: f64, point: &EvalPoint) {
        let value = value.abs();
        if self.witness.is_none() || value > self.value {
            self.value = value;
            self.witness = Some(point.coords().to_vec());
        }
    }

    /// Observes the largest absolute entry of `values` at `point`.
    pub fn observe_all(&mut self, values: impl IntoIterator<Item = f64>, point: &EvalPoint) {
        let worst = values.into_iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        self.observe(worst, point);
    }

    pub fn merge(&mut self, other: &Residual) {
        if let Some(w) = &other.witness {
            if self.witness.is_none() || other.value > self.value {
                self.value = other.value;
                self.witness = Some(w.clone());
            }
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.value <= tol
    }
}

/// Outcome of a sampled yes/no check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub residual: Residual,
}

impl Verdict {
    pub fn from_residual(residual: Residual, tol: f64) -> Self {
        Self {
            holds: residual.within(tol),
            residual,
        }
    }
}

/// `|value - reference| / (1 + |reference|)`.
pub fn relative_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / (1.0 + reference.abs())
}
