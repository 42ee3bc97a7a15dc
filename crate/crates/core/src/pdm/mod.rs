//! Gaussian-mixture probability map for points of interest.

mod grid;
mod io;

pub use grid::{
    conv_value, rasterize, warm, BoxBlurKernel, Cell, SearchGrid, WarmingSchedule,
};
pub use io::{pdm_from_json, pdm_to_json, read_pdm, write_pdm, write_grid_csv};

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Rect, Vec2};
use crate::scalar::{from_usize, lit, to_f64, Real};

#[derive(Debug, Error)]
pub enum PdmError {
    #[error("a probability map needs at least one component")]
    NoComponents,
    #[error("covariance is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("mean must be finite")]
    NonFiniteMean,
    #[error("bounds are empty or non-finite")]
    EmptyBounds,
    #[error("variance range must satisfy 0 < min <= max (got {min} .. {max})")]
    BadSpread { min: f64, max: f64 },
    #[error("cell size must be positive")]
    BadCellSize,
    #[error("cell ({col}, {row}) outside {cols}x{rows} grid")]
    CellOutOfRange {
        col: usize,
        row: usize,
        cols: usize,
        rows: usize,
    },
    #[error("warming decrement must be non-negative")]
    NegativeDecrement,
    #[error("warming needs at least one step")]
    ZeroSteps,
    #[error("pdm file: {0}")]
    Format(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One bivariate normal component with precomputed inverse and normaliser.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian2<T> {
    mean: Vec2<T>,
    cov: [[T; 2]; 2],
    inv: [[T; 2]; 2],
    norm: T,
}

impl<T: Real> Gaussian2<T> {
    pub fn new(mean: Vec2<T>, cov: [[T; 2]; 2]) -> Result<Self, PdmError> {
        if !mean.is_finite() {
            return Err(PdmError::NonFiniteMean);
        }
        let [[a, b], [c, d]] = cov;
        let scale = a.abs().max(d.abs()).max(T::min_positive_value());
        let symmetric = (b - c).abs() <= lit::<T>(1e-12) * scale;
        let det = a * d - b * c;
        if !(symmetric && a > T::zero() && d > T::zero() && det > T::zero() && det.is_finite()) {
            return Err(PdmError::NotPositiveDefinite);
        }
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let four_pi_sq = lit::<T>(4.0) * T::PI() * T::PI();
        Ok(Self {
            mean,
            cov,
            inv,
            norm: T::one() / (four_pi_sq * det).sqrt(),
        })
    }

    pub fn mean(&self) -> Vec2<T> {
        self.mean
    }

    pub fn cov(&self) -> [[T; 2]; 2] {
        self.cov
    }

    /// Normal density at `p`.
    pub fn density(&self, p: Vec2<T>) -> T {
        let d = p - self.mean;
        let q = d.x * (self.inv[0][0] * d.x + self.inv[0][1] * d.y)
            + d.y * (self.inv[1][0] * d.x + self.inv[1][1] * d.y);
        (lit::<T>(-0.5) * q).exp() * self.norm
    }

    /// Square root of the larger covariance eigenvalue.
    pub fn max_std(&self) -> T {
        let [[a, b], [_, d]] = self.cov;
        let mid = (a + d) * lit(0.5);
        let rad = (((a - d) * lit(0.5)).powi(2) + b * b).sqrt();
        (mid + rad).sqrt()
    }

    fn sort_key(&self) -> [f64; 5] {
        [
            to_f64(self.mean.x),
            to_f64(self.mean.y),
            to_f64(self.cov[0][0]),
            to_f64(self.cov[0][1]),
            to_f64(self.cov[1][1]),
        ]
    }
}

/// Equal-weight mixture of bivariate normals.
///
/// Components are held in a canonical order so that the density, and
/// everything rasterised from it, does not depend on input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdm<T> {
    components: Vec<Gaussian2<T>>,
}

impl<T: Real> Pdm<T> {
    pub fn new(mut components: Vec<Gaussian2<T>>) -> Result<Self, PdmError> {
        if components.is_empty() {
            return Err(PdmError::NoComponents);
        }
        components.sort_by(|a, b| {
            a.sort_key()
                .iter()
                .zip(b.sort_key().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Gaussian2<T>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Mixture density `(1/G) * sum_i N(p; mu_i, sigma_i)`, in 1/m².
    pub fn eval(&self, p: Vec2<T>) -> T {
        let sum = self
            .components
            .iter()
            .fold(T::zero(), |acc, g| acc + g.density(p));
        sum / from_usize::<T>(self.components.len())
    }
}

/// Free function form of [`Pdm::eval`].
pub fn eval_p<T: Real>(pdm: &Pdm<T>, p: Vec2<T>) -> T {
    pdm.eval(p)
}

/// Allowed range for covariance eigenvalues, m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadRange<T> {
    pub min_variance: T,
    pub max_variance: T,
}

impl<T: Real> Default for SpreadRange<T> {
    fn default() -> Self {
        Self {
            min_variance: lit(16.0),
            max_variance: lit(225.0),
        }
    }
}

/// Draws `count` components with means uniform in `bounds` and covariances
/// `R diag(l1, l2) R^T` for a random rotation and eigenvalues in `spread`.
pub fn random_pdm<T: Real>(
    seed: u64,
    count: usize,
    bounds: Rect<T>,
    spread: SpreadRange<T>,
) -> Result<Pdm<T>, PdmError> {
    if count == 0 {
        return Err(PdmError::NoComponents);
    }
    if !bounds.is_proper() {
        return Err(PdmError::EmptyBounds);
    }
    let (lo, hi) = (spread.min_variance, spread.max_variance);
    if !(lo > T::zero() && lo <= hi && hi.is_finite()) {
        return Err(PdmError::BadSpread {
            min: to_f64(lo),
            max: to_f64(hi),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = || lit::<T>(rng.random::<f64>());
    let mut components = Vec::with_capacity(count);
    for _ in 0..count {
        let mean = Vec2::new(
            bounds.min.x + unit() * bounds.width(),
            bounds.min.y + unit() * bounds.height(),
        );
        let l1 = lo + unit() * (hi - lo);
        let l2 = lo + unit() * (hi - lo);
        let angle = unit() * T::PI();
        let (s, c) = angle.sin_cos();
        let a = c * c * l1 + s * s * l2;
        let d = s * s * l1 + c * c * l2;
        let b = c * s * (l1 - l2);
        components.push(Gaussian2::new(mean, [[a, b], [b, d]])?);
    }
    Pdm::new(components)
}
