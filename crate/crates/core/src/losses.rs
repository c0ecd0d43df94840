//! Ordering-aware training objectives evaluated as plain numbers: the
//! instance-wise disparity loss, edge-aware smoothness and their weighted
//! combination with externally supplied order losses.

use thiserror::Error;

use crate::raster::{DisparityMap, InstanceMask, PlaneImage, RasterError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LossError {
    #[error("instance mask is empty")]
    EmptyMask,
    #[error("instance masks overlap")]
    OverlappingMasks,
    #[error("depth direction must be 1 or -1, got {0}")]
    BadDirection(i32),
    #[error("map is too small to have any neighbouring pixels")]
    Degenerate,
    #[error("loss weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

/// Weights `(λ0, λ1, λ2, λ3)` for the occlusion-order, depth-order,
/// disparity and smoothness terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    lambdas: [f64; 4],
}

impl LossWeights {
    /// Depth-order-only model.
    pub const DEPTH: Self = Self {
        lambdas: [0.0, 1.0, 1.0, 0.1],
    };
    /// Joint occlusion and depth model.
    pub const OCCLUSION_DEPTH: Self = Self {
        lambdas: [1.0, 1.0, 1.0, 0.1],
    };

    pub fn new(lambdas: [f64; 4]) -> Result<Self, LossError> {
        if let Some(&bad) = lambdas.iter().find(|l| !l.is_finite() || **l < 0.0) {
            return Err(LossError::BadWeight(bad));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }
}

/// Violation count and pixel count behind [`instance_disparity_loss`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DisparityViolations {
    pub violations: u64,
    pub pixels: u64,
}

impl DisparityViolations {
    pub fn merge(self, other: Self) -> Self {
        Self {
            violations: self.violations + other.violations,
            pixels: self.pixels + other.pixels,
        }
    }

    pub fn loss(&self) -> f64 {
        if self.pixels == 0 {
            0.0
        } else {
            self.violations as f64 / (2 * self.pixels) as f64
        }
    }
}

/// Counts disparity values that contradict "A is nearer than B" (`d = 1`)
/// or "A is farther than B" (`d = -1`). Values are multiplied by `d` before
/// the extrema are taken, so the two directions are mirror images:
/// an A-pixel violates when `d·D(i) <= max over B of d·D`, a B-pixel when
/// `d·D(j) >= min over A of d·D`. Ties count as violations.
pub fn disparity_violations(
    disp: &DisparityMap,
    mask_a: &InstanceMask,
    mask_b: &InstanceMask,
    d: i32,
) -> Result<DisparityViolations, LossError> {
    if d != 1 && d != -1 {
        return Err(LossError::BadDirection(d));
    }
    if mask_a.is_empty() || mask_b.is_empty() {
        return Err(LossError::EmptyMask);
    }
    if mask_a.intersects(mask_b) {
        return Err(LossError::OverlappingMasks);
    }
    let sign = f64::from(d);
    let va: Vec<f64> = mask_a.sample(disp)?.into_iter().map(|v| sign * v).collect();
    let vb: Vec<f64> = mask_b.sample(disp)?.into_iter().map(|v| sign * v).collect();
    let max_b = vb.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_a = va.iter().copied().fold(f64::INFINITY, f64::min);
    let violations =
        va.iter().filter(|&&v| v <= max_b).count() + vb.iter().filter(|&&v| v >= min_a).count();
    Ok(DisparityViolations {
        violations: violations as u64,
        pixels: (va.len() + vb.len()) as u64,
    })
}

/// Fraction in `[0, 1/2]`; zero exactly when the two instances' disparity
/// ranges are strictly separated in direction `d`.
pub fn instance_disparity_loss(
    disp: &DisparityMap,
    mask_a: &InstanceMask,
    mask_b: &InstanceMask,
    d: i32,
) -> Result<f64, LossError> {
    Ok(disparity_violations(disp, mask_a, mask_b, d)?.loss())
}

/// Edge-aware smoothness with forward differences. Each disparity step is
/// damped by `exp(-|image step|)`, the image step being the L2 norm across
/// the three planes; the mean is over all difference terms in both
/// directions.
pub fn smoothness_loss(disp: &DisparityMap, image: &PlaneImage) -> Result<f64, LossError> {
    let (h, w) = (disp.height(), disp.width());
    image.planes()[0].same_shape(h, w)?;
    let planes = image.planes();
    let step = |i: usize, j: usize| {
        let d = (disp.at(i) - disp.at(j)).abs();
        let g: f64 = planes.iter().map(|p| (p.at(i) - p.at(j)).powi(2)).sum();
        d * (-g.sqrt()).exp()
    };
    let mut total = 0.0;
    let mut terms = 0usize;
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                total += step(i + 1, i);
                terms += 1;
            }
            if r + 1 < h {
                total += step(i + w, i);
                terms += 1;
            }
        }
    }
    if terms == 0 {
        return Err(LossError::Degenerate);
    }
    Ok(total / terms as f64)
}

/// `λ0·loo + λ1·ldo + λ2·ldisp + λ3·ls`.
pub fn combined_objective(loo: f64, ldo: f64, ldisp: f64, ls: f64, w: &LossWeights) -> f64 {
    let [l0, l1, l2, l3] = w.lambdas;
    l0 * loo + l1 * ldo + l2 * ldisp + l3 * ls
}
