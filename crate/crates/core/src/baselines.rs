//! Non-learned order predictors: the larger-area and lower-in-frame
//! heuristics, and depth order from trimmed per-instance disparity.

use thiserror::Error;

use crate::model::{DepthOrder, InstanceId, InstanceRef, OcclusionRelation};
use crate::numeric::{mean, median_in_place};
use crate::raster::{DisparityMap, InstanceMask, RasterError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("instance {0} has no area")]
    MissingArea(InstanceId),
    #[error("instance {0} has no bottom row")]
    MissingBottomRow(InstanceId),
    #[error("instance mask is empty")]
    EmptyMask,
    #[error("trimming {trimmed} values from each end of {n} leaves nothing")]
    OverTrimmed { n: usize, trimmed: usize },
    #[error("trim fraction {0} is outside [0, 0.5)")]
    BadTrim(f64),
    #[error("equality tolerance {0} is negative or not finite")]
    BadTolerance(f64),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

/// Fraction of values dropped from each tail before taking a statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimSpec {
    fraction: f64,
}

impl Default for TrimSpec {
    fn default() -> Self {
        Self { fraction: 0.05 }
    }
}

impl TrimSpec {
    pub const NONE: Self = Self { fraction: 0.0 };

    pub fn new(fraction: f64) -> Result<Self, BaselineError> {
        if !(0.0..0.5).contains(&fraction) {
            return Err(BaselineError::BadTrim(fraction));
        }
        Ok(Self { fraction })
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    /// `floor(fraction * n)`, with a small guard so products such as
    /// `0.29 * 100` are not floored to one below the intended count.
    pub fn per_tail(&self, n: usize) -> usize {
        (self.fraction * n as f64 + 1e-9).floor() as usize
    }
}

/// Outcome of a heuristic comparison between instances A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicOrder {
    AFirst,
    BFirst,
    Tie,
}

impl HeuristicOrder {
    fn compare<T: Ord>(a: T, b: T) -> Self {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => Self::AFirst,
            std::cmp::Ordering::Less => Self::BFirst,
            std::cmp::Ordering::Equal => Self::Tie,
        }
    }

    /// The winner occludes the other; a tie means no occlusion.
    pub fn to_occlusion(self) -> OcclusionRelation {
        match self {
            Self::AFirst => OcclusionRelation::AoccludesB,
            Self::BFirst => OcclusionRelation::BoccludesA,
            Self::Tie => OcclusionRelation::None,
        }
    }

    /// The winner is closer; a tie means equal depth.
    pub fn to_depth(self) -> DepthOrder {
        match self {
            Self::AFirst => DepthOrder::Closer,
            Self::BFirst => DepthOrder::Farther,
            Self::Tie => DepthOrder::Equal,
        }
    }
}

/// Larger area wins.
pub fn predict_by_area(a: &InstanceRef, b: &InstanceRef) -> Result<HeuristicOrder, BaselineError> {
    let area = |i: &InstanceRef| i.area.ok_or(BaselineError::MissingArea(i.instance_id));
    Ok(HeuristicOrder::compare(area(a)?, area(b)?))
}

/// Lower bottom edge in the frame (larger row index) wins.
pub fn predict_by_yaxis(a: &InstanceRef, b: &InstanceRef) -> Result<HeuristicOrder, BaselineError> {
    let row = |i: &InstanceRef| {
        i.bottom_row
            .ok_or(BaselineError::MissingBottomRow(i.instance_id))
    };
    Ok(HeuristicOrder::compare(row(a)?, row(b)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceStat {
    Mean,
    Median,
}

/// Sorts the masked values, drops `trim.per_tail(n)` from each end and
/// summarizes the rest.
pub fn trimmed_instance_stat(
    disp: &DisparityMap,
    mask: &InstanceMask,
    stat: InstanceStat,
    trim: TrimSpec,
) -> Result<f64, BaselineError> {
    let mut values = mask.sample(disp)?;
    let n = values.len();
    if n == 0 {
        return Err(BaselineError::EmptyMask);
    }
    let k = trim.per_tail(n);
    if 2 * k >= n {
        return Err(BaselineError::OverTrimmed { n, trimmed: k });
    }
    values.sort_unstable_by(f64::total_cmp);
    let kept = &mut values[k..n - k];
    let value = match stat {
        InstanceStat::Mean => mean(kept),
        InstanceStat::Median => median_in_place(kept),
    };
    Ok(value.expect("at least one value kept"))
}

/// Higher disparity is nearer. Equal when the statistics differ by at most
/// `eq_tol` times the larger magnitude.
pub fn order_from_stats(s_a: f64, s_b: f64, eq_tol: f64) -> DepthOrder {
    if (s_a - s_b).abs() <= eq_tol * s_a.abs().max(s_b.abs()) {
        DepthOrder::Equal
    } else if s_a > s_b {
        DepthOrder::Closer
    } else {
        DepthOrder::Farther
    }
}

pub fn predict_depth_from_disparity(
    disp: &DisparityMap,
    mask_a: &InstanceMask,
    mask_b: &InstanceMask,
    stat: InstanceStat,
    trim: TrimSpec,
    eq_tol: f64,
) -> Result<DepthOrder, BaselineError> {
    if !eq_tol.is_finite() || eq_tol < 0.0 {
        return Err(BaselineError::BadTolerance(eq_tol));
    }
    let s_a = trimmed_instance_stat(disp, mask_a, stat, trim)?;
    let s_b = trimmed_instance_stat(disp, mask_b, stat, trim)?;
    Ok(order_from_stats(s_a, s_b, eq_tol))
}
