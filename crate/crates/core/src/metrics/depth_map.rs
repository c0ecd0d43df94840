//! Dense map metrics: Abs Rel, Sq Rel, RMSE log and threshold accuracy,
//! with optional per-image median scaling of the prediction.

use crate::metrics::MetricError;
use crate::numeric::median_in_place;
use crate::raster::{InstanceMask, ScalarMap};

/// Accuracy thresholds `1.25`, `1.25^2`, `1.25^3`.
pub const DELTA_THRESHOLDS: [f64; 3] = [1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthMapReport {
    pub abs_rel: f64,
    pub sq_rel: f64,
    pub rmse_log: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

fn check_shapes(gt: &ScalarMap, pred: &ScalarMap, valid: &InstanceMask) -> Result<(), MetricError> {
    pred.same_shape(gt.height(), gt.width())?;
    valid.sample(gt)?;
    if valid.is_empty() {
        return Err(MetricError::EmptyValidSet);
    }
    Ok(())
}

/// Multiplies `pred` by `median(gt) / median(pred)`, medians taken over `valid`.
pub fn median_scale(
    pred: &ScalarMap,
    gt: &ScalarMap,
    valid: &InstanceMask,
) -> Result<ScalarMap, MetricError> {
    check_shapes(gt, pred, valid)?;
    let med_pred = median_in_place(&mut valid.sample(pred)?).expect("valid set is nonempty");
    let med_gt = median_in_place(&mut valid.sample(gt)?).expect("valid set is nonempty");
    if med_pred == 0.0 {
        return Err(MetricError::ZeroMedian);
    }
    let factor = med_gt / med_pred;
    Ok(pred.map(|v| v * factor)?)
}

/// Evaluates `pred` against `gt` over `valid`. Both maps must be positive
/// on every valid pixel (after scaling, for `pred`).
pub fn depth_map_metrics(
    gt: &ScalarMap,
    pred: &ScalarMap,
    valid: &InstanceMask,
    scale: bool,
) -> Result<DepthMapReport, MetricError> {
    check_shapes(gt, pred, valid)?;
    let scaled;
    let pred = if scale {
        scaled = median_scale(pred, gt, valid)?;
        &scaled
    } else {
        pred
    };
    let mut abs_rel = 0.0;
    let mut sq_rel = 0.0;
    let mut sq_log = 0.0;
    let mut hits = [0u64; 3];
    for &idx in valid.indices() {
        let (d, p) = (gt.at(idx), pred.at(idx));
        if d <= 0.0 || p <= 0.0 {
            return Err(MetricError::Domain {
                row: idx / gt.width(),
                col: idx % gt.width(),
            });
        }
        let diff = p - d;
        abs_rel += diff.abs() / d;
        sq_rel += diff * diff / d;
        let log_diff = p.ln() - d.ln();
        sq_log += log_diff * log_diff;
        let ratio = (p / d).max(d / p);
        for (hit, tau) in hits.iter_mut().zip(DELTA_THRESHOLDS) {
            *hit += u64::from(ratio < tau);
        }
    }
    let n = valid.len() as f64;
    Ok(DepthMapReport {
        abs_rel: abs_rel / n,
        sq_rel: sq_rel / n,
        rmse_log: (sq_log / n).sqrt(),
        delta1: hits[0] as f64 / n,
        delta2: hits[1] as f64 / n,
        delta3: hits[2] as f64 / n,
    })
}

/// Pixels where `gt` is finite and positive.
pub fn positive_pixels(gt: &ScalarMap) -> InstanceMask {
    let idx = gt
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, _)| i)
        .collect();
    InstanceMask::from_indices(gt.height(), gt.width(), idx).expect("indices within grid")
}
