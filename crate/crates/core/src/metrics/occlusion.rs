//! Occlusion-order recall, precision and F1 over directed occluder ->
//! occludee facts. A bidirectional pair contributes both directions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::io::dataset::DatasetFile;
use crate::metrics::{align_images, MetricError};
use crate::model::{
    occlusion_mode_project, ImageAnnotation, InstanceId, OcclusionMode, OcclusionRelation,
};

/// Canonical pair `(a, b)`, `a < b`, with its occlusion label.
pub type OcclusionLabel = ((InstanceId, InstanceId), OcclusionRelation);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OcclusionPrf {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

/// Additive tallies behind [`OcclusionPrf`]; merge these, not the ratios.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OcclusionCounts {
    pub hits: u64,
    pub gt_facts: u64,
    pub pred_facts: u64,
}

impl OcclusionCounts {
    pub fn merge(self, other: Self) -> Self {
        Self {
            hits: self.hits + other.hits,
            gt_facts: self.gt_facts + other.gt_facts,
            pred_facts: self.pred_facts + other.pred_facts,
        }
    }

    /// Empty ground truth gives recall 1 only for an empty prediction;
    /// likewise for precision. `P + R = 0` gives F1 = 0.
    pub fn prf(&self) -> OcclusionPrf {
        let ratio = |num: u64, den: u64, other: u64| {
            if den == 0 {
                if other == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                num as f64 / den as f64
            }
        };
        let recall = ratio(self.hits, self.gt_facts, self.pred_facts);
        let precision = ratio(self.hits, self.pred_facts, self.gt_facts);
        let f1 = if recall + precision > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        OcclusionPrf {
            recall,
            precision,
            f1,
        }
    }
}

fn tally(gt: OcclusionRelation, pred: OcclusionRelation) -> OcclusionCounts {
    let (g_ab, g_ba) = gt.flags();
    let (p_ab, p_ba) = pred.flags();
    let n = |x: bool| u64::from(x);
    OcclusionCounts {
        hits: n(g_ab && p_ab) + n(g_ba && p_ba),
        gt_facts: n(g_ab) + n(g_ba),
        pred_facts: n(p_ab) + n(p_ba),
    }
}

/// Tallies one image. Both label lists must cover the same pairs. In
/// three-label mode, pairs whose ground truth is bidirectional are removed
/// first; a bidirectional prediction on a remaining pair is an error.
pub fn occlusion_counts(
    gt: &[OcclusionLabel],
    pred: &[OcclusionLabel],
    mode: OcclusionMode,
) -> Result<OcclusionCounts, MetricError> {
    let gt_map: BTreeMap<_, _> = gt.iter().copied().collect();
    let pred_map: BTreeMap<_, _> = pred.iter().copied().collect();
    if gt_map.len() != gt.len() || pred_map.len() != pred.len() {
        return Err(MetricError::UniverseMismatch(
            "duplicate pair in label list".into(),
        ));
    }
    if let Some(key) = gt_map
        .keys()
        .find(|k| !pred_map.contains_key(k))
        .or_else(|| pred_map.keys().find(|k| !gt_map.contains_key(k)))
    {
        return Err(MetricError::UniverseMismatch(format!(
            "pair ({}, {}) present on one side only",
            key.0, key.1
        )));
    }
    let mut counts = OcclusionCounts::default();
    for (key, &g) in &gt_map {
        if mode == OcclusionMode::WithoutBidirectional && g == OcclusionRelation::Bidirectional {
            continue;
        }
        let g = occlusion_mode_project(g, mode)?;
        let p = occlusion_mode_project(pred_map[key], mode)?;
        counts = counts.merge(tally(g, p));
    }
    Ok(counts)
}

pub fn occlusion_prf(
    gt: &[OcclusionLabel],
    pred: &[OcclusionLabel],
    mode: OcclusionMode,
) -> Result<OcclusionPrf, MetricError> {
    Ok(occlusion_counts(gt, pred, mode)?.prf())
}

pub fn occlusion_labels(img: &ImageAnnotation) -> Vec<OcclusionLabel> {
    img.pairs()
        .iter()
        .filter_map(|p| p.occlusion.map(|rel| (p.key(), rel)))
        .collect()
}

/// Dataset-level tallies; images are matched by id and evaluated over the
/// annotated pairs.
pub fn evaluate_occlusion(
    gt: &DatasetFile,
    pred: &DatasetFile,
    mode: OcclusionMode,
) -> Result<OcclusionCounts, MetricError> {
    let aligned = align_images(gt, pred);
    let per_image: Vec<Result<OcclusionCounts, MetricError>> = aligned
        .par_iter()
        .map(|(id, g, p)| {
            let g = g.map(occlusion_labels).unwrap_or_default();
            let p = p.map(occlusion_labels).unwrap_or_default();
            occlusion_counts(&g, &p, mode).map_err(|e| e.in_image(*id))
        })
        .collect();
    per_image
        .into_iter()
        .try_fold(OcclusionCounts::default(), |acc, c| Ok(acc.merge(c?)))
}
