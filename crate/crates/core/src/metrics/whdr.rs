//! Weighted human disagreement rate over depth orders.
//!
//! Each pair weighs `2 / count`. Pairs are tallied as integers per count
//! value and category, and the weighted ratio is formed once at the end
//! with a common denominator, so merging images is exact and
//! order-independent.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::io::dataset::DatasetFile;
use crate::metrics::{align_images, MetricError};
use crate::model::{DepthOrder, DepthRelation, ImageAnnotation, InstanceId, RangeKind, MIN_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WhdrCategory {
    Distinct,
    Overlap,
    All,
}

impl WhdrCategory {
    pub const ALL: [WhdrCategory; 3] = [Self::Distinct, Self::Overlap, Self::All];

    fn admits(self, range: RangeKind) -> bool {
        match self {
            Self::Distinct => range == RangeKind::Distinct,
            Self::Overlap => range == RangeKind::Overlap,
            Self::All => true,
        }
    }
}

/// Ground-truth depth label of one canonical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthLabel {
    pub pair: (InstanceId, InstanceId),
    pub relation: DepthRelation,
    pub count: u32,
}

/// `(wrong, total)` pair counts keyed by `(range, count)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WhdrTally {
    bins: BTreeMap<(RangeKind, u32), (u64, u64)>,
}

impl WhdrTally {
    pub fn add(&mut self, range: RangeKind, count: u32, wrong: bool) -> Result<(), MetricError> {
        if count < MIN_COUNT {
            return Err(MetricError::CountTooSmall(count));
        }
        let bin = self.bins.entry((range, count)).or_default();
        bin.0 += u64::from(wrong);
        bin.1 += 1;
        Ok(())
    }

    pub fn merge(mut self, other: &Self) -> Self {
        for (k, (w, t)) in &other.bins {
            let bin = self.bins.entry(*k).or_default();
            bin.0 += w;
            bin.1 += t;
        }
        self
    }

    pub fn is_empty(&self, category: WhdrCategory) -> bool {
        !self.bins.keys().any(|(r, _)| category.admits(*r))
    }

    /// `sum(w * wrong) / sum(w)` over the category.
    pub fn whdr(&self, category: WhdrCategory) -> Result<f64, MetricError> {
        let bins: Vec<(u32, u64, u64)> = self
            .bins
            .iter()
            .filter(|((r, _), _)| category.admits(*r))
            .map(|((_, c), (w, t))| (*c, *w, *t))
            .collect();
        if bins.is_empty() {
            return Err(MetricError::EmptyCategory(category));
        }
        Ok(exact_ratio(&bins).unwrap_or_else(|| float_ratio(&bins)))
    }
}

/// Scales every weight `2/c` to the integer `2L/c` with `L = lcm(counts)`.
fn exact_ratio(bins: &[(u32, u64, u64)]) -> Option<f64> {
    let mut lcm: u128 = 1;
    for &(c, _, _) in bins {
        let c = u128::from(c);
        lcm = lcm.checked_mul(c / gcd(lcm, c))?;
    }
    let (mut num, mut den) = (0u128, 0u128);
    for &(c, wrong, total) in bins {
        let w = lcm / u128::from(c);
        num = num.checked_add(w.checked_mul(u128::from(wrong))?)?;
        den = den.checked_add(w.checked_mul(u128::from(total))?)?;
    }
    // Conversion is exact below 2^53, leaving a single rounding.
    const EXACT: u128 = 1 << 53;
    (den < EXACT).then(|| num as f64 / den as f64)
}

fn float_ratio(bins: &[(u32, u64, u64)]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for &(c, wrong, total) in bins {
        let w = 2.0 / f64::from(c);
        num += w * wrong as f64;
        den += w * total as f64;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Tallies one image: every ground-truth pair needs exactly one prediction.
pub fn whdr_tally(
    gt: &[DepthLabel],
    pred: &[((InstanceId, InstanceId), DepthOrder)],
) -> Result<WhdrTally, MetricError> {
    let pred_map: BTreeMap<_, _> = pred.iter().copied().collect();
    if pred_map.len() != pred.len() {
        return Err(MetricError::UniverseMismatch(
            "duplicate predicted pair".into(),
        ));
    }
    if pred.len() != gt.len() {
        return Err(MetricError::UniverseMismatch(format!(
            "{} ground-truth pairs but {} predictions",
            gt.len(),
            pred.len()
        )));
    }
    let mut tally = WhdrTally::default();
    for label in gt {
        let predicted = pred_map.get(&label.pair).ok_or_else(|| {
            MetricError::UniverseMismatch(format!(
                "no prediction for pair ({}, {})",
                label.pair.0, label.pair.1
            ))
        })?;
        tally.add(
            label.relation.range,
            label.count,
            *predicted != label.relation.order,
        )?;
    }
    Ok(tally)
}

pub fn whdr(
    gt: &[DepthLabel],
    pred: &[((InstanceId, InstanceId), DepthOrder)],
    category: WhdrCategory,
) -> Result<f64, MetricError> {
    whdr_tally(gt, pred)?.whdr(category)
}

pub fn depth_labels(img: &ImageAnnotation) -> Result<Vec<DepthLabel>, MetricError> {
    img.pairs()
        .iter()
        .filter_map(|p| p.depth.map(|rel| (p, rel)))
        .map(|(p, relation)| {
            let count = p
                .depth_count
                .ok_or(MetricError::MissingCount { a: p.a, b: p.b })?;
            Ok(DepthLabel {
                pair: p.key(),
                relation,
                count,
            })
        })
        .collect()
}

pub fn depth_predictions(img: &ImageAnnotation) -> Vec<((InstanceId, InstanceId), DepthOrder)> {
    img.pairs()
        .iter()
        .filter_map(|p| p.depth.map(|rel| (p.key(), rel.order)))
        .collect()
}

/// Dataset-level tally over the annotated depth pairs.
pub fn evaluate_whdr(gt: &DatasetFile, pred: &DatasetFile) -> Result<WhdrTally, MetricError> {
    let aligned = align_images(gt, pred);
    let per_image: Vec<Result<WhdrTally, MetricError>> = aligned
        .par_iter()
        .map(|(id, g, p)| {
            let g = match g {
                Some(img) => depth_labels(img),
                None => Ok(Vec::new()),
            };
            let p = p.map(depth_predictions).unwrap_or_default();
            g.and_then(|g| whdr_tally(&g, &p))
                .map_err(|e| e.in_image(*id))
        })
        .collect();
    per_image
        .into_iter()
        .try_fold(WhdrTally::default(), |acc, t| Ok(acc.merge(&t?)))
}
