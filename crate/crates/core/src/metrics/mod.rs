//! Evaluation metrics: occlusion P/R/F1, WHDR, dense depth-map errors and
//! point-pair ordering.
//!
//! Dataset-level entry points compute per-image tallies in parallel and
//! merge the raw tallies in image-id order.

mod depth_map;
mod occlusion;
mod points;
mod whdr;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::io::dataset::DatasetFile;
use crate::model::{ImageAnnotation, ImageId, InstanceId, ModelError};
use crate::raster::RasterError;
use crate::report::Fixed6;

pub use depth_map::{
    depth_map_metrics, median_scale, positive_pixels, DepthMapReport, DELTA_THRESHOLDS,
};
pub use occlusion::{
    evaluate_occlusion, occlusion_counts, occlusion_labels, occlusion_prf, OcclusionCounts,
    OcclusionLabel, OcclusionPrf,
};
pub use points::{point_pair_eval, predict_point_order, PointPairReport, PointQuery, QueryFile};
pub use whdr::{
    depth_labels, depth_predictions, evaluate_whdr, whdr, whdr_tally, DepthLabel, WhdrCategory,
    WhdrTally,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("pair universes differ: {0}")]
    UniverseMismatch(String),
    #[error("image {image}: {source}")]
    InImage {
        image: ImageId,
        #[source]
        source: Box<MetricError>,
    },
    #[error("no pairs in category {0:?}")]
    EmptyCategory(WhdrCategory),
    #[error("pair ({a}, {b}) has no count")]
    MissingCount { a: InstanceId, b: InstanceId },
    #[error("count {0} is below the minimum of 2")]
    CountTooSmall(u32),
    #[error("valid pixel set is empty")]
    EmptyValidSet,
    #[error("median of the prediction over the valid set is zero")]
    ZeroMedian,
    #[error("non-positive value at valid pixel ({row}, {col})")]
    Domain { row: usize, col: usize },
    #[error("point ({row}, {col}) is outside the map")]
    PointOutOfBounds { row: usize, col: usize },
    #[error("no point queries")]
    NoQueries,
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl MetricError {
    fn in_image(self, image: ImageId) -> Self {
        Self::InImage {
            image,
            source: Box::new(self),
        }
    }
}

type Aligned<'a> = (
    ImageId,
    Option<&'a ImageAnnotation>,
    Option<&'a ImageAnnotation>,
);

/// Pairs up images of two datasets by id, in ascending id order.
fn align_images<'a>(gt: &'a DatasetFile, pred: &'a DatasetFile) -> Vec<Aligned<'a>> {
    let mut map: BTreeMap<ImageId, (Option<&ImageAnnotation>, Option<&ImageAnnotation>)> =
        BTreeMap::new();
    for img in gt.images() {
        map.entry(img.image_id()).or_default().0 = Some(img);
    }
    for img in pred.images() {
        map.entry(img.image_id()).or_default().1 = Some(img);
    }
    map.into_iter().map(|(id, (g, p))| (id, g, p)).collect()
}

/// `{"recall": …, "precision": …, "f1": …}`
#[derive(Debug, Serialize)]
pub struct OcclusionReportJson {
    pub recall: Fixed6,
    pub precision: Fixed6,
    pub f1: Fixed6,
}

impl From<OcclusionPrf> for OcclusionReportJson {
    fn from(p: OcclusionPrf) -> Self {
        Self {
            recall: Fixed6(p.recall),
            precision: Fixed6(p.precision),
            f1: Fixed6(p.f1),
        }
    }
}

/// `{"whdr": {"distinct": …, "overlap": …, "all": …}}`. Unrequested
/// categories are omitted; requested but empty ones are `null`.
#[derive(Debug, Serialize)]
pub struct WhdrReportJson {
    pub whdr: WhdrValues,
}

#[derive(Debug, Default, Serialize)]
pub struct WhdrValues {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct: Option<Option<Fixed6>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<Option<Fixed6>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all: Option<Option<Fixed6>>,
}

impl WhdrReportJson {
    pub fn new(tally: &WhdrTally, categories: &[WhdrCategory]) -> Self {
        let mut values = WhdrValues::default();
        for &c in categories {
            let v = Some(tally.whdr(c).ok().map(Fixed6));
            match c {
                WhdrCategory::Distinct => values.distinct = v,
                WhdrCategory::Overlap => values.overlap = v,
                WhdrCategory::All => values.all = v,
            }
        }
        Self { whdr: values }
    }
}

#[derive(Debug, Serialize)]
pub struct DepthMapReportJson {
    pub abs_rel: Fixed6,
    pub sq_rel: Fixed6,
    pub rmse_log: Fixed6,
    pub delta1: Fixed6,
    pub delta2: Fixed6,
    pub delta3: Fixed6,
}

impl From<DepthMapReport> for DepthMapReportJson {
    fn from(r: DepthMapReport) -> Self {
        Self {
            abs_rel: Fixed6(r.abs_rel),
            sq_rel: Fixed6(r.sq_rel),
            rmse_log: Fixed6(r.rmse_log),
            delta1: Fixed6(r.delta1),
            delta2: Fixed6(r.delta2),
            delta3: Fixed6(r.delta3),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointPairReportJson {
    pub n_correct: u64,
    pub n_wrong: u64,
    pub whdr: Fixed6,
}

impl From<PointPairReport> for PointPairReportJson {
    fn from(r: PointPairReport) -> Self {
        Self {
            n_correct: r.n_correct,
            n_wrong: r.n_wrong,
            whdr: Fixed6(r.whdr),
        }
    }
}
