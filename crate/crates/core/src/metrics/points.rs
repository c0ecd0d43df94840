//! Point-pair depth ordering against a disparity map. Larger disparity
//! means nearer; exactly equal disparities read as equal depth.

use serde::{Deserialize, Serialize};

use crate::metrics::MetricError;
use crate::model::DepthOrder;
use crate::raster::DisparityMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointQuery {
    /// `(row, col)`.
    pub p1: (usize, usize),
    pub p2: (usize, usize),
    /// Depth of `p1` relative to `p2`.
    pub relation: DepthOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPairReport {
    pub n_correct: u64,
    pub n_wrong: u64,
    /// Unit-weight disagreement rate.
    pub whdr: f64,
}

pub fn predict_point_order(disp: &DisparityMap, q: &PointQuery) -> Result<DepthOrder, MetricError> {
    let fetch = |(row, col): (usize, usize)| {
        disp.get(row, col)
            .ok_or(MetricError::PointOutOfBounds { row, col })
    };
    let (d1, d2) = (fetch(q.p1)?, fetch(q.p2)?);
    Ok(if d1 > d2 {
        DepthOrder::Closer
    } else if d1 < d2 {
        DepthOrder::Farther
    } else {
        DepthOrder::Equal
    })
}

pub fn point_pair_eval(
    disp: &DisparityMap,
    queries: &[PointQuery],
) -> Result<PointPairReport, MetricError> {
    if queries.is_empty() {
        return Err(MetricError::NoQueries);
    }
    let mut correct = 0u64;
    for q in queries {
        correct += u64::from(predict_point_order(disp, q)? == q.relation);
    }
    let wrong = queries.len() as u64 - correct;
    Ok(PointPairReport {
        n_correct: correct,
        n_wrong: wrong,
        whdr: wrong as f64 / queries.len() as f64,
    })
}

/// On-disk query file: `{"queries": [{"p1": [r, c], "p2": [r, c], "relation": "closer"}]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub queries: Vec<RawQuery>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuery {
    pub p1: [usize; 2],
    pub p2: [usize; 2],
    pub relation: RawRelation,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawRelation {
    Closer,
    Equal,
    Farther,
}

impl QueryFile {
    pub fn into_queries(self) -> Vec<PointQuery> {
        self.queries
            .into_iter()
            .map(|q| PointQuery {
                p1: (q.p1[0], q.p1[1]),
                p2: (q.p2[0], q.p2[1]),
                relation: match q.relation {
                    RawRelation::Closer => DepthOrder::Closer,
                    RawRelation::Equal => DepthOrder::Equal,
                    RawRelation::Farther => DepthOrder::Farther,
                },
            })
            .collect()
    }
}
