//! Adapter for the distributed order files.
//!
//! ```json
//! {"annotations": [{
//!   "image_id": 139,
//!   "instance_ids": [2205, 2211, 2227],
//!   "occlusion": [{"order": "0<2", "count": 2}],
//!   "depth": [{"order": "1=2", "count": 3, "overlap": true}]
//! }]}
//! ```
//!
//! Ids inside order tokens are positions in `instance_ids`; the adapter
//! uses those positions as instance ids. Unknown keys are ignored. When
//! `implied_none` is set, every depth-annotated pair without an occlusion
//! entry receives an uncounted "no occlusion" order, for files that list
//! occluding pairs only.

use serde::Deserialize;

use crate::io::dataset::{DatasetError, DatasetFile};
use crate::io::token::{parse_depth_token, parse_occlusion_token};
use crate::model::{
    DepthRelation, ImageAnnotation, ImageId, InstanceId, InstanceRef, OcclusionRelation, PairOrder,
    RangeKind,
};

#[derive(Debug, Deserialize)]
struct ReleasedFile {
    annotations: Vec<ReleasedImage>,
}

#[derive(Debug, Deserialize)]
struct ReleasedImage {
    image_id: ImageId,
    instance_ids: Vec<u64>,
    #[serde(default)]
    occlusion: Vec<ReleasedOrder>,
    #[serde(default)]
    depth: Vec<ReleasedOrder>,
}

#[derive(Debug, Deserialize)]
struct ReleasedOrder {
    order: String,
    count: Option<u32>,
    overlap: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReleasedOptions {
    pub implied_none: bool,
}

pub fn parse_released(bytes: &[u8], opts: ReleasedOptions) -> Result<DatasetFile, DatasetError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let raw: ReleasedFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        DatasetError::Schema {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    let images = raw
        .annotations
        .into_iter()
        .enumerate()
        .map(|(i, img)| convert(i, img, opts))
        .collect::<Result<Vec<_>, _>>()?;
    DatasetFile::new(images)
}

fn invalid(path: String, message: impl Into<String>) -> DatasetError {
    DatasetError::Invalid {
        path,
        message: message.into(),
    }
}

fn convert(
    i: usize,
    img: ReleasedImage,
    opts: ReleasedOptions,
) -> Result<ImageAnnotation, DatasetError> {
    let n = img.instance_ids.len();
    let instances = (0..n as InstanceId)
        .map(|k| InstanceRef::new(img.image_id, k))
        .collect();
    let in_range = |path: &String, first: InstanceId, second: InstanceId| match [first, second]
        .into_iter()
        .find(|&id| id as usize >= n)
    {
        Some(id) => Err(invalid(
            path.clone(),
            format!("position {id} outside instance_ids"),
        )),
        None => Ok(()),
    };
    let mut pairs: std::collections::BTreeMap<(InstanceId, InstanceId), PairOrder> =
        Default::default();

    for (k, o) in img.occlusion.iter().enumerate() {
        let path = format!("annotations[{i}].occlusion[{k}].order");
        let tok = parse_occlusion_token(&o.order).map_err(|source| DatasetError::Token {
            path: path.clone(),
            source,
        })?;
        in_range(&path, tok.first, tok.second)?;
        let (a, b, rel) = if tok.first < tok.second {
            (tok.first, tok.second, tok.relation)
        } else {
            (tok.second, tok.first, tok.relation.swapped())
        };
        let entry = pairs.entry((a, b)).or_insert_with(|| PairOrder::new(a, b));
        if entry.occlusion.is_some() {
            return Err(invalid(
                path,
                format!("duplicate occlusion order for pair ({a}, {b})"),
            ));
        }
        entry.occlusion = Some(rel);
        entry.occlusion_count = o.count;
    }
    for (k, o) in img.depth.iter().enumerate() {
        let path = format!("annotations[{i}].depth[{k}].order");
        let tok = parse_depth_token(&o.order).map_err(|source| DatasetError::Token {
            path: path.clone(),
            source,
        })?;
        in_range(&path, tok.first, tok.second)?;
        let (a, b, order) = if tok.first < tok.second {
            (tok.first, tok.second, tok.relation)
        } else {
            (tok.second, tok.first, tok.relation.swapped())
        };
        let range = if o.overlap.unwrap_or(false) {
            RangeKind::Overlap
        } else {
            RangeKind::Distinct
        };
        let entry = pairs.entry((a, b)).or_insert_with(|| PairOrder::new(a, b));
        if entry.depth.is_some() {
            return Err(invalid(
                path,
                format!("duplicate depth order for pair ({a}, {b})"),
            ));
        }
        entry.depth = Some(DepthRelation::new(order, range));
        entry.depth_count = o.count;
    }
    if opts.implied_none {
        for p in pairs.values_mut() {
            if p.occlusion.is_none() {
                p.occlusion = Some(OcclusionRelation::None);
            }
        }
    }
    ImageAnnotation::new(img.image_id, instances, pairs.into_values().collect())
        .map_err(|e| invalid(format!("annotations[{i}]"), e.to_string()))
}
