//! Annotation files.
//!
//! ```json
//! {"images": [{
//!   "image_id": 139,
//!   "instances": [{"id": 1, "class": "person", "area": 5210, "bottom_row": 420}],
//!   "occlusion": [{"order": "1<2", "count": 2}],
//!   "depth": [{"order": "1=2", "count": 3, "overlap": false}]
//! }]}
//! ```
//!
//! `class`, `area` and `bottom_row` are optional. In annotation files every
//! order carries a `count` (>= 2) and depth orders carry `overlap`; in
//! prediction files both may be omitted. Output is pretty-printed with
//! two-space indentation, images sorted by id and pairs in canonical order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::token::{parse_depth_token, parse_occlusion_token, TokenError};
use crate::model::{
    DepthRelation, ImageAnnotation, ImageId, InstanceId, InstanceRef, PairOrder, RangeKind,
    MIN_COUNT,
};
use crate::stats::{flag_small_instances, MIN_INSTANCE_SIDE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("invalid UTF-8 at byte {offset}")]
    Utf8 { offset: usize },
    #[error("{path}: {message} (line {line}, column {column})")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Token { path: String, source: TokenError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl DatasetError {
    /// Document path of the offending value, e.g. `images[0].depth[2].count`.
    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Utf8 { .. } => None,
            Self::Schema { path, .. } | Self::Token { path, .. } | Self::Invalid { path, .. } => {
                Some(path)
            }
        }
    }

    fn invalid(path: String, message: impl Into<String>) -> Self {
        Self::Invalid {
            path,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Ground-truth annotations: counts and overlap flags are mandatory.
    Annotations,
    /// Predicted orders: counts and overlap flags optional.
    Predictions,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetFile {
    images: Vec<ImageAnnotation>,
    small_instances: Vec<(ImageId, InstanceId)>,
}

impl DatasetFile {
    /// Sorts images by id and rejects duplicates.
    pub fn new(mut images: Vec<ImageAnnotation>) -> Result<Self, DatasetError> {
        images.sort_by_key(ImageAnnotation::image_id);
        for (i, w) in images.windows(2).enumerate() {
            if w[0].image_id() == w[1].image_id() {
                return Err(DatasetError::invalid(
                    format!("images[{}].image_id", i + 1),
                    format!("duplicate image id {}", w[0].image_id()),
                ));
            }
        }
        let small_instances = images
            .iter()
            .flat_map(|img| {
                flag_small_instances(img.instances(), MIN_INSTANCE_SIDE)
                    .flagged
                    .into_iter()
                    .map(move |id| (img.image_id(), id))
            })
            .collect();
        Ok(Self {
            images,
            small_instances,
        })
    }

    pub fn images(&self) -> &[ImageAnnotation] {
        &self.images
    }

    pub fn image(&self, id: ImageId) -> Option<&ImageAnnotation> {
        self.images
            .binary_search_by_key(&id, ImageAnnotation::image_id)
            .ok()
            .map(|i| &self.images[i])
    }

    /// Instances whose area is below the collection-time size floor.
    pub fn small_instances(&self) -> &[(ImageId, InstanceId)] {
        &self.small_instances
    }

    pub fn into_images(self) -> Vec<ImageAnnotation> {
        self.images
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    images: Vec<RawImage>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImage {
    image_id: ImageId,
    instances: Vec<RawInstance>,
    #[serde(default)]
    occlusion: Vec<RawOcclusion>,
    #[serde(default)]
    depth: Vec<RawDepth>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    id: InstanceId,
    #[serde(rename = "class", default, skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    area: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bottom_row: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOcclusion {
    order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDepth {
    order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    overlap: Option<bool>,
}

/// Parses and validates an annotation file.
pub fn parse_dataset(bytes: &[u8]) -> Result<DatasetFile, DatasetError> {
    parse_with_mode(bytes, ParseMode::Annotations)
}

/// Parses a prediction file (orders without counts).
pub fn parse_predictions(bytes: &[u8]) -> Result<DatasetFile, DatasetError> {
    parse_with_mode(bytes, ParseMode::Predictions)
}

pub fn parse_with_mode(bytes: &[u8], mode: ParseMode) -> Result<DatasetFile, DatasetError> {
    let text = std::str::from_utf8(bytes).map_err(|e| DatasetError::Utf8 {
        offset: e.valid_up_to(),
    })?;
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawDataset = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        schema_error(path, e.into_inner())
    })?;
    de.end().map_err(|e| schema_error(String::new(), e))?;
    let mut seen_ids: HashMap<ImageId, usize> = HashMap::new();
    let mut images = Vec::with_capacity(raw.images.len());
    for (i, img) in raw.images.into_iter().enumerate() {
        if let Some(first) = seen_ids.insert(img.image_id, i) {
            return Err(DatasetError::invalid(
                format!("images[{i}].image_id"),
                format!(
                    "duplicate image id {} (first at images[{first}])",
                    img.image_id
                ),
            ));
        }
        images.push(convert_image(i, img, mode)?);
    }
    DatasetFile::new(images)
}

fn schema_error(path: String, inner: serde_json::Error) -> DatasetError {
    DatasetError::Schema {
        path: if path.is_empty() || path == "." {
            "$".to_owned()
        } else {
            path
        },
        line: inner.line(),
        column: inner.column(),
        message: strip_position(&inner.to_string()),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(idx) => msg[..idx].to_owned(),
        None => msg.to_owned(),
    }
}

fn check_count(
    path: String,
    count: Option<u32>,
    mode: ParseMode,
) -> Result<Option<u32>, DatasetError> {
    match count {
        None if mode == ParseMode::Annotations => Err(DatasetError::invalid(path, "missing count")),
        Some(c) if c < MIN_COUNT => Err(DatasetError::invalid(
            path,
            format!("count {c} is below the minimum of {MIN_COUNT} agreeing workers"),
        )),
        c => Ok(c),
    }
}

fn convert_image(
    i: usize,
    img: RawImage,
    mode: ParseMode,
) -> Result<ImageAnnotation, DatasetError> {
    let image_id = img.image_id;
    let mut declared: HashMap<InstanceId, usize> = HashMap::new();
    let mut instances = Vec::with_capacity(img.instances.len());
    for (j, inst) in img.instances.into_iter().enumerate() {
        if let Some(first) = declared.insert(inst.id, j) {
            return Err(DatasetError::invalid(
                format!("images[{i}].instances[{j}].id"),
                format!(
                    "duplicate instance id {} (first at instances[{first}])",
                    inst.id
                ),
            ));
        }
        if inst.area == Some(0) {
            return Err(DatasetError::invalid(
                format!("images[{i}].instances[{j}].area"),
                "area must be positive",
            ));
        }
        instances.push(InstanceRef {
            image_id,
            instance_id: inst.id,
            class_label: inst.class,
            area: inst.area,
            bottom_row: inst.bottom_row,
        });
    }
    let check_ids = |path: &str, first: InstanceId, second: InstanceId| {
        for id in [first, second] {
            if !declared.contains_key(&id) {
                return Err(DatasetError::invalid(
                    path.to_owned(),
                    format!("unknown instance id {id}"),
                ));
            }
        }
        Ok(())
    };

    let mut pairs: BTreeMap<(InstanceId, InstanceId), PairOrder> = BTreeMap::new();
    for (k, occ) in img.occlusion.into_iter().enumerate() {
        let path = format!("images[{i}].occlusion[{k}].order");
        let tok = parse_occlusion_token(&occ.order).map_err(|source| DatasetError::Token {
            path: path.clone(),
            source,
        })?;
        check_ids(&path, tok.first, tok.second)?;
        let count = check_count(format!("images[{i}].occlusion[{k}].count"), occ.count, mode)?;
        let (a, b, rel) = if tok.first < tok.second {
            (tok.first, tok.second, tok.relation)
        } else {
            (tok.second, tok.first, tok.relation.swapped())
        };
        let entry = pairs.entry((a, b)).or_insert_with(|| PairOrder::new(a, b));
        if entry.occlusion.is_some() {
            return Err(DatasetError::invalid(
                path,
                format!("duplicate occlusion order for pair ({a}, {b})"),
            ));
        }
        entry.occlusion = Some(rel);
        entry.occlusion_count = count;
    }
    for (k, dep) in img.depth.into_iter().enumerate() {
        let path = format!("images[{i}].depth[{k}].order");
        let tok = parse_depth_token(&dep.order).map_err(|source| DatasetError::Token {
            path: path.clone(),
            source,
        })?;
        check_ids(&path, tok.first, tok.second)?;
        let count = check_count(format!("images[{i}].depth[{k}].count"), dep.count, mode)?;
        let overlap = match (dep.overlap, mode) {
            (Some(o), _) => o,
            (None, ParseMode::Predictions) => false,
            (None, ParseMode::Annotations) => {
                return Err(DatasetError::invalid(
                    format!("images[{i}].depth[{k}].overlap"),
                    "missing overlap flag",
                ))
            }
        };
        let range = if overlap {
            RangeKind::Overlap
        } else {
            RangeKind::Distinct
        };
        let (a, b, order) = if tok.first < tok.second {
            (tok.first, tok.second, tok.relation)
        } else {
            (tok.second, tok.first, tok.relation.swapped())
        };
        let entry = pairs.entry((a, b)).or_insert_with(|| PairOrder::new(a, b));
        if entry.depth.is_some() {
            return Err(DatasetError::invalid(
                path,
                format!("duplicate depth order for pair ({a}, {b})"),
            ));
        }
        entry.depth = Some(DepthRelation::new(order, range));
        entry.depth_count = count;
    }
    ImageAnnotation::new(image_id, instances, pairs.into_values().collect())
        .map_err(|e| DatasetError::invalid(format!("images[{i}]"), e.to_string()))
}

fn to_raw(d: &DatasetFile, mode: ParseMode) -> RawDataset {
    let with_meta = mode == ParseMode::Annotations;
    let images = d
        .images()
        .iter()
        .map(|img| RawImage {
            image_id: img.image_id(),
            instances: img
                .instances()
                .iter()
                .map(|inst| RawInstance {
                    id: inst.instance_id,
                    class: inst.class_label.clone(),
                    area: inst.area,
                    bottom_row: inst.bottom_row,
                })
                .collect(),
            occlusion: img
                .pairs()
                .iter()
                .filter_map(|p| {
                    p.occlusion.map(|rel| RawOcclusion {
                        order: crate::io::token::format_occlusion(p.a, p.b, rel),
                        count: p.occlusion_count.filter(|_| with_meta),
                    })
                })
                .collect(),
            depth: img
                .pairs()
                .iter()
                .filter_map(|p| {
                    p.depth.map(|rel| RawDepth {
                        order: crate::io::token::format_depth(p.a, p.b, rel.order),
                        count: p.depth_count.filter(|_| with_meta),
                        overlap: with_meta.then_some(rel.range == RangeKind::Overlap),
                    })
                })
                .collect(),
        })
        .collect();
    RawDataset { images }
}

fn render(raw: &RawDataset) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(raw).expect("plain data always serializes");
    out.push(b'\n');
    out
}

/// Deterministic annotation-file bytes.
pub fn serialize_dataset(d: &DatasetFile) -> Vec<u8> {
    render(&to_raw(d, ParseMode::Annotations))
}

/// Orders only: counts and overlap flags are dropped.
pub fn serialize_predictions(d: &DatasetFile) -> Vec<u8> {
    render(&to_raw(d, ParseMode::Predictions))
}
