//! Core domain types: instances, pairwise occlusion/depth orders and
//! per-image annotations.
//!
//! Pairs are always stored canonically with `a < b`. Relations are read
//! "A relative to B", so swapping the endpoints flips directional labels
//! (`AoccludesB` <-> `BoccludesA`, `Closer` <-> `Farther`) and leaves the
//! symmetric ones untouched.

use std::collections::HashSet;

use thiserror::Error;

pub type ImageId = u64;
pub type InstanceId = u32;

/// Minimum number of agreeing workers behind any annotation.
pub const MIN_COUNT: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("pair ({0}, {0}) relates an instance to itself")]
    SelfPair(InstanceId),
    #[error("pair ({a}, {b}) is not in canonical order (expected a < b)")]
    NotCanonical { a: InstanceId, b: InstanceId },
    #[error("pair ({a}, {b}) carries neither an occlusion nor a depth annotation")]
    EmptyPair { a: InstanceId, b: InstanceId },
    #[error("count {count} is below the minimum of {MIN_COUNT}")]
    CountTooSmall { count: u32 },
    #[error("count present without the corresponding annotation")]
    OrphanCount,
    #[error("instance {0} has a non-positive area")]
    NonPositiveArea(InstanceId),
    #[error("instance id {0} declared more than once")]
    DuplicateInstance(InstanceId),
    #[error("pair ({a}, {b}) declared more than once")]
    DuplicatePair { a: InstanceId, b: InstanceId },
    #[error("pair ({a}, {b}) references undeclared instance {missing}")]
    UnknownInstance {
        a: InstanceId,
        b: InstanceId,
        missing: InstanceId,
    },
    #[error("instance {instance} belongs to image {found}, not {expected}")]
    ForeignInstance {
        instance: InstanceId,
        expected: ImageId,
        found: ImageId,
    },
    #[error("label {0:?} is not available in the selected occlusion mode")]
    UnsupportedLabel(OcclusionRelation),
}

/// One annotated object instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceRef {
    pub image_id: ImageId,
    pub instance_id: InstanceId,
    pub class_label: Option<String>,
    /// Pixel count of the instance mask.
    pub area: Option<u32>,
    /// Largest row index of any mask pixel.
    pub bottom_row: Option<u32>,
}

impl InstanceRef {
    pub fn new(image_id: ImageId, instance_id: InstanceId) -> Self {
        Self {
            image_id,
            instance_id,
            class_label: None,
            area: None,
            bottom_row: None,
        }
    }

    pub fn with_area(mut self, area: u32) -> Self {
        self.area = Some(area);
        self
    }

    pub fn with_bottom_row(mut self, row: u32) -> Self {
        self.bottom_row = Some(row);
        self
    }

    pub fn with_class(mut self, class: impl Into<String>) -> Self {
        self.class_label = Some(class.into());
        self
    }
}

/// Occlusion relation of A with respect to B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OcclusionRelation {
    None,
    AoccludesB,
    BoccludesA,
    Bidirectional,
}

impl OcclusionRelation {
    pub const ALL: [OcclusionRelation; 4] = [
        OcclusionRelation::None,
        OcclusionRelation::AoccludesB,
        OcclusionRelation::BoccludesA,
        OcclusionRelation::Bidirectional,
    ];

    /// Builds the relation from the two directed flags `(A occludes B, B occludes A)`.
    pub fn from_flags(a_occludes_b: bool, b_occludes_a: bool) -> Self {
        match (a_occludes_b, b_occludes_a) {
            (false, false) => Self::None,
            (true, false) => Self::AoccludesB,
            (false, true) => Self::BoccludesA,
            (true, true) => Self::Bidirectional,
        }
    }

    pub fn flags(self) -> (bool, bool) {
        match self {
            Self::None => (false, false),
            Self::AoccludesB => (true, false),
            Self::BoccludesA => (false, true),
            Self::Bidirectional => (true, true),
        }
    }

    pub fn swapped(self) -> Self {
        let (ab, ba) = self.flags();
        Self::from_flags(ba, ab)
    }
}

/// Ordinal depth of A relative to B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepthOrder {
    Closer,
    Equal,
    Farther,
}

impl DepthOrder {
    pub const ALL: [DepthOrder; 3] = [DepthOrder::Closer, DepthOrder::Equal, DepthOrder::Farther];

    /// Signed code: closer = 1, equal = 0, farther = -1.
    pub fn sign(self) -> i8 {
        match self {
            Self::Closer => 1,
            Self::Equal => 0,
            Self::Farther => -1,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Self::Closer => Self::Farther,
            Self::Equal => Self::Equal,
            Self::Farther => Self::Closer,
        }
    }
}

/// Whether the two instances' depth ranges are disjoint or interleaved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RangeKind {
    Distinct,
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepthRelation {
    pub order: DepthOrder,
    pub range: RangeKind,
}

impl DepthRelation {
    pub fn new(order: DepthOrder, range: RangeKind) -> Self {
        Self { order, range }
    }

    pub fn distinct(order: DepthOrder) -> Self {
        Self::new(order, RangeKind::Distinct)
    }

    pub fn overlap(order: DepthOrder) -> Self {
        Self::new(order, RangeKind::Overlap)
    }

    pub fn swapped(self) -> Self {
        Self::new(self.order.swapped(), self.range)
    }
}

/// Annotated orders for one unordered instance pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrder {
    pub a: InstanceId,
    pub b: InstanceId,
    pub occlusion: Option<OcclusionRelation>,
    pub occlusion_count: Option<u32>,
    pub depth: Option<DepthRelation>,
    pub depth_count: Option<u32>,
}

impl PairOrder {
    pub fn new(a: InstanceId, b: InstanceId) -> Self {
        Self {
            a,
            b,
            occlusion: None,
            occlusion_count: None,
            depth: None,
            depth_count: None,
        }
    }

    pub fn with_occlusion(mut self, rel: OcclusionRelation, count: Option<u32>) -> Self {
        self.occlusion = Some(rel);
        self.occlusion_count = count;
        self
    }

    pub fn with_depth(mut self, rel: DepthRelation, count: Option<u32>) -> Self {
        self.depth = Some(rel);
        self.depth_count = count;
        self
    }

    pub fn key(&self) -> (InstanceId, InstanceId) {
        (self.a, self.b)
    }

    /// The same facts seen from the other endpoint.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            occlusion: self.occlusion.map(OcclusionRelation::swapped),
            occlusion_count: self.occlusion_count,
            depth: self.depth.map(DepthRelation::swapped),
            depth_count: self.depth_count,
        }
    }

    /// Checks the stored-pair invariants. Counts are optional (predictions
    /// carry none) but must be at least [`MIN_COUNT`] when present.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.a == self.b {
            return Err(ModelError::SelfPair(self.a));
        }
        if self.a > self.b {
            return Err(ModelError::NotCanonical {
                a: self.a,
                b: self.b,
            });
        }
        if self.occlusion.is_none() && self.depth.is_none() {
            return Err(ModelError::EmptyPair {
                a: self.a,
                b: self.b,
            });
        }
        for (present, count) in [
            (self.occlusion.is_some(), self.occlusion_count),
            (self.depth.is_some(), self.depth_count),
        ] {
            match count {
                Some(_) if !present => return Err(ModelError::OrphanCount),
                Some(c) if c < MIN_COUNT => return Err(ModelError::CountTooSmall { count: c }),
                _ => {}
            }
        }
        Ok(())
    }
}

/// Returns the pair with `a < b`, flipping directional relations if the
/// endpoints had to be swapped.
pub fn canonicalize(pair: &PairOrder) -> Result<PairOrder, ModelError> {
    if pair.a == pair.b {
        return Err(ModelError::SelfPair(pair.a));
    }
    Ok(if pair.a > pair.b {
        pair.swapped()
    } else {
        pair.clone()
    })
}

/// All instances and pairwise orders of one image.
///
/// Instances are kept sorted by id and pairs by `(a, b)`, so two
/// annotations holding the same facts compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageAnnotation {
    image_id: ImageId,
    instances: Vec<InstanceRef>,
    pairs: Vec<PairOrder>,
}

impl ImageAnnotation {
    /// Validates and normalizes. Pairs may arrive in either orientation.
    pub fn new(
        image_id: ImageId,
        mut instances: Vec<InstanceRef>,
        pairs: Vec<PairOrder>,
    ) -> Result<Self, ModelError> {
        instances.sort_by_key(|inst| inst.instance_id);
        for w in instances.windows(2) {
            if w[0].instance_id == w[1].instance_id {
                return Err(ModelError::DuplicateInstance(w[0].instance_id));
            }
        }
        for inst in &instances {
            if inst.image_id != image_id {
                return Err(ModelError::ForeignInstance {
                    instance: inst.instance_id,
                    expected: image_id,
                    found: inst.image_id,
                });
            }
            if inst.area == Some(0) {
                return Err(ModelError::NonPositiveArea(inst.instance_id));
            }
        }
        let declared: HashSet<InstanceId> = instances.iter().map(|i| i.instance_id).collect();
        let mut canonical = Vec::with_capacity(pairs.len());
        for pair in &pairs {
            let p = canonicalize(pair)?;
            p.validate()?;
            for id in [p.a, p.b] {
                if !declared.contains(&id) {
                    return Err(ModelError::UnknownInstance {
                        a: p.a,
                        b: p.b,
                        missing: id,
                    });
                }
            }
            canonical.push(p);
        }
        canonical.sort_by_key(PairOrder::key);
        for w in canonical.windows(2) {
            if w[0].key() == w[1].key() {
                return Err(ModelError::DuplicatePair {
                    a: w[0].a,
                    b: w[0].b,
                });
            }
        }
        Ok(Self {
            image_id,
            instances,
            pairs: canonical,
        })
    }

    pub fn image_id(&self) -> ImageId {
        self.image_id
    }

    pub fn instances(&self) -> &[InstanceRef] {
        &self.instances
    }

    pub fn pairs(&self) -> &[PairOrder] {
        &self.pairs
    }

    pub fn instance(&self, id: InstanceId) -> Option<&InstanceRef> {
        self.instances
            .binary_search_by_key(&id, |i| i.instance_id)
            .ok()
            .map(|idx| &self.instances[idx])
    }

    pub fn pair(&self, a: InstanceId, b: InstanceId) -> Option<&PairOrder> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs
            .binary_search_by_key(&key, PairOrder::key)
            .ok()
            .map(|idx| &self.pairs[idx])
    }
}

/// Label sets used when evaluating occlusion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcclusionMode {
    /// All four labels.
    WithBidirectional,
    /// `None`, `AoccludesB`, `BoccludesA` only.
    WithoutBidirectional,
}

/// Maps a relation into the label set of `mode`. Bidirectional labels have
/// no image in the three-label set; callers drop such pairs beforehand.
pub fn occlusion_mode_project(
    rel: OcclusionRelation,
    mode: OcclusionMode,
) -> Result<OcclusionRelation, ModelError> {
    match (mode, rel) {
        (OcclusionMode::WithoutBidirectional, OcclusionRelation::Bidirectional) => {
            Err(ModelError::UnsupportedLabel(rel))
        }
        _ => Ok(rel),
    }
}
