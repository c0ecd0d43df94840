//! Collection-protocol helpers: instance capping and the size floor.
//!
//! Sampling uses SplitMix64 so results can be reproduced from the seed in
//! any language:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15            (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! return z ^ (z >> 31)
//! ```
//!
//! `subsample_instances` sorts instances by id and runs a partial
//! Fisher-Yates shuffle: for `i` in `0..cap`, swap position `i` with
//! `i + next() % (n - i)`. The first `cap` entries are kept.

use thiserror::Error;

use crate::model::{ImageAnnotation, ImageId, InstanceId, InstanceRef};

/// Instances smaller than `MIN_INSTANCE_SIDE^2` pixels are flagged.
pub const MIN_INSTANCE_SIDE: u32 = 25;

/// Default per-image instance cap.
pub const DEFAULT_INSTANCE_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplingError {
    #[error("instance cap must be at least 1")]
    ZeroCap,
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Seed for one image of a dataset-wide run: the first SplitMix64 output
/// after seeding with `seed + image_id`.
pub fn image_seed(seed: u64, image_id: ImageId) -> u64 {
    SplitMix64::new(seed.wrapping_add(image_id)).next_u64()
}

/// Keeps at most `cap` instances, chosen uniformly with `seed`, and the
/// pairs among them.
pub fn subsample_instances(
    ann: &ImageAnnotation,
    cap: usize,
    seed: u64,
) -> Result<ImageAnnotation, SamplingError> {
    if cap == 0 {
        return Err(SamplingError::ZeroCap);
    }
    let n = ann.instances().len();
    if n <= cap {
        return Ok(ann.clone());
    }
    let mut ids: Vec<InstanceId> = ann.instances().iter().map(|i| i.instance_id).collect();
    let mut rng = SplitMix64::new(seed);
    for i in 0..cap {
        let j = i + (rng.next_u64() % (n - i) as u64) as usize;
        ids.swap(i, j);
    }
    ids.truncate(cap);
    ids.sort_unstable();
    let keep = |id: InstanceId| ids.binary_search(&id).is_ok();
    let instances = ann
        .instances()
        .iter()
        .filter(|i| keep(i.instance_id))
        .cloned()
        .collect();
    let pairs = ann
        .pairs()
        .iter()
        .filter(|p| keep(p.a) && keep(p.b))
        .cloned()
        .collect();
    Ok(ImageAnnotation::new(ann.image_id(), instances, pairs)
        .expect("subset of a valid annotation is valid"))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SmallInstanceReport {
    /// Instances with area below `min_side^2`.
    pub flagged: Vec<InstanceId>,
    /// Instances without an area; not judged.
    pub missing_area: Vec<InstanceId>,
}

pub fn flag_small_instances(instances: &[InstanceRef], min_side: u32) -> SmallInstanceReport {
    let floor = u64::from(min_side) * u64::from(min_side);
    let mut report = SmallInstanceReport::default();
    for inst in instances {
        match inst.area {
            Some(area) if u64::from(area) < floor => report.flagged.push(inst.instance_id),
            Some(_) => {}
            None => report.missing_area.push(inst.instance_id),
        }
    }
    report
}
