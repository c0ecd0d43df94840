//! Seeded random annotation datasets for fixtures and smoke tests.

use crate::io::dataset::DatasetFile;
use crate::model::{
    DepthOrder, DepthRelation, ImageAnnotation, InstanceRef, OcclusionRelation, PairOrder,
    RangeKind,
};
use crate::stats::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthSpec {
    pub images: usize,
    /// Instances per image are drawn from `2..=max_instances`.
    pub max_instances: u32,
    pub seed: u64,
}

fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

/// Every pair gets an occlusion order, a depth order, or both; counts are
/// drawn from `2..=5`.
pub fn random_dataset(spec: SynthSpec) -> DatasetFile {
    let mut rng = SplitMix64::new(spec.seed);
    let max_instances = spec.max_instances.max(2);
    let images = (0..spec.images as u64)
        .map(|k| {
            let image_id = 1000 + k;
            let n = 2 + below(&mut rng, u64::from(max_instances - 1)) as u32;
            let instances = (1..=n)
                .map(|id| {
                    InstanceRef::new(image_id, id)
                        .with_area(1 + below(&mut rng, 5000) as u32)
                        .with_bottom_row(below(&mut rng, 480) as u32)
                })
                .collect();
            let mut pairs = Vec::new();
            for a in 1..=n {
                for b in a + 1..=n {
                    let which = below(&mut rng, 3);
                    let mut p = PairOrder::new(a, b);
                    if which != 1 {
                        let rel = OcclusionRelation::ALL[below(&mut rng, 4) as usize];
                        p = p.with_occlusion(rel, Some(2 + below(&mut rng, 4) as u32));
                    }
                    if which != 0 {
                        let order = DepthOrder::ALL[below(&mut rng, 3) as usize];
                        let range = if below(&mut rng, 4) == 0 {
                            RangeKind::Overlap
                        } else {
                            RangeKind::Distinct
                        };
                        p = p.with_depth(
                            DepthRelation::new(order, range),
                            Some(2 + below(&mut rng, 4) as u32),
                        );
                    }
                    pairs.push(p);
                }
            }
            ImageAnnotation::new(image_id, instances, pairs).expect("generated annotation is valid")
        })
        .collect();
    DatasetFile::new(images).expect("image ids are distinct")
}
