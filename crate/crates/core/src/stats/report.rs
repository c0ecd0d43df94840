//! Dataset statistics and occlusion/depth conditional tables.
//!
//! Per-image counts are gathered independently and merged by addition;
//! normalization happens once at the end, so the result does not depend
//! on image order or on how the work was split.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::io::dataset::DatasetFile;
use crate::model::{
    DepthOrder, DepthRelation, ImageAnnotation, OcclusionRelation, RangeKind, MIN_COUNT,
};

/// Occlusion labels, in table order.
pub const OCCLUSION_LABELS: [&str; 4] = ["none", "a_occludes_b", "b_occludes_a", "bidirectional"];

/// Depth labels, in table order.
pub const DEPTH_LABELS: [&str; 6] = [
    "closer",
    "farther",
    "equal",
    "overlap_closer",
    "overlap_farther",
    "overlap_equal",
];

pub fn occlusion_index(rel: OcclusionRelation) -> usize {
    match rel {
        OcclusionRelation::None => 0,
        OcclusionRelation::AoccludesB => 1,
        OcclusionRelation::BoccludesA => 2,
        OcclusionRelation::Bidirectional => 3,
    }
}

pub fn depth_index(rel: DepthRelation) -> usize {
    let base = match rel.order {
        DepthOrder::Closer => 0,
        DepthOrder::Farther => 1,
        DepthOrder::Equal => 2,
    };
    match rel.range {
        RangeKind::Distinct => base,
        RangeKind::Overlap => base + 3,
    }
}

/// Raw counts; the mergeable half of [`StatsReport`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsCounts {
    pub n_images: u64,
    pub n_instances: u64,
    pub n_occlusion_orders: u64,
    pub n_depth_orders: u64,
    pub instances_per_image: BTreeMap<usize, u64>,
    pub occlusion_count_hist: BTreeMap<u32, u64>,
    pub depth_count_hist: BTreeMap<u32, u64>,
    /// Indexed like [`OCCLUSION_LABELS`].
    pub occlusion_types: [u64; 4],
    /// Indexed like [`DEPTH_LABELS`].
    pub depth_types: [u64; 6],
    /// `joint[o][d]`: pairs annotated with occlusion label `o` and depth label `d`.
    pub joint: [[u64; 6]; 4],
}

impl StatsCounts {
    pub fn from_image(img: &ImageAnnotation) -> Self {
        let mut c = Self {
            n_images: 1,
            n_instances: img.instances().len() as u64,
            ..Self::default()
        };
        *c.instances_per_image
            .entry(img.instances().len())
            .or_default() += 1;
        for p in img.pairs() {
            if let Some(rel) = p.occlusion {
                c.n_occlusion_orders += 1;
                c.occlusion_types[occlusion_index(rel)] += 1;
                if let Some(n) = p.occlusion_count {
                    *c.occlusion_count_hist.entry(n).or_default() += 1;
                }
            }
            if let Some(rel) = p.depth {
                c.n_depth_orders += 1;
                c.depth_types[depth_index(rel)] += 1;
                if let Some(n) = p.depth_count {
                    *c.depth_count_hist.entry(n).or_default() += 1;
                }
            }
            if let (Some(o), Some(d)) = (p.occlusion, p.depth) {
                c.joint[occlusion_index(o)][depth_index(d)] += 1;
            }
        }
        c
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.n_images += other.n_images;
        self.n_instances += other.n_instances;
        self.n_occlusion_orders += other.n_occlusion_orders;
        self.n_depth_orders += other.n_depth_orders;
        for (k, v) in &other.instances_per_image {
            *self.instances_per_image.entry(*k).or_default() += v;
        }
        for (k, v) in &other.occlusion_count_hist {
            *self.occlusion_count_hist.entry(*k).or_default() += v;
        }
        for (k, v) in &other.depth_count_hist {
            *self.depth_count_hist.entry(*k).or_default() += v;
        }
        for (a, b) in self.occlusion_types.iter_mut().zip(other.occlusion_types) {
            *a += b;
        }
        for (a, b) in self.depth_types.iter_mut().zip(other.depth_types) {
            *a += b;
        }
        for (row, other_row) in self.joint.iter_mut().zip(&other.joint) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
        self
    }
}

/// Column-conditional probability table `P(row | column)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    pub row_labels: Vec<&'static str>,
    pub col_labels: Vec<&'static str>,
    pub counts: Vec<Vec<u64>>,
    pub probs: Vec<Vec<f64>>,
    /// Columns with no observations; their probabilities are all zero.
    pub empty_columns: Vec<usize>,
}

impl ConditionalTable {
    fn from_counts(
        row_labels: &[&'static str],
        col_labels: &[&'static str],
        counts: Vec<Vec<u64>>,
    ) -> Self {
        let cols = col_labels.len();
        let totals: Vec<u64> = (0..cols)
            .map(|c| counts.iter().map(|r| r[c]).sum())
            .collect();
        let probs = counts
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&totals)
                    .map(|(&n, &t)| if t == 0 { 0.0 } else { n as f64 / t as f64 })
                    .collect()
            })
            .collect();
        let empty_columns = (0..cols).filter(|&c| totals[c] == 0).collect();
        Self {
            row_labels: row_labels.to_vec(),
            col_labels: col_labels.to_vec(),
            counts,
            probs,
            empty_columns,
        }
    }

    pub fn get(&self, row: &str, col: &str) -> Option<f64> {
        let r = self.row_labels.iter().position(|l| *l == row)?;
        let c = self.col_labels.iter().position(|l| *l == col)?;
        Some(self.probs[r][c])
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.col_labels.len())
            .map(|c| self.probs.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// Builds `P(occlusion | depth)` and `P(depth | occlusion)` from joint counts.
pub fn tables_from_joint(joint: &[[u64; 6]; 4]) -> (ConditionalTable, ConditionalTable) {
    let occ_given_depth = joint.iter().map(|r| r.to_vec()).collect();
    let depth_given_occ = (0..6)
        .map(|d| (0..4).map(|o| joint[o][d]).collect())
        .collect();
    (
        ConditionalTable::from_counts(&OCCLUSION_LABELS, &DEPTH_LABELS, occ_given_depth),
        ConditionalTable::from_counts(&DEPTH_LABELS, &OCCLUSION_LABELS, depth_given_occ),
    )
}

/// Conditional tables over pairs carrying both an occlusion and a depth order.
pub fn conditional_tables(d: &DatasetFile) -> (ConditionalTable, ConditionalTable) {
    let counts = gather(d);
    tables_from_joint(&counts.joint)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub counts: StatsCounts,
    pub n_orders: u64,
    /// Fractions over occlusion orders: `[none, uni, bi]`.
    pub occ_types: [f64; 3],
    /// Fractions over depth orders: `[distinct_strict, distinct_equal, overlap_directed, overlap_mutual]`.
    pub depth_types: [f64; 4],
    /// Share of counted occlusion / depth orders settled by the first two workers.
    pub first_two_agreement: [f64; 2],
    pub p_occ_given_depth: ConditionalTable,
    pub p_depth_given_occ: ConditionalTable,
}

fn fraction(n: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        n as f64 / total as f64
    }
}

impl StatsReport {
    pub fn from_counts(counts: StatsCounts) -> Self {
        let occ = counts.occlusion_types;
        let occ_total: u64 = occ.iter().sum();
        let occ_types = [
            fraction(occ[0], occ_total),
            fraction(occ[1] + occ[2], occ_total),
            fraction(occ[3], occ_total),
        ];
        let dep = counts.depth_types;
        let dep_total: u64 = dep.iter().sum();
        let depth_types = [
            fraction(dep[0] + dep[1], dep_total),
            fraction(dep[2], dep_total),
            fraction(dep[3] + dep[4], dep_total),
            fraction(dep[5], dep_total),
        ];
        let agreement = |hist: &BTreeMap<u32, u64>| {
            let total: u64 = hist.values().sum();
            fraction(hist.get(&MIN_COUNT).copied().unwrap_or(0), total)
        };
        let first_two_agreement = [
            agreement(&counts.occlusion_count_hist),
            agreement(&counts.depth_count_hist),
        ];
        let (p_occ_given_depth, p_depth_given_occ) = tables_from_joint(&counts.joint);
        Self {
            n_orders: counts.n_occlusion_orders + counts.n_depth_orders,
            counts,
            occ_types,
            depth_types,
            first_two_agreement,
            p_occ_given_depth,
            p_depth_given_occ,
        }
    }
}

fn gather(d: &DatasetFile) -> StatsCounts {
    let per_image: Vec<StatsCounts> = d.images().par_iter().map(StatsCounts::from_image).collect();
    per_image
        .iter()
        .fold(StatsCounts::default(), |acc, c| acc.merge(c))
}

pub fn dataset_statistics(d: &DatasetFile) -> StatsReport {
    StatsReport::from_counts(gather(d))
}
