//! Dataset statistics, conditional tables and the annotation-collection
//! protocol (vote aggregation, instance capping, size floor).

mod aggregate;
mod report;
mod sampling;

pub use aggregate::{aggregate_votes, weight_from_count, Aggregated, AggregationError};
pub use report::{
    conditional_tables, dataset_statistics, depth_index, occlusion_index, tables_from_joint,
    ConditionalTable, StatsCounts, StatsReport, DEPTH_LABELS, OCCLUSION_LABELS,
};
pub use sampling::{
    flag_small_instances, image_seed, subsample_instances, SamplingError, SmallInstanceReport,
    SplitMix64, DEFAULT_INSTANCE_CAP, MIN_INSTANCE_SIDE,
};
