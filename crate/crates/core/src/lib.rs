//! Instance-level occlusion and depth orders: data model, file formats,
//! evaluation metrics, ordering losses, heuristic baselines and dataset
//! statistics.

pub mod baselines;
pub mod cli;
pub mod graph;
pub mod io;
pub mod losses;
pub mod metrics;
pub mod model;
pub mod numeric;
pub mod raster;
pub mod report;
pub mod stats;
pub mod synth;
