//! File formats: annotation/prediction JSON, order tokens, netpbm rasters
//! and the adapter for the distributed order files.

pub mod dataset;
pub mod netpbm;
pub mod released;
pub mod token;

pub use dataset::{
    parse_dataset, parse_predictions, parse_with_mode, serialize_dataset, serialize_predictions,
    DatasetError, DatasetFile, ParseMode,
};
pub use netpbm::{
    load_disparity, load_mask, load_plane, load_planes, write_disparity, write_mask, write_plane,
    NetpbmError,
};
pub use released::{parse_released, ReleasedOptions};
pub use token::{
    format_depth, format_occlusion, parse_depth_token, parse_occlusion_token, parse_order_token,
    OrderKind, ParsedOrder, TokenError, TokenErrorKind,
};
