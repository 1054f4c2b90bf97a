//! Broken lines, theta functions and their structure constants, and the
//! positivity test for polygons.

mod broken;
mod fan;
mod product;

pub use broken::{
    enumerate_broken_lines, enumerate_with_cache, theta_function, theta_with_cache, BrokenLine, BrokenLineCaps, BrokenSegment,
};
pub use fan::BendCache;
pub use product::{
    chamber_endpoint, is_positive, is_positive_with_caps, theta_product, ConeDilation, PositivityReport, ProductRow,
    StructureConstantTable, ThetaEngine,
};
pub use crate::exact::dilation_points;
