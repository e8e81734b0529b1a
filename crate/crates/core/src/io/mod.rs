//! File formats: netpbm masks and overlays, ground-truth tables, reports.

pub mod ground_truth;
pub mod netpbm;
pub mod overlay;
pub mod report;

pub use ground_truth::{read_ground_truth, write_ground_truth_csv, GroundTruth, GroundTruthRecord};
pub use netpbm::{read_mask, read_mask_with, write_mask, write_mask_as, PbmFormat, RgbImage};
pub use overlay::{render_overlay, write_overlay};
pub use report::{write_report, EvalReport, FrameRow, ReportFormat, SummaryRow};
