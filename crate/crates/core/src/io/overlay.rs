//! Color-coded rendering of one frame's classification.

use std::collections::HashSet;
use std::path::Path;

use crate::error::Result;
use crate::eval::MatchResult;
use crate::io::netpbm::RgbImage;
use crate::mask::{label_components, BinaryMask, ComponentSet, Connectivity};

pub const TRUE_POSITIVE: [u8; 3] = [0, 255, 0];
pub const FALSE_POSITIVE: [u8; 3] = [255, 0, 0];
pub const FALSE_NEGATIVE: [u8; 3] = [0, 0, 255];
pub const UNMATCHED_OVERLAPPING: [u8; 3] = [255, 255, 0];

/// Paints detections by class and missed ground truth in blue on black.
///
/// `m` must come from matching the 8-connected components of `det` against
/// `gt`, so that detection labels line up.
pub fn render_overlay(det: &BinaryMask, gt: &ComponentSet, m: &MatchResult) -> Result<RgbImage> {
    det.check_dims(gt.width, gt.height)?;
    let (_, det_components) = label_components(det, Connectivity::Eight);
    let tp: HashSet<u32> = m.pairs.iter().map(|p| p.det_label).collect();
    let fp: HashSet<u32> = m.false_positives.iter().copied().collect();
    let fn_: HashSet<u32> = m.false_negatives.iter().copied().collect();

    let mut img = RgbImage::new(det.width(), det.height());
    for c in &det_components {
        let color = if tp.contains(&c.label()) {
            TRUE_POSITIVE
        } else if fp.contains(&c.label()) {
            FALSE_POSITIVE
        } else {
            UNMATCHED_OVERLAPPING
        };
        for &(r, col) in c.pixels() {
            img.set(r, col, color);
        }
    }
    for g in gt.components.iter().filter(|g| fn_.contains(&g.label())) {
        for &(r, col) in g.pixels() {
            img.set(r, col, FALSE_NEGATIVE);
        }
    }
    Ok(img)
}

/// Renders and writes a P6 overlay.
pub fn write_overlay(det: &BinaryMask, gt: &ComponentSet, m: &MatchResult, path: impl AsRef<Path>) -> Result<()> {
    render_overlay(det, gt, m)?.write(path)
}
