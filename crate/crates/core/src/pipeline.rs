//! Scheme-then-evaluate over many frames.

use rayon::prelude::*;

use crate::error::Result;
use crate::eval::{match_detections, MatchResult};
use crate::io::ground_truth::GroundTruth;
use crate::io::report::{EvalReport, FrameRow};
use crate::mask::{BinaryMask, ComponentSet};
use crate::schemes::{apply_scheme, GroundTruthContext, SchemeSpec};

/// Post-processes one detection mask and classifies the result. Schemes that
/// need ground-truth statistics take them from `gt`.
pub fn evaluate_frame(det: &BinaryMask, gt: &ComponentSet, spec: &SchemeSpec) -> Result<(BinaryMask, MatchResult)> {
    det.check_dims(gt.width, gt.height)?;
    let ctx = spec
        .requires_context()
        .then(|| GroundTruthContext::new(gt.components.clone()));
    let processed = apply_scheme(det, spec, ctx.as_ref())?;
    let m = match_detections(&ComponentSet::from_mask(&processed), gt)?;
    Ok((processed, m))
}

/// Evaluates every scheme on every frame. Frames are processed in parallel;
/// rows come back ordered by frame, then by the order of `schemes`.
pub fn compare_schemes(
    frames: &[(usize, BinaryMask)],
    gt: &GroundTruth,
    schemes: &[SchemeSpec],
) -> Result<EvalReport> {
    let per_frame: Vec<Vec<FrameRow>> = frames
        .par_iter()
        .map(|(index, det)| {
            let truth = gt.frame(*index);
            schemes
                .iter()
                .map(|spec| {
                    let (_, m) = evaluate_frame(det, &truth, spec)?;
                    Ok(FrameRow::new(*index, spec.name(), m.counts()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    EvalReport::from_rows(per_frame.into_iter().flatten().collect())
}
