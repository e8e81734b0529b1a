//! Post-processing and evaluation of binary object detections in low
//! resolution, wide-area aerial imagery.
//!
//! The main post-processing scheme runs in two stages: an area sieve keeps
//! the 8-connected objects whose pixel count lies within `[t_low, t_high]`,
//! then a morphological closing joins nearby fragments, smooths borders and
//! fills pinholes. Four comparison schemes are included, along with an
//! overlap-based evaluator (TP/FN/FP, precision, recall, F-score, PWC, 95%
//! confidence intervals) and a seeded synthetic scene generator.
//!
//! ```
//! use detsieve::{apply_proposed, match_detections, BinaryMask, ComponentSet, ProposedParams, Rect};
//!
//! let mut det = BinaryMask::new(64, 48);
//! det.fill_rect(&Rect::new(10, 10, 6, 12), true); // a vehicle
//! det.set(40, 40, true); // a speck
//!
//! let cleaned = apply_proposed(&det, &ProposedParams::tucson()).unwrap();
//! let gt = ComponentSet::from_rects(64, 48, &[Rect::new(10, 10, 6, 12)]).unwrap();
//! let m = match_detections(&ComponentSet::from_mask(&cleaned), &gt).unwrap();
//! assert_eq!((m.tp(), m.fn_(), m.fp()), (1, 0, 0));
//! ```
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory; the `detsieve` binary wraps the same operations for use from
//! the shell.

pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod mask;
pub mod morphology;
pub mod pipeline;
pub mod schemes;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{compute_metrics, match_components, match_detections, summarize, Counts, MatchResult, Metrics, SummaryStats};
pub use mask::{
    component_stats, label_components, render_components, BBox, BinaryMask, Component, ComponentSet, ComponentStats,
    Connectivity, LabelMap, Rect,
};
pub use morphology::{close, dilate, erode, median_filter, open, SeShape, StructuringElement};
pub use schemes::{
    apply_filtered_dilation, apply_heuristic_filtering, apply_proposed, apply_scheme, apply_shape_index_filtering,
    apply_sieve_and_open, shape_index, sieve_area, FilteredDilationParams, GroundTruthContext, HeuristicParams,
    ProposedParams, SchemeSpec, ShapeIndexParams, SieveOpenParams,
};
pub use synth::{generate_frames, generate_scene, prng_next, CorruptionParams, Scene, SceneParams, SplitMix64};
