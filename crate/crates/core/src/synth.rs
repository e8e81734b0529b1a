//! Deterministic synthetic scenes: axis-aligned vehicle rectangles as ground
//! truth plus a corrupted copy standing in for a detector's output.
//!
//! All randomness comes from one [`SplitMix64`] stream per frame, consumed
//! in this order:
//!
//! 1. For each vehicle, in index order: its dimensions (area, then aspect,
//!    repeated until both ranges hold), its orientation, then candidate
//!    positions until one respects the separation.
//! 2. For each vehicle, in index order: one miss draw, four side jitters
//!    (top, bottom, left, right) and one split draw. All six are drawn even
//!    for missed vehicles.
//! 3. Small clutter blobs, each a shape draw followed by position draws.
//! 4. Large clutter blobs, each a size draw followed by position draws.
//!
//! Integers in `[0, n)` are `(x * n) >> 64` on the full 64-bit output; unit
//! floats are `(x >> 11) * 2^-53`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mask::{BinaryMask, Rect};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One splitmix64 step: returns the advanced state and the output.
pub fn prng_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (state, z ^ (z >> 31))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        let (state, value) = prng_next(self.state);
        self.state = state;
        value
    }

    /// Uniform in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        lo + self.below((hi - lo) as u64 + 1) as i64
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli draw; `p <= 0` is never true and `p >= 1` always is.
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// How the detection mask departs from ground truth.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CorruptionParams {
    /// Probability a vehicle is absent from the detection.
    pub p_miss: f64,
    /// Probability a detected vehicle is cut in two across its long axis.
    pub p_split: f64,
    /// Each side of a detected rectangle moves by a uniform integer in
    /// `[-boundary_jitter, boundary_jitter]` (positive grows).
    pub boundary_jitter: usize,
    /// Spurious blobs of area 1-4.
    pub n_small_clutter: usize,
    /// Spurious blobs with area above `large_area_floor`.
    pub n_large_clutter: usize,
    pub large_area_floor: usize,
}

impl CorruptionParams {
    /// Detection identical to ground truth.
    pub fn none() -> Self {
        Self {
            p_miss: 0.0,
            p_split: 0.0,
            boundary_jitter: 0,
            n_small_clutter: 0,
            n_large_clutter: 0,
            large_area_floor: 160,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, p) in [("p_miss", self.p_miss), ("p_split", self.p_split)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Param(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

impl Default for CorruptionParams {
    fn default() -> Self {
        Self {
            p_miss: 0.05,
            p_split: 0.1,
            boundary_jitter: 1,
            n_small_clutter: 60,
            n_large_clutter: 2,
            large_area_floor: 160,
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SceneParams {
    pub width: usize,
    pub height: usize,
    pub n_vehicles: usize,
    /// Inclusive vehicle area range in pixels.
    pub vehicle_area_range: (usize, usize),
    /// Inclusive range of short side over long side.
    pub vehicle_aspect_range: (f64, f64),
    /// Minimum background gap between any two vehicles.
    pub min_separation: usize,
    pub corruption: CorruptionParams,
    pub seed: u64,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            width: 720,
            height: 480,
            n_vehicles: 40,
            vehicle_area_range: (40, 150),
            vehicle_aspect_range: (0.4, 0.8),
            min_separation: 2,
            corruption: CorruptionParams::default(),
            seed: 0,
        }
    }
}

impl SceneParams {
    /// Phoenix-like geometry: wider vehicle area range.
    pub fn phoenix() -> Self {
        Self {
            vehicle_area_range: (20, 175),
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Param("scene dimensions must be >= 1".into()));
        }
        let (lo, hi) = self.vehicle_area_range;
        if lo == 0 || lo > hi {
            return Err(Error::Param(format!("invalid vehicle area range [{lo}, {hi}]")));
        }
        let (alo, ahi) = self.vehicle_aspect_range;
        if !(alo > 0.0 && alo <= ahi && ahi <= 1.0) {
            return Err(Error::Param(format!("invalid vehicle aspect range [{alo}, {ahi}]")));
        }
        self.corruption.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub gt_rects: Vec<Rect>,
    pub gt_mask: BinaryMask,
    pub det_mask: BinaryMask,
}

const DIMENSION_ATTEMPTS: usize = 1_000;
const PLACEMENT_ATTEMPTS: usize = 10_000;
const CLUTTER_ATTEMPTS: usize = 100;

/// Small clutter shapes as `(height, width)`, areas 1 to 4.
const SMALL_SHAPES: [(usize, usize); 8] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (4, 1)];

fn vehicle_dims(params: &SceneParams, rng: &mut SplitMix64) -> Result<(usize, usize)> {
    let (lo, hi) = params.vehicle_area_range;
    let (alo, ahi) = params.vehicle_aspect_range;
    for _ in 0..DIMENSION_ATTEMPTS {
        let area = rng.range_inclusive(lo as i64, hi as i64) as f64;
        let aspect = alo + rng.next_f64() * (ahi - alo);
        let short = ((area * aspect).sqrt().round() as usize).max(1);
        let long = (area / short as f64).round() as usize;
        let ratio = short as f64 / long as f64;
        if (lo..=hi).contains(&(short * long)) && ratio >= alo && ratio <= ahi {
            let vertical = rng.chance(0.5);
            return Ok(if vertical { (long, short) } else { (short, long) });
        }
    }
    Err(Error::Param(format!(
        "no integer rectangle satisfies area [{lo}, {hi}] and aspect [{alo}, {ahi}]"
    )))
}

fn place_vehicles(params: &SceneParams, rng: &mut SplitMix64) -> Result<Vec<Rect>> {
    let mut rects: Vec<Rect> = Vec::with_capacity(params.n_vehicles);
    for index in 0..params.n_vehicles {
        let (h, w) = vehicle_dims(params, rng)?;
        if h > params.height || w > params.width {
            return Err(Error::Packing { index, attempts: 0 });
        }
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let row = rng.below((params.height - h + 1) as u64) as usize;
            let col = rng.below((params.width - w + 1) as u64) as usize;
            let cand = Rect::new(row, col, h, w);
            if rects.iter().all(|r| r.gap(&cand) >= params.min_separation && !r.intersects(&cand)) {
                placed = Some(cand);
                break;
            }
        }
        match placed {
            Some(r) => rects.push(r),
            None => {
                return Err(Error::Packing {
                    index,
                    attempts: PLACEMENT_ATTEMPTS,
                })
            }
        }
    }
    Ok(rects)
}

/// Moves each side of `rect` outward by the given amounts (negative shrinks),
/// clipped to the image and never collapsing below one pixel.
fn jitter_rect(rect: &Rect, [top, bottom, left, right]: [i64; 4], width: usize, height: usize) -> Rect {
    let axis = |start: usize, len: usize, grow_lo: i64, grow_hi: i64, limit: usize| {
        let lo = (start as i64 - grow_lo).clamp(0, limit as i64 - 1);
        let hi = (start as i64 + len as i64 + grow_hi).clamp(lo + 1, limit as i64);
        (lo as usize, (hi - lo) as usize)
    };
    let (row, h) = axis(rect.row, rect.height, top, bottom, height);
    let (col, w) = axis(rect.col, rect.width, left, right, width);
    Rect::new(row, col, h, w)
}

/// Builds a detection mask from ground-truth rectangles.
///
/// Per vehicle: drop with `p_miss`; otherwise jitter each side; then with
/// `p_split` clear the middle column (if at least as wide as tall) or middle
/// row. Finally stamp small and large clutter at positions that do not
/// overlap any ground-truth rectangle. Clutter may touch detections and
/// other clutter.
pub fn corrupt_detections(
    gt_rects: &[Rect],
    width: usize,
    height: usize,
    cp: &CorruptionParams,
    rng: &mut SplitMix64,
) -> Result<BinaryMask> {
    cp.validate()?;
    let mut det = BinaryMask::new(width, height);
    let j = cp.boundary_jitter as i64;

    for rect in gt_rects {
        let missed = rng.chance(cp.p_miss);
        let shifts = [0; 4].map(|_: i64| rng.range_inclusive(-j, j));
        let split = rng.chance(cp.p_split);
        if missed {
            continue;
        }
        let r = jitter_rect(rect, shifts, width, height);
        let long_side = r.width.max(r.height);
        if split && long_side >= 3 {
            let (a, b) = if r.width >= r.height {
                let mid = r.width / 2;
                (
                    Rect::new(r.row, r.col, r.height, mid),
                    Rect::new(r.row, r.col + mid + 1, r.height, r.width - mid - 1),
                )
            } else {
                let mid = r.height / 2;
                (
                    Rect::new(r.row, r.col, mid, r.width),
                    Rect::new(r.row + mid + 1, r.col, r.height - mid - 1, r.width),
                )
            };
            det.fill_rect(&a, true);
            det.fill_rect(&b, true);
        } else {
            det.fill_rect(&r, true);
        }
    }

    let stamp = |det: &mut BinaryMask, rng: &mut SplitMix64, h: usize, w: usize| {
        if h > height || w > width {
            return;
        }
        for _ in 0..CLUTTER_ATTEMPTS {
            let row = rng.below((height - h + 1) as u64) as usize;
            let col = rng.below((width - w + 1) as u64) as usize;
            let cand = Rect::new(row, col, h, w);
            if !gt_rects.iter().any(|g| g.intersects(&cand)) {
                det.fill_rect(&cand, true);
                return;
            }
        }
    };

    for _ in 0..cp.n_small_clutter {
        let (h, w) = SMALL_SHAPES[rng.below(SMALL_SHAPES.len() as u64) as usize];
        stamp(&mut det, rng, h, w);
    }

    let floor = cp.large_area_floor;
    let max_side = ((floor as f64).sqrt() as usize * 3).max(8);
    for _ in 0..cp.n_large_clutter {
        let (h, w) = loop {
            let h = rng.range_inclusive(8, max_side as i64) as usize;
            let w = rng.range_inclusive(8, max_side as i64) as usize;
            if h * w > floor {
                break (h, w);
            }
        };
        stamp(&mut det, rng, h, w);
    }

    Ok(det)
}

pub fn generate_scene(params: &SceneParams) -> Result<Scene> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let gt_rects = place_vehicles(params, &mut rng)?;
    let mut gt_mask = BinaryMask::new(params.width, params.height);
    for r in &gt_rects {
        gt_mask.fill_rect(r, true);
    }
    let det_mask = corrupt_detections(&gt_rects, params.width, params.height, &params.corruption, &mut rng)?;
    Ok(Scene {
        gt_rects,
        gt_mask,
        det_mask,
    })
}

/// Frames `0..n_frames`, frame `i` seeded with `params.seed + i`.
pub fn generate_frames(params: &SceneParams, n_frames: usize) -> Result<Vec<Scene>> {
    (0..n_frames)
        .into_par_iter()
        .map(|i| generate_scene(&params.clone().with_seed(params.seed.wrapping_add(i as u64))))
        .collect()
}
