//! Brute-force reference implementations shared by the integration tests.
//!
//! The oracles never call into the library's labeling, morphology or
//! matching code; each works straight from the definition. The `check_*`
//! helpers run the library and compare against them.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use detsieve::{match_components, BinaryMask, Component, Rect, SceneParams, SeShape};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_mask(rng: &mut StdRng, width: usize, height: usize, density: f64) -> BinaryMask {
    BinaryMask::from_fn(width, height, |_, _| rng.random_bool(density))
}

/// Random size in `1..=max_side` on both axes and random density.
pub fn random_sized_mask(rng: &mut StdRng, max_side: usize) -> BinaryMask {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    let density = rng.random_range(0.05..0.8);
    random_mask(rng, w, h, density)
}

pub type Partition = BTreeSet<Vec<(usize, usize)>>;

/// Connected regions by recursive flood fill.
pub fn flood_fill_partition(mask: &BinaryMask, eight: bool) -> Partition {
    fn fill(
        mask: &BinaryMask,
        eight: bool,
        seen: &mut Vec<bool>,
        r: isize,
        c: isize,
        out: &mut Vec<(usize, usize)>,
    ) {
        if mask.get_signed(r, c) != Some(true) {
            return;
        }
        let idx = r as usize * mask.width() + c as usize;
        if seen[idx] {
            return;
        }
        seen[idx] = true;
        out.push((r as usize, c as usize));
        for dr in -1..=1isize {
            for dc in -1..=1isize {
                if (dr, dc) == (0, 0) || (!eight && dr != 0 && dc != 0) {
                    continue;
                }
                fill(mask, eight, seen, r + dr, c + dc, out);
            }
        }
    }

    let mut seen = vec![false; mask.width() * mask.height()];
    let mut parts = Partition::new();
    for r in 0..mask.height() {
        for c in 0..mask.width() {
            let mut region = Vec::new();
            fill(mask, eight, &mut seen, r as isize, c as isize, &mut region);
            if !region.is_empty() {
                region.sort_unstable();
                parts.insert(region);
            }
        }
    }
    parts
}

/// Offsets straight from the shape definitions.
pub fn offsets(shape: SeShape, radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            let inside = match shape {
                SeShape::Square => true,
                SeShape::Disk => dr * dr + dc * dc <= r * r,
            };
            if inside {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// out(p) = 1 iff some offset o has p - o inside the image and set.
pub fn dilate_oracle(mask: &BinaryMask, offs: &[(isize, isize)]) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        offs.iter()
            .any(|&(dr, dc)| mask.get_signed(r as isize - dr, c as isize - dc) == Some(true))
    })
}

/// out(p) = 1 iff every offset o has p + o outside the image or set.
pub fn erode_oracle(mask: &BinaryMask, offs: &[(isize, isize)]) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        offs.iter()
            .all(|&(dr, dc)| mask.get_signed(r as isize + dr, c as isize + dc) != Some(false))
    })
}

/// Median of the window values (out-of-image = 0), by sorting.
pub fn median_oracle(mask: &BinaryMask, window: usize) -> BinaryMask {
    let half = (window / 2) as isize;
    BinaryMask::from_fn(mask.width(), mask.height(), |r, c| {
        let mut values = Vec::with_capacity(window * window);
        for dr in -half..=half {
            for dc in -half..=half {
                values.push(mask.get_signed(r as isize + dr, c as isize + dc).unwrap_or(false) as u8);
            }
        }
        values.sort_unstable();
        values[values.len() / 2] == 1
    })
}

/// Renders a partition's regions for which `keep` holds.
pub fn render_regions(width: usize, height: usize, parts: &Partition, mut keep: impl FnMut(&[(usize, usize)]) -> bool) -> BinaryMask {
    let mut m = BinaryMask::new(width, height);
    for region in parts.iter().filter(|r| keep(r)) {
        for &(r, c) in region {
            m.set(r, c, true);
        }
    }
    m
}

/// Pixels of `region` with a 4-neighbor outside it.
pub fn perimeter_oracle(region: &[(usize, usize)]) -> usize {
    let set: HashSet<(isize, isize)> = region.iter().map(|&(r, c)| (r as isize, c as isize)).collect();
    set.iter()
        .filter(|&&(r, c)| [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)].iter().any(|n| !set.contains(n)))
        .count()
}

pub fn aspect_oracle(region: &[(usize, usize)]) -> f64 {
    let rows: Vec<usize> = region.iter().map(|p| p.0).collect();
    let cols: Vec<usize> = region.iter().map(|p| p.1).collect();
    let h = (rows.iter().max().unwrap() - rows.iter().min().unwrap() + 1) as f64;
    let w = (cols.iter().max().unwrap() - cols.iter().min().unwrap() + 1) as f64;
    h.min(w) / h.max(w)
}

pub fn overlap_oracle(a: &[(usize, usize)], b: &[(usize, usize)]) -> usize {
    let set: HashSet<_> = a.iter().collect();
    b.iter().filter(|p| set.contains(p)).count()
}

/// Best one-to-one matching over overlapping pairs by exhaustive search:
/// `(pair count, total overlap)` maximized lexicographically.
pub fn exhaustive_matching(overlap: &[Vec<usize>]) -> (usize, usize) {
    fn search(overlap: &[Vec<usize>], det: usize, used: &mut Vec<bool>) -> (usize, usize) {
        if det == overlap.len() {
            return (0, 0);
        }
        // Leave this detection unmatched.
        let mut best = search(overlap, det + 1, used);
        for g in 0..used.len() {
            if used[g] || overlap[det][g] == 0 {
                continue;
            }
            used[g] = true;
            let (n, total) = search(overlap, det + 1, used);
            used[g] = false;
            best = best.max((n + 1, total + overlap[det][g]));
        }
        best
    }
    let n_gt = overlap.first().map_or(0, Vec::len);
    search(overlap, 0, &mut vec![false; n_gt])
}

/// Scene invariants: rect count, area and aspect ranges, bounds,
/// separation, and the mask being exactly the union of the rects.
pub fn validate_scene(rects: &[Rect], gt_mask: &BinaryMask, params: &SceneParams) -> Result<(), String> {
    let (width, height, n) = (params.width, params.height, params.n_vehicles);
    let (area, aspect, separation) = (params.vehicle_area_range, params.vehicle_aspect_range, params.min_separation);
    if rects.len() != n {
        return Err(format!("{} rects, expected {n}", rects.len()));
    }
    for (i, r) in rects.iter().enumerate() {
        let a = r.height * r.width;
        if a < area.0 || a > area.1 {
            return Err(format!("rect {i} area {a} outside {area:?}"));
        }
        let ratio = r.height.min(r.width) as f64 / r.height.max(r.width) as f64;
        if ratio < aspect.0 || ratio > aspect.1 {
            return Err(format!("rect {i} aspect {ratio} outside {aspect:?}"));
        }
        if r.row + r.height > height || r.col + r.width > width {
            return Err(format!("rect {i} out of bounds"));
        }
        for (j, s) in rects.iter().enumerate().skip(i + 1) {
            // Background rows or columns strictly between the two rectangles.
            let row_gap = (s.row as isize - (r.row + r.height) as isize).max(r.row as isize - (s.row + s.height) as isize);
            let col_gap = (s.col as isize - (r.col + r.width) as isize).max(r.col as isize - (s.col + s.width) as isize);
            if row_gap.max(col_gap) < separation as isize {
                return Err(format!("rects {i} and {j} closer than {separation}"));
            }
        }
    }
    let mut union = vec![0u8; width * height];
    for r in rects {
        for row in r.row..r.row + r.height {
            for col in r.col..r.col + r.width {
                union[row * width + col] = 1;
            }
        }
    }
    if gt_mask.dims() != (width, height) || union != gt_mask.as_slice() {
        return Err("gt mask is not the union of the rects".into());
    }
    Ok(())
}

/// Two-sided 95% Student-t quantiles computed with scipy
/// (`scipy.stats.t.ppf(0.975, df)`), frozen.
pub fn t975(df: usize) -> f64 {
    match df {
        1 => 12.706204736432095,
        2 => 4.302652729696142,
        9 => 2.2621571628540993,
        99 => 1.9842169515086827,
        _ => panic!("no frozen quantile for df = {df}"),
    }
}

/// Up to `max` random rectangles inside a `side`×`side` canvas, possibly
/// overlapping one another.
pub fn random_components(rng: &mut StdRng, side: usize, max: usize) -> Vec<Component> {
    let n = rng.random_range(0..=max);
    (1..=n as u32)
        .map(|label| {
            let h = rng.random_range(1..=4);
            let w = rng.random_range(1..=4);
            let r = Rect::new(rng.random_range(0..=side - h), rng.random_range(0..=side - w), h, w);
            Component::from_rect(label, &r).unwrap()
        })
        .collect()
}

fn overlap_matrix(det: &[Component], gt: &[Component]) -> Vec<Vec<usize>> {
    det.iter()
        .map(|d| gt.iter().map(|g| overlap_oracle(d.pixels(), g.pixels())).collect())
        .collect()
}

/// Checks one instance against the exhaustive oracle and the FP/FN
/// definitions; returns a description of the first disagreement.
pub fn check_instance(det: &[Component], gt: &[Component]) -> Result<(), String> {
    let m = match_components(det, gt);
    let ov = overlap_matrix(det, gt);
    let (size, total) = if det.is_empty() { (0, 0) } else { exhaustive_matching(&ov) };
    if m.tp() != size {
        return Err(format!("tp {} but maximum matching has {size} pairs", m.tp()));
    }
    let got_total: usize = m.pairs.iter().map(|p| p.overlap).sum();
    if got_total != total {
        return Err(format!("total overlap {got_total}, best is {total}"));
    }
    let dets: HashSet<_> = m.pairs.iter().map(|p| p.det_label).collect();
    let gts: HashSet<_> = m.pairs.iter().map(|p| p.gt_label).collect();
    if dets.len() != m.tp() || gts.len() != m.tp() {
        return Err("pairs are not one-to-one".into());
    }
    for p in &m.pairs {
        if ov[p.det_label as usize - 1][p.gt_label as usize - 1] != p.overlap || p.overlap == 0 {
            return Err(format!("bad pair {p:?}"));
        }
    }
    let fp: Vec<u32> = (0..det.len()).filter(|&i| ov[i].iter().all(|&v| v == 0)).map(|i| i as u32 + 1).collect();
    let fn_: Vec<u32> = (0..gt.len()).filter(|&j| ov.iter().all(|row| row[j] == 0)).map(|j| j as u32 + 1).collect();
    if m.false_positives != fp || m.false_negatives != fn_ {
        return Err(format!("fp {:?} / fn {:?}, expected {fp:?} / {fn_:?}", m.false_positives, m.false_negatives));
    }
    if m.tp() + m.fp() + m.unmatched_overlapping.len() != det.len() {
        return Err("detections are not partitioned".into());
    }
    Ok(())
}
