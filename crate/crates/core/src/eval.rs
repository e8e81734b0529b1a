//! Overlap-based detection classification and summary metrics.
//!
//! A detection that shares no pixel with any ground-truth object is a false
//! positive; a ground-truth object that shares no pixel with any detection is
//! a false negative. Among the overlapping pairs, true positives form a
//! one-to-one matching: each detection and each ground-truth object yields at
//! most one TP. The matching chosen has the largest possible number of pairs
//! and, among those, the largest total overlap, so that when several
//! detections cover one object the one with the largest overlap is credited.
//!
//! Ground-truth objects that overlap only detections credited elsewhere are
//! neither TP nor FN, and detections that overlap ground truth without being
//! credited are neither TP nor FP; both are reported separately.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::mask::{Component, ComponentSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchPair {
    pub det_label: u32,
    pub gt_label: u32,
    pub overlap: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchResult {
    /// True positives, sorted by detection label.
    pub pairs: Vec<MatchPair>,
    /// Detection labels with no ground-truth overlap.
    pub false_positives: Vec<u32>,
    /// Ground-truth labels with no detection overlap.
    pub false_negatives: Vec<u32>,
    /// Detection labels that overlap ground truth but were not credited.
    pub unmatched_overlapping: Vec<u32>,
    pub detection_count: usize,
    pub gt_count: usize,
}

impl MatchResult {
    pub fn tp(&self) -> usize {
        self.pairs.len()
    }

    pub fn fp(&self) -> usize {
        self.false_positives.len()
    }

    pub fn fn_(&self) -> usize {
        self.false_negatives.len()
    }

    pub fn counts(&self) -> Counts {
        Counts {
            tp: self.tp(),
            fn_: self.fn_(),
            fp: self.fp(),
        }
    }

    pub fn metrics(&self) -> Metrics {
        compute_metrics(self.counts())
    }
}

/// TP/FN/FP tallies, for one frame or accumulated over many.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
}

impl Counts {
    pub fn new(tp: usize, fn_: usize, fp: usize) -> Self {
        Self { tp, fn_, fp }
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts::new(self.tp + rhs.tp, self.fn_ + rhs.fn_, self.fp + rhs.fp)
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), |a, b| a + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub fscore: f64,
    /// Percentage of wrong classification, with no true negatives.
    pub pwc: f64,
}

impl Metrics {
    pub const NAMES: [&'static str; 4] = ["precision", "recall", "fscore", "pwc"];

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "precision" => Some(self.precision),
            "recall" => Some(self.recall),
            "fscore" => Some(self.fscore),
            "pwc" => Some(self.pwc),
            _ => None,
        }
    }
}

/// Precision, recall, F-score and PWC from raw counts.
///
/// Empty denominators resolve to: precision 1, recall 1, F-score 0 when
/// precision + recall is 0, PWC 0.
pub fn compute_metrics(counts: Counts) -> Metrics {
    let Counts { tp, fn_, fp } = counts;
    let ratio = |num: usize, den: usize, empty: f64| {
        if den == 0 {
            empty
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp, 1.0);
    let recall = ratio(tp, tp + fn_, 1.0);
    let fscore = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let pwc = 100.0 * ratio(fp + fn_, tp + fp + fn_, 0.0);
    Metrics {
        precision,
        recall,
        fscore,
        pwc,
    }
}

/// Classifies detections against ground truth from the same frame.
pub fn match_detections(det: &ComponentSet, gt: &ComponentSet) -> Result<MatchResult> {
    if (det.width, det.height) != (gt.width, gt.height) {
        return Err(Error::DimensionMismatch {
            expected_width: gt.width,
            expected_height: gt.height,
            width: det.width,
            height: det.height,
        });
    }
    Ok(match_components(&det.components, &gt.components))
}

/// Same as [`match_detections`] without the frame-size check.
pub fn match_components(det: &[Component], gt: &[Component]) -> MatchResult {
    // (det index, gt index, overlap) for every intersecting pair.
    let mut edges = Vec::new();
    for (i, d) in det.iter().enumerate() {
        for (j, g) in gt.iter().enumerate() {
            let ov = d.overlap(g);
            if ov > 0 {
                edges.push((i, j, ov));
            }
        }
    }

    let mut det_hit = vec![false; det.len()];
    let mut gt_hit = vec![false; gt.len()];
    for &(i, j, _) in &edges {
        det_hit[i] = true;
        gt_hit[j] = true;
    }

    let mut pairs = Vec::new();
    for block in overlap_blocks(det.len(), gt.len(), &edges) {
        for (i, j, ov) in best_matching(&block) {
            pairs.push(MatchPair {
                det_label: det[i].label(),
                gt_label: gt[j].label(),
                overlap: ov,
            });
        }
    }
    pairs.sort_by_key(|p| (p.det_label, p.gt_label));

    let credited: std::collections::HashSet<u32> = pairs.iter().map(|p| p.det_label).collect();
    let false_positives = det
        .iter()
        .zip(&det_hit)
        .filter(|(_, &hit)| !hit)
        .map(|(d, _)| d.label())
        .collect();
    let false_negatives = gt
        .iter()
        .zip(&gt_hit)
        .filter(|(_, &hit)| !hit)
        .map(|(g, _)| g.label())
        .collect();
    let unmatched_overlapping = det
        .iter()
        .zip(&det_hit)
        .filter(|(d, &hit)| hit && !credited.contains(&d.label()))
        .map(|(d, _)| d.label())
        .collect();

    MatchResult {
        pairs,
        false_positives,
        false_negatives,
        unmatched_overlapping,
        detection_count: det.len(),
        gt_count: gt.len(),
    }
}

/// Splits the overlap graph into connected blocks; each block keeps its
/// edges in input order.
fn overlap_blocks(n_det: usize, n_gt: usize, edges: &[(usize, usize, usize)]) -> Vec<Vec<(usize, usize, usize)>> {
    // Union-find over det nodes 0..n_det and gt nodes n_det..n_det + n_gt.
    let mut parent: Vec<usize> = (0..n_det + n_gt).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j, _) in edges {
        let a = find(&mut parent, i);
        let b = find(&mut parent, n_det + j);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index_of_root = std::collections::BTreeMap::new();
    let mut blocks: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for &e in edges {
        let root = find(&mut parent, e.0);
        let idx = *index_of_root.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[idx].push(e);
    }
    blocks
}

/// Maximum-cardinality matching with maximum total overlap within one block.
fn best_matching(block: &[(usize, usize, usize)]) -> Vec<(usize, usize, usize)> {
    let mut dets: Vec<usize> = block.iter().map(|e| e.0).collect();
    let mut gts: Vec<usize> = block.iter().map(|e| e.1).collect();
    dets.sort_unstable();
    dets.dedup();
    gts.sort_unstable();
    gts.dedup();

    // Star-shaped blocks: a single pair, the largest overlap.
    if dets.len() == 1 || gts.len() == 1 {
        let best = block
            .iter()
            .copied()
            .max_by(|a, b| a.2.cmp(&b.2).then(b.1.cmp(&a.1)).then(b.0.cmp(&a.0)))
            .expect("blocks are non-empty");
        return vec![best];
    }

    // One extra pair always outweighs any overlap total within the block.
    let bonus = 1 + block.iter().map(|e| e.2 as i64).sum::<i64>();
    let transpose = dets.len() > gts.len();
    let (rows, cols) = if transpose { (&gts, &dets) } else { (&dets, &gts) };
    let mut weight = vec![vec![0i64; cols.len()]; rows.len()];
    for &(i, j, ov) in block {
        let (r, c) = if transpose { (j, i) } else { (i, j) };
        let r = rows.binary_search(&r).unwrap();
        let c = cols.binary_search(&c).unwrap();
        weight[r][c] = bonus + ov as i64;
    }

    let assignment = max_weight_assignment(&weight);
    let mut out = Vec::new();
    for (r, c) in assignment.into_iter().enumerate() {
        if weight[r][c] == 0 {
            continue;
        }
        let ov = (weight[r][c] - bonus) as usize;
        let (i, j) = if transpose { (cols[c], rows[r]) } else { (rows[r], cols[c]) };
        out.push((i, j, ov));
    }
    out
}

/// Hungarian algorithm for a `rows x cols` matrix with `rows <= cols`.
/// Returns the column assigned to each row, maximizing the total weight.
fn max_weight_assignment(weight: &[Vec<i64>]) -> Vec<usize> {
    let n = weight.len();
    let m = weight[0].len();
    debug_assert!(n <= m);
    let max_w = weight.iter().flatten().copied().max().unwrap_or(0);
    let cost = |i: usize, j: usize| max_w - weight[i][j];

    // 1-based potentials and assignment; column 0 is a sentinel.
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Mean and two-sided 95% Student-t confidence half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub ci95_halfwidth: f64,
    pub n: usize,
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    let n = values.len();
    if n == 0 {
        return Err(Error::Empty("cannot summarize zero samples"));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 || values.iter().all(|&v| v == values[0]) {
        return Ok(SummaryStats {
            mean,
            ci95_halfwidth: 0.0,
            n,
        });
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("degrees of freedom are positive")
        .inverse_cdf(0.975);
    Ok(SummaryStats {
        mean,
        ci95_halfwidth: t * var.sqrt() / (n as f64).sqrt(),
        n,
    })
}
