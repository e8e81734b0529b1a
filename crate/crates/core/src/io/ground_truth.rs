//! Ground truth as CSV rectangles (`frame,row,col,height,width`) or as a
//! directory of per-frame bitmaps.
//!
//! Rectangles become one component each, labeled from 1 in file order within
//! their frame. Bitmaps are labeled with 8-connectivity. Mask files are
//! matched to frames by the trailing number in their file stem, so
//! `gt_0007.pbm` is frame 7.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::netpbm::read_mask;
use crate::mask::{ComponentSet, Rect};

pub const CSV_HEADER: [&str; 5] = ["frame", "row", "col", "height", "width"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthRecord {
    pub frame: usize,
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl GroundTruthRecord {
    pub fn rect(&self) -> Rect {
        Rect::new(self.row, self.col, self.height, self.width)
    }
}

/// Per-frame ground-truth objects for frames of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub width: usize,
    pub height: usize,
    pub frames: BTreeMap<usize, ComponentSet>,
}

impl GroundTruth {
    /// Objects of `frame`; frames never mentioned have none.
    pub fn frame(&self, frame: usize) -> ComponentSet {
        self.frames
            .get(&frame)
            .cloned()
            .unwrap_or_else(|| ComponentSet::empty(self.width, self.height))
    }
}

/// Reads a CSV file, or a directory of bitmaps when `path` is a directory.
pub fn read_ground_truth(path: impl AsRef<Path>, width: usize, height: usize) -> Result<GroundTruth> {
    let path = path.as_ref();
    if path.is_dir() {
        read_mask_dir(path, width, height)
    } else {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_csv(&text, width, height).map_err(|e| e.with_path(path))
    }
}

fn gt_error(line: u64, message: impl Into<String>) -> Error {
    Error::GroundTruth {
        path: None,
        line,
        message: message.into(),
    }
}

/// 1-based line of a record; the csv crate's own line counter skips blank lines.
fn line_of(text: &str, pos: &csv::Position) -> u64 {
    let bytes = text.as_bytes();
    let mut byte = (pos.byte() as usize).min(bytes.len());
    // Record positions can point at blank lines preceding the record.
    while byte < bytes.len() && (bytes[byte] == b'\n' || bytes[byte] == b'\r') {
        byte += 1;
    }
    1 + bytes[..byte].iter().filter(|&&b| b == b'\n').count() as u64
}

pub fn parse_records(text: &str) -> Result<Vec<(u64, GroundTruthRecord)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| gt_error(1, e.to_string()))?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(gt_error(
            1,
            format!("expected header {:?}, found {:?}", CSV_HEADER.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut out = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| gt_error(e.position().map_or(0, |p| line_of(text, p)), e.to_string()))?;
        let line = record.position().map_or(0, |p| line_of(text, p));
        let rec: GroundTruthRecord = record.deserialize(Some(&headers)).map_err(|e| {
            let message = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => match err.field() {
                    Some(i) => format!("field {:?}: {}", CSV_HEADER.get(i as usize).unwrap_or(&"?"), err.kind()),
                    None => err.to_string(),
                },
                _ => e.to_string(),
            };
            gt_error(line, message)
        })?;
        out.push((line, rec));
    }
    Ok(out)
}

/// Parses CSV ground truth for frames of `width x height`.
pub fn parse_csv(text: &str, width: usize, height: usize) -> Result<GroundTruth> {
    let mut rects: BTreeMap<usize, Vec<Rect>> = BTreeMap::new();
    for (line, rec) in parse_records(text)? {
        let rect = rec.rect();
        if !rect.fits_in(width, height) {
            return Err(gt_error(
                line,
                format!("rect {rect:?} is empty or outside the {width}x{height} frame"),
            ));
        }
        rects.entry(rec.frame).or_default().push(rect);
    }
    let frames = rects
        .into_iter()
        .map(|(f, rs)| Ok((f, ComponentSet::from_rects(width, height, &rs)?)))
        .collect::<Result<_>>()?;
    Ok(GroundTruth { width, height, frames })
}

/// CSV text for the given `(frame, rects)` lists.
pub fn to_csv<'a>(frames: impl IntoIterator<Item = (usize, &'a [Rect])>) -> String {
    let mut out = CSV_HEADER.join(",");
    out.push('\n');
    for (frame, rects) in frames {
        for r in rects {
            out.push_str(&format!("{frame},{},{},{},{}\n", r.row, r.col, r.height, r.width));
        }
    }
    out
}

pub fn write_ground_truth_csv<'a>(
    path: impl AsRef<Path>,
    frames: impl IntoIterator<Item = (usize, &'a [Rect])>,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv(frames)).map_err(|e| Error::io(path, e))
}

/// Trailing decimal digits of a file stem, e.g. `det_0012.pbm` gives 12.
pub fn frame_index(path: &Path) -> Option<usize> {
    let stem = path.file_stem()?.to_str()?;
    let digits_start = stem.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    stem[digits_start..].parse().ok()
}

/// `.pbm` files in `dir` keyed by frame index.
pub fn list_frames(dir: impl AsRef<Path>) -> Result<BTreeMap<usize, PathBuf>> {
    let dir = dir.as_ref();
    let mut frames = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("pbm") {
            continue;
        }
        let Some(index) = frame_index(&path) else {
            continue;
        };
        if let Some(prev) = frames.insert(index, path.clone()) {
            return Err(Error::Param(format!(
                "frame {index} appears twice: {} and {}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(frames)
}

fn read_mask_dir(dir: &Path, width: usize, height: usize) -> Result<GroundTruth> {
    let mut frames = BTreeMap::new();
    for (index, path) in list_frames(dir)? {
        let mask = read_mask(&path)?;
        mask.check_dims(width, height).map_err(|e| e.with_path(&path))?;
        frames.insert(index, ComponentSet::from_mask(&mask));
    }
    Ok(GroundTruth { width, height, frames })
}
