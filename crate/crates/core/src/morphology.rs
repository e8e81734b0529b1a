//! Binary morphology with fixed border conventions.
//!
//! Dilation treats pixels outside the image as background and erosion treats
//! them as foreground. With centrally symmetric structuring elements this
//! keeps `erode(X) == !dilate(!X)` exact, makes closing extensive and opening
//! anti-extensive right up to the image border.
//!
//! Both operators decompose the element into one horizontal span per row
//! offset and evaluate each span with per-row prefix sums, so the cost is
//! `O(pixels * (2 * radius + 1))` regardless of the element's area.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeShape {
    Square,
    Disk,
}

impl fmt::Display for SeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeShape::Square => "square",
            SeShape::Disk => "disk",
        })
    }
}

impl FromStr for SeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(SeShape::Square),
            "disk" => Ok(SeShape::Disk),
            other => Err(Error::Param(format!(
                "unknown structuring element shape {other:?} (expected square or disk)"
            ))),
        }
    }
}

/// Flat structuring element centered on its origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuringElement {
    shape: SeShape,
    radius: usize,
    /// Horizontal half-width of the element at row offset `i - radius`.
    half_widths: Vec<usize>,
}

impl StructuringElement {
    pub fn new(shape: SeShape, radius: usize) -> Self {
        let r = radius as i64;
        let half_widths = (-r..=r)
            .map(|dr| match shape {
                SeShape::Square => radius,
                SeShape::Disk => isqrt((r * r - dr * dr) as u64) as usize,
            })
            .collect();
        Self {
            shape,
            radius,
            half_widths,
        }
    }

    /// All offsets with `max(|dr|, |dc|) <= radius`.
    pub fn square(radius: usize) -> Self {
        Self::new(SeShape::Square, radius)
    }

    /// All offsets with `dr^2 + dc^2 <= radius^2`.
    pub fn disk(radius: usize) -> Self {
        Self::new(SeShape::Disk, radius)
    }

    pub fn shape(&self) -> SeShape {
        self.shape
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `(row offset, half-width)` for each row of the element.
    pub fn spans(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        let r = self.radius as isize;
        self.half_widths
            .iter()
            .enumerate()
            .map(move |(i, &hw)| (i as isize - r, hw))
    }

    /// Every `(drow, dcol)` offset in the element, row-major.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        self.spans()
            .flat_map(|(dr, hw)| {
                let hw = hw as isize;
                (-hw..=hw).map(move |dc| (dr, dc))
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.half_widths.iter().map(|hw| 2 * hw + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for StructuringElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.shape, self.radius)
    }
}

fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Per-row prefix sums of foreground counts, `width + 1` entries per row.
fn row_prefix_sums(mask: &BinaryMask) -> Vec<u32> {
    let w = mask.width();
    let mut sums = vec![0u32; (w + 1) * mask.height()];
    for (row, src) in mask.as_slice().chunks_exact(w).enumerate() {
        let dst = &mut sums[row * (w + 1)..(row + 1) * (w + 1)];
        for (c, &v) in src.iter().enumerate() {
            dst[c + 1] = dst[c] + v as u32;
        }
    }
    sums
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Dilate,
    Erode,
}

fn apply(mask: &BinaryMask, se: &StructuringElement, op: Op) -> BinaryMask {
    let (w, h) = mask.dims();
    let sums = row_prefix_sums(mask);
    let mut out = vec![if op == Op::Dilate { 0u8 } else { 1u8 }; w * h];

    for (dr, hw) in se.spans() {
        for row in 0..h {
            let src_row = row as isize + dr;
            if src_row < 0 || src_row >= h as isize {
                continue;
            }
            let pre = &sums[src_row as usize * (w + 1)..(src_row as usize + 1) * (w + 1)];
            let dst = &mut out[row * w..(row + 1) * w];
            for (col, d) in dst.iter_mut().enumerate() {
                let lo = col.saturating_sub(hw);
                let hi = (col + hw + 1).min(w);
                let ones = pre[hi] - pre[lo];
                match op {
                    Op::Dilate => *d |= (ones > 0) as u8,
                    Op::Erode => *d &= (ones as usize == hi - lo) as u8,
                }
            }
        }
    }

    BinaryMask::from_pixels(w, h, out).expect("kernel output is binary")
}

/// Out-of-image pixels count as background.
pub fn dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    apply(mask, se, Op::Dilate)
}

/// Out-of-image pixels count as foreground.
pub fn erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    apply(mask, se, Op::Erode)
}

/// Erosion followed by dilation.
pub fn open(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    dilate(&erode(mask, se), se)
}

/// Dilation followed by erosion.
pub fn close(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    erode(&dilate(mask, se), se)
}

/// Majority vote over a `window x window` neighborhood, counting pixels
/// outside the image as background. `window` must be odd.
pub fn median_filter(mask: &BinaryMask, window: usize) -> Result<BinaryMask> {
    if window.is_multiple_of(2) {
        return Err(Error::Param(format!(
            "median window must be odd and >= 1, got {window}"
        )));
    }
    let (w, h) = mask.dims();
    let half = window / 2;
    let threshold = window * window / 2;

    // Summed-area table with a zero first row and column.
    let sw = w + 1;
    let mut sat = vec![0u32; sw * (h + 1)];
    for row in 0..h {
        let mut running = 0u32;
        for col in 0..w {
            running += mask.as_slice()[row * w + col] as u32;
            sat[(row + 1) * sw + col + 1] = sat[row * sw + col + 1] + running;
        }
    }

    let mut out = vec![0u8; w * h];
    for row in 0..h {
        let r0 = row.saturating_sub(half);
        let r1 = (row + half + 1).min(h);
        for col in 0..w {
            let c0 = col.saturating_sub(half);
            let c1 = (col + half + 1).min(w);
            let count = sat[r1 * sw + c1] + sat[r0 * sw + c0] - sat[r0 * sw + c1] - sat[r1 * sw + c0];
            out[row * w + col] = (count as usize > threshold) as u8;
        }
    }
    BinaryMask::from_pixels(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(w: usize, h: usize, r: usize, c: usize) -> BinaryMask {
        BinaryMask::from_fn(w, h, |rr, cc| (rr, cc) == (r, c))
    }

    #[test]
    fn element_shapes() {
        assert_eq!(StructuringElement::square(1).len(), 9);
        assert_eq!(StructuringElement::disk(1).len(), 5);
        // Lattice points with dr^2 + dc^2 <= 25.
        assert_eq!(StructuringElement::disk(5).len(), 81);
        assert_eq!(StructuringElement::disk(0).offsets(), vec![(0, 0)]);
        for se in [StructuringElement::square(2), StructuringElement::disk(3)] {
            let offs = se.offsets();
            assert!(offs.contains(&(0, 0)));
            assert!(offs.iter().all(|&(a, b)| offs.contains(&(-a, -b))));
        }
    }

    #[test]
    fn dilate_single_pixel() {
        let out = dilate(&single(5, 5, 2, 2), &StructuringElement::square(1));
        let expected = BinaryMask::from_fn(5, 5, |r, c| (1..=3).contains(&r) && (1..=3).contains(&c));
        assert_eq!(out, expected);
    }

    #[test]
    fn dilate_clips_at_corner() {
        let out = dilate(&single(5, 5, 0, 0), &StructuringElement::square(1));
        assert_eq!(out, BinaryMask::from_fn(5, 5, |r, c| r < 2 && c < 2));
    }

    #[test]
    fn erode_block_to_center() {
        let block = BinaryMask::from_fn(5, 5, |r, c| (1..=3).contains(&r) && (1..=3).contains(&c));
        assert_eq!(erode(&block, &StructuringElement::square(1)), single(5, 5, 2, 2));
    }

    #[test]
    fn erode_full_mask_is_full() {
        let full = BinaryMask::from_fn(7, 4, |_, _| true);
        for se in [StructuringElement::square(3), StructuringElement::disk(5)] {
            assert_eq!(erode(&full, &se), full);
        }
    }

    #[test]
    fn close_bridges_one_pixel_gap() {
        let mask = BinaryMask::from_fn(5, 5, |r, c| r == 2 && (c == 1 || c == 3));
        let closed = close(&mask, &StructuringElement::square(1));
        assert!(closed.get(2, 1) && closed.get(2, 2) && closed.get(2, 3));
        assert_eq!(crate::mask::ComponentSet::from_mask(&closed).len(), 1);
    }

    #[test]
    fn open_removes_small_object() {
        assert!(open(&single(5, 5, 2, 2), &StructuringElement::square(1)).is_blank());
    }

    #[test]
    fn median_cases() {
        assert!(median_filter(&single(5, 5, 2, 2), 3).unwrap().is_blank());
        let block = BinaryMask::from_fn(9, 9, |r, c| (2..7).contains(&r) && (2..7).contains(&c));
        let out = median_filter(&block, 3).unwrap();
        for r in 3..6 {
            for c in 3..6 {
                assert!(out.get(r, c));
            }
        }
        assert!(median_filter(&block, 4).is_err());
        assert!(median_filter(&block, 0).is_err());
        assert_eq!(median_filter(&block, 1).unwrap(), block);
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("disk".parse::<SeShape>().unwrap(), SeShape::Disk);
        assert!("hexagon".parse::<SeShape>().is_err());
    }
}
