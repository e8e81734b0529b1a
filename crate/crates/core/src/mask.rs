//! Binary masks, connected-component labeling and per-component geometry.
//!
//! Coordinates are `(row, col)` with the origin at the top-left pixel. A
//! [`BinaryMask`] stores one byte per pixel holding exactly `0` (background)
//! or `1` (foreground).

use std::fmt;

use crate::error::{Error, Result};

/// Rectangular grid of foreground/background pixels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryMask {
    /// All-background mask.
    ///
    /// Panics if either dimension is zero.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "mask dimensions must be >= 1");
        let len = width.checked_mul(height).expect("mask dimensions overflow");
        Self {
            width,
            height,
            pixels: vec![0; len],
        }
    }

    /// Builds a mask from row-major pixel values, each of which must be 0 or 1.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Param(format!(
                "mask dimensions must be >= 1, got {width}x{height}"
            )));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::Param(format!(
                "{} pixels supplied for a {width}x{height} mask",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|&v| v > 1) {
            return Err(Error::Param(format!(
                "pixel {i} has value {}, expected 0 or 1",
                pixels[i]
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Self::new(width, height);
        for row in 0..height {
            for col in 0..width {
                mask.pixels[row * width + col] = f(row, col) as u8;
            }
        }
        mask
    }

    /// Parses rows of `.`/`#` (or `0`/`1`) characters; whitespace is ignored.
    /// Handy for small fixtures.
    pub fn from_ascii(art: &str) -> Result<Self> {
        let rows: Vec<Vec<u8>> = art
            .lines()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '#' | '1' => Ok(1),
                        '.' | '0' => Ok(0),
                        other => Err(Error::Param(format!("unexpected mask character {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Param("ragged mask rows".into()));
        }
        Self::from_pixels(width, height, rows.concat())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Row-major pixel values.
    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row * self.width + col] != 0
    }

    /// Like [`get`](Self::get) but returns `None` outside the image.
    #[inline]
    pub fn get_signed(&self, row: isize, col: isize) -> Option<bool> {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            None
        } else {
            Some(self.get(row as usize, col as usize))
        }
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row * self.width + col] = value as u8;
    }

    /// Sets every pixel of `rect` that lies inside the image.
    pub fn fill_rect(&mut self, rect: &Rect, value: bool) {
        let r1 = (rect.row + rect.height).min(self.height);
        let c1 = (rect.col + rect.width).min(self.width);
        for row in rect.row.min(r1)..r1 {
            let base = row * self.width;
            self.pixels[base + rect.col.min(c1)..base + c1].fill(value as u8);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.pixels.iter().map(|&v| v as usize).sum()
    }

    pub fn is_blank(&self) -> bool {
        self.pixels.iter().all(|&v| v == 0)
    }

    /// Iterates foreground pixel coordinates in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, _)| (i / w, i % w))
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| v ^ 1).collect(),
        }
    }

    /// True if every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims()
            && self
                .pixels
                .iter()
                .zip(&other.pixels)
                .all(|(&a, &b)| a <= b)
    }

    pub(crate) fn check_dims(&self, width: usize, height: usize) -> Result<()> {
        if self.dims() != (width, height) {
            return Err(Error::DimensionMismatch {
                expected_width: width,
                expected_height: height,
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.width, self.height)?;
        if self.width * self.height <= 64 * 64 {
            for row in self.pixels.chunks(self.width) {
                let line: String = row.iter().map(|&v| if v != 0 { '#' } else { '.' }).collect();
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Axis-aligned rectangle in pixel units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn new(row: usize, col: usize, height: usize, width: usize) -> Self {
        Self {
            row,
            col,
            height,
            width,
        }
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }

    /// One past the last row.
    pub fn row_end(&self) -> usize {
        self.row + self.height
    }

    /// One past the last column.
    pub fn col_end(&self) -> usize {
        self.col + self.width
    }

    pub fn fits_in(&self, width: usize, height: usize) -> bool {
        self.height >= 1 && self.width >= 1 && self.row_end() <= height && self.col_end() <= width
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.row < other.row_end()
            && other.row < self.row_end()
            && self.col < other.col_end()
            && other.col < self.col_end()
    }

    /// Number of background pixels between the two rectangles along the
    /// axis where they are apart (Chebyshev gap); 0 if they touch or overlap.
    pub fn gap(&self, other: &Rect) -> usize {
        let row_gap = other
            .row
            .saturating_sub(self.row_end())
            .max(self.row.saturating_sub(other.row_end()));
        let col_gap = other
            .col
            .saturating_sub(self.col_end())
            .max(self.col.saturating_sub(other.col_end()));
        row_gap.max(col_gap)
    }
}

/// Tight, inclusive bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BBox {
    pub min_row: usize,
    pub min_col: usize,
    pub max_row: usize,
    pub max_col: usize,
}

impl BBox {
    pub fn height(&self) -> usize {
        self.max_row - self.min_row + 1
    }

    pub fn width(&self) -> usize {
        self.max_col - self.min_col + 1
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.min_row <= other.max_row
            && other.min_row <= self.max_row
            && self.min_col <= other.max_col
            && other.min_col <= self.max_col
    }
}

/// Pixel adjacency used for labeling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

/// One connected foreground region.
///
/// Pixels are kept explicitly so that exact overlaps can be computed during
/// matching. They are stored in raster order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    label: u32,
    bbox: BBox,
    perimeter: usize,
    pixels: Vec<(usize, usize)>,
}

impl Component {
    /// Builds a component from an arbitrary non-empty pixel set. Duplicates
    /// are removed.
    pub fn from_pixels(label: u32, mut pixels: Vec<(usize, usize)>) -> Result<Self> {
        if pixels.is_empty() {
            return Err(Error::Param(format!("component {label} has no pixels")));
        }
        pixels.sort_unstable();
        pixels.dedup();
        Ok(Self::from_sorted(label, pixels))
    }

    pub fn from_rect(label: u32, rect: &Rect) -> Result<Self> {
        if rect.width == 0 || rect.height == 0 {
            return Err(Error::Param(format!("rect {rect:?} is empty")));
        }
        let pixels = (rect.row..rect.row_end())
            .flat_map(|r| (rect.col..rect.col_end()).map(move |c| (r, c)))
            .collect();
        Ok(Self::from_sorted(label, pixels))
    }

    /// `pixels` must be sorted, deduplicated and non-empty.
    fn from_sorted(label: u32, pixels: Vec<(usize, usize)>) -> Self {
        let mut bbox = BBox {
            min_row: usize::MAX,
            min_col: usize::MAX,
            max_row: 0,
            max_col: 0,
        };
        for &(r, c) in &pixels {
            bbox.min_row = bbox.min_row.min(r);
            bbox.max_row = bbox.max_row.max(r);
            bbox.min_col = bbox.min_col.min(c);
            bbox.max_col = bbox.max_col.max(c);
        }

        // Local occupancy grid over the bbox with a one-pixel empty margin.
        let gw = bbox.width() + 2;
        let gh = bbox.height() + 2;
        let mut grid = vec![false; gw * gh];
        let idx = |r: usize, c: usize| (r - bbox.min_row + 1) * gw + (c - bbox.min_col + 1);
        for &(r, c) in &pixels {
            grid[idx(r, c)] = true;
        }
        let perimeter = pixels
            .iter()
            .filter(|&&(r, c)| {
                let i = idx(r, c);
                !(grid[i - 1] && grid[i + 1] && grid[i - gw] && grid[i + gw])
            })
            .count();

        Self {
            label,
            bbox,
            perimeter,
            pixels,
        }
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// Count of pixels with at least one 4-neighbor outside the component.
    pub fn perimeter(&self) -> usize {
        self.perimeter
    }

    /// Short over long bounding-box side, in `(0, 1]`.
    pub fn aspect_ratio(&self) -> f64 {
        let h = self.bbox.height() as f64;
        let w = self.bbox.width() as f64;
        h.min(w) / h.max(w)
    }

    pub fn pixels(&self) -> &[(usize, usize)] {
        &self.pixels
    }

    pub fn stats(&self) -> ComponentStats {
        component_stats(self)
    }

    /// Number of pixels shared with `other`.
    pub fn overlap(&self, other: &Component) -> usize {
        if !self.bbox.intersects(&other.bbox) {
            return 0;
        }
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.pixels, &other.pixels);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentStats {
    pub area: usize,
    pub bbox: BBox,
    pub perimeter: usize,
    pub aspect_ratio: f64,
}

pub fn component_stats(component: &Component) -> ComponentStats {
    ComponentStats {
        area: component.area(),
        bbox: component.bbox(),
        perimeter: component.perimeter(),
        aspect_ratio: component.aspect_ratio(),
    }
}

/// Per-pixel component labels; 0 is background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    component_count: u32,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    pub fn component_count(&self) -> u32 {
        self.component_count
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }
}

/// Two-pass union-find labeling.
///
/// Labels are assigned in raster order of each component's first pixel, so
/// label 1 is the component containing the topmost-leftmost foreground
/// pixel. Components are returned sorted by label.
pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> (LabelMap, Vec<Component>) {
    let (w, h) = mask.dims();
    let px = mask.as_slice();
    let mut provisional = vec![0u32; w * h];
    // Index 0 is reserved for background.
    let mut sets = DisjointSet { parent: vec![0] };

    for row in 0..h {
        for col in 0..w {
            let i = row * w + col;
            if px[i] == 0 {
                continue;
            }
            let mut current = 0u32;
            let mut visit = |n: u32, sets: &mut DisjointSet| {
                if n != 0 {
                    current = if current == 0 { sets.find(n) } else { sets.union(current, n) };
                }
            };
            if col > 0 {
                visit(provisional[i - 1], &mut sets);
            }
            if row > 0 {
                let up = i - w;
                visit(provisional[up], &mut sets);
                if connectivity == Connectivity::Eight {
                    if col > 0 {
                        visit(provisional[up - 1], &mut sets);
                    }
                    if col + 1 < w {
                        visit(provisional[up + 1], &mut sets);
                    }
                }
            }
            provisional[i] = if current == 0 { sets.make() } else { current };
        }
    }

    let mut final_of_root = vec![0u32; sets.parent.len()];
    let mut count = 0u32;
    let mut pixel_lists: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, p) in provisional.iter_mut().enumerate() {
        if *p == 0 {
            continue;
        }
        let root = sets.find(*p) as usize;
        if final_of_root[root] == 0 {
            count += 1;
            final_of_root[root] = count;
            pixel_lists.push(Vec::new());
        }
        let label = final_of_root[root];
        *p = label;
        pixel_lists[label as usize - 1].push((i / w, i % w));
    }

    let components = pixel_lists
        .into_iter()
        .zip(1u32..)
        .map(|(pixels, label)| Component::from_sorted(label, pixels))
        .collect();

    (
        LabelMap {
            width: w,
            height: h,
            labels: provisional,
            component_count: count,
        },
        components,
    )
}

/// Paints the given components into a fresh mask.
pub fn render_components<'a>(
    components: impl IntoIterator<Item = &'a Component>,
    width: usize,
    height: usize,
) -> Result<BinaryMask> {
    let mut mask = BinaryMask::new(width, height);
    for comp in components {
        for &(row, col) in comp.pixels() {
            if row >= height || col >= width {
                return Err(Error::CorruptComponent {
                    label: comp.label(),
                    row,
                    col,
                    width,
                    height,
                });
            }
            mask.set(row, col, true);
        }
    }
    Ok(mask)
}

/// Components together with the frame they belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSet {
    pub width: usize,
    pub height: usize,
    pub components: Vec<Component>,
}

impl ComponentSet {
    /// 8-connected components of `mask`.
    pub fn from_mask(mask: &BinaryMask) -> Self {
        let (_, components) = label_components(mask, Connectivity::Eight);
        Self {
            width: mask.width(),
            height: mask.height(),
            components,
        }
    }

    /// One component per rectangle, labeled 1.. in input order. Rectangles
    /// are kept independent even if they touch or overlap.
    pub fn from_rects(width: usize, height: usize, rects: &[Rect]) -> Result<Self> {
        let components = rects
            .iter()
            .zip(1u32..)
            .map(|(r, label)| {
                if !r.fits_in(width, height) {
                    return Err(Error::Param(format!(
                        "rect {r:?} does not fit in {width}x{height}"
                    )));
                }
                Component::from_rect(label, r)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            width,
            height,
            components,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            components: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn to_mask(&self) -> Result<BinaryMask> {
        render_components(&self.components, self.width, self.height)
    }
}
