//! Netpbm bitmaps (P1, P4) for masks and binary pixmaps (P6) for overlays.
//!
//! In a bitmap `1` means black, and black is read as foreground. Masks
//! produced by tools that use white for foreground can be read with
//! `invert = true`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mask::BinaryMask;

/// Upper bound on pixels per image, to reject absurd headers before allocating.
const MAX_PIXELS: usize = 1 << 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PbmFormat {
    /// ASCII bitmap.
    P1,
    /// Packed binary bitmap.
    #[default]
    P4,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn magic(&mut self) -> Result<&'a [u8]> {
        let m = self
            .bytes
            .get(..2)
            .ok_or_else(|| Error::format(0, "file too short for a netpbm magic number"))?;
        self.pos = 2;
        Ok(m)
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as usize))
                .ok_or_else(|| Error::format(start, format!("{what} overflows")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::format(start, format!("expected {what}")));
        }
        Ok(value)
    }

    /// Consumes the single whitespace byte that ends a binary header.
    fn header_terminator(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::format(self.pos, "expected whitespace after header")),
        }
    }
}

fn dimensions(cur: &mut Cursor<'_>) -> Result<(usize, usize)> {
    let width_at = cur.pos;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::format(width_at, format!("zero dimension {width}x{height}")));
    }
    match width.checked_mul(height) {
        Some(n) if n <= MAX_PIXELS => Ok((width, height)),
        _ => Err(Error::format(width_at, format!("dimensions {width}x{height} too large"))),
    }
}

/// Decodes a P1 or P4 bitmap.
pub fn decode_mask(bytes: &[u8], invert: bool) -> Result<BinaryMask> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.magic()?;
    let (width, height) = match magic {
        b"P1" | b"P4" => dimensions(&mut cur)?,
        _ => return Err(Error::format(0, "not a P1 or P4 bitmap")),
    };
    let mut pixels = Vec::with_capacity(width * height);

    if magic == b"P1" {
        while pixels.len() < width * height {
            cur.skip_whitespace_and_comments();
            match cur.bytes.get(cur.pos) {
                Some(b'0') => pixels.push(0),
                Some(b'1') => pixels.push(1),
                Some(&b) => {
                    return Err(Error::format(
                        cur.pos,
                        format!("unexpected byte 0x{b:02x} in P1 raster"),
                    ))
                }
                None => {
                    return Err(Error::format(
                        cur.pos,
                        format!("truncated P1 raster: {} of {} pixels", pixels.len(), width * height),
                    ))
                }
            }
            cur.pos += 1;
        }
    } else {
        cur.header_terminator()?;
        let row_bytes = width.div_ceil(8);
        let need = row_bytes * height;
        let payload = &bytes[cur.pos..];
        if payload.len() < need {
            return Err(Error::format(
                bytes.len(),
                format!("truncated P4 raster: {} of {need} bytes", payload.len()),
            ));
        }
        for row in payload[..need].chunks_exact(row_bytes) {
            pixels.extend((0..width).map(|c| (row[c / 8] >> (7 - c % 8)) & 1));
        }
    }

    if invert {
        pixels.iter_mut().for_each(|v| *v ^= 1);
    }
    BinaryMask::from_pixels(width, height, pixels)
}

/// Packed bitmap: `P4\n<w> <h>\n`, rows MSB-first and padded to whole bytes.
pub fn encode_p4(mask: &BinaryMask) -> Vec<u8> {
    let (w, h) = mask.dims();
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    out.reserve(row_bytes * h);
    for row in mask.as_slice().chunks_exact(w) {
        let mut packed = vec![0u8; row_bytes];
        for (c, &v) in row.iter().enumerate() {
            packed[c / 8] |= v << (7 - c % 8);
        }
        out.extend_from_slice(&packed);
    }
    out
}

/// ASCII bitmap, lines wrapped at 70 characters.
pub fn encode_p1(mask: &BinaryMask) -> Vec<u8> {
    let (w, h) = mask.dims();
    let mut out = format!("P1\n{w} {h}\n").into_bytes();
    for row in mask.as_slice().chunks_exact(w) {
        for chunk in row.chunks(70) {
            out.extend(chunk.iter().map(|&v| b'0' + v));
            out.push(b'\n');
        }
    }
    out
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    read_mask_with(path, false)
}

pub fn read_mask_with(path: impl AsRef<Path>, invert: bool) -> Result<BinaryMask> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_mask(&bytes, invert).map_err(|e| e.with_path(path))
}

/// Writes a P4 bitmap.
pub fn write_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    write_mask_as(mask, path, PbmFormat::P4)
}

pub fn write_mask_as(mask: &BinaryMask, path: impl AsRef<Path>, format: PbmFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        PbmFormat::P1 => encode_p1(mask),
        PbmFormat::P4 => encode_p4(mask),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// 8-bit RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![[0; 3]; width * height],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> [u8; 3] {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, rgb: [u8; 3]) {
        self.pixels[row * self.width + col] = rgb;
    }

    pub fn count(&self, rgb: [u8; 3]) -> usize {
        self.pixels.iter().filter(|&&p| p == rgb).count()
    }

    /// `P6\n<w> <h>\n255\n` followed by RGB triples.
    pub fn encode_p6(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    /// Decodes a P6 pixmap with maxval 255.
    pub fn decode_p6(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.magic()? != b"P6" {
            return Err(Error::format(0, "not a P6 pixmap"));
        }
        let (width, height) = dimensions(&mut cur)?;
        let maxval_at = cur.pos;
        if cur.number("maxval")? != 255 {
            return Err(Error::format(maxval_at, "only maxval 255 is supported"));
        }
        cur.header_terminator()?;
        let need = width * height * 3;
        let payload = &bytes[cur.pos..];
        if payload.len() < need {
            return Err(Error::format(bytes.len(), "truncated P6 raster"));
        }
        let pixels = payload[..need].chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Self { width, height, pixels })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode_p6()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal() -> BinaryMask {
        BinaryMask::from_ascii("#.\n.#").unwrap()
    }

    #[test]
    fn decode_p1_example() {
        assert_eq!(decode_mask(b"P1\n2 2\n1 0\n0 1\n", false).unwrap(), diagonal());
        // Digits need not be separated, and comments may appear anywhere.
        assert_eq!(decode_mask(b"P1 # c\n2 # w\n2\n10\n01", false).unwrap(), diagonal());
    }

    #[test]
    fn encode_p4_example() {
        assert_eq!(encode_p4(&diagonal()), b"P4\n2 2\n\x80\x40".to_vec());
    }

    #[test]
    fn odd_width_row_padding() {
        let mask = BinaryMask::from_fn(9, 2, |r, c| r == 0 && (c == 0 || c == 8));
        let bytes = encode_p4(&mask);
        assert_eq!(&bytes[b"P4\n9 2\n".len()..], &[0x80, 0x80, 0x00, 0x00]);
        assert_eq!(decode_mask(&bytes, false).unwrap(), mask);
        assert_eq!(decode_mask(&encode_p1(&mask), false).unwrap(), mask);
    }

    #[test]
    fn invert_on_read() {
        let inv = decode_mask(b"P1\n2 2\n1 0\n0 1\n", true).unwrap();
        assert_eq!(inv, diagonal().complement());
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        let err = decode_mask(b"P5\n2 2\n", false).unwrap_err();
        assert!(matches!(err, Error::Format { offset: 0, .. }));

        let err = decode_mask(b"P4\n2 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Format { offset: 5, .. }), "{err}");

        let err = decode_mask(b"P4\n16 2\n\xff\xff\xff", false).unwrap_err();
        assert!(matches!(err, Error::Format { offset: 11, .. }), "{err}");

        let err = decode_mask(b"P1\n2 2\n1 0 2 1", false).unwrap_err();
        assert!(matches!(err, Error::Format { offset: 11, .. }), "{err}");

        assert!(decode_mask(b"P4\n99999999999 99999999999\n", false).is_err());
        assert!(decode_mask(b"P4\n0 3\n", false).is_err());
        assert!(decode_mask(b"P", false).is_err());
    }

    #[test]
    fn p6_round_trip() {
        let mut img = RgbImage::new(3, 2);
        img.set(1, 2, [255, 0, 0]);
        let bytes = img.encode_p6();
        assert!(bytes.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(RgbImage::decode_p6(&bytes).unwrap(), img);
    }
}
