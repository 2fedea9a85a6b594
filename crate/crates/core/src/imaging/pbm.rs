//! PBM (netpbm bitmap) reading and writing: plain `P1` and raw `P4`.
//! In both, 1 is black and 0 is white.

use std::fs;
use std::path::Path;

use super::BinaryImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PbmFormat {
    /// ASCII `P1`.
    Plain,
    /// Packed binary `P4`.
    #[default]
    Raw,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self
                    .data
                    .get(self.pos)
                    .is_some_and(|&c| c != b'\n' && c != b'\r')
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pbm(format!("expected {what}")))
    }
}

pub fn read_pbm(data: &[u8]) -> Result<BinaryImage> {
    let format = match data.get(..2) {
        Some(b"P1") => PbmFormat::Plain,
        Some(b"P4") => PbmFormat::Raw,
        _ => return Err(Error::Pbm("not a P1 or P4 bitmap".into())),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pbm("image dimensions overflow".into()))?;

    let bits = match format {
        PbmFormat::Plain => {
            let mut bits = Vec::with_capacity(len);
            while bits.len() < len {
                cur.skip_space_and_comments();
                match cur.data.get(cur.pos) {
                    Some(b'0') => bits.push(false),
                    Some(b'1') => bits.push(true),
                    Some(&other) => {
                        return Err(Error::Pbm(format!(
                            "unexpected byte {other:#04x} in P1 raster"
                        )))
                    }
                    None => {
                        return Err(Error::Pbm(format!(
                            "raster ends after {} of {len} pixels",
                            bits.len()
                        )))
                    }
                }
                cur.pos += 1;
            }
            bits
        }
        PbmFormat::Raw => {
            // Exactly one whitespace byte separates header from raster.
            if !cur.data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
                return Err(Error::Pbm("missing whitespace before P4 raster".into()));
            }
            let raster = &cur.data[cur.pos + 1..];
            let stride = width.div_ceil(8);
            if raster.len() < stride * height {
                return Err(Error::Pbm(format!(
                    "P4 raster has {} bytes, need {}",
                    raster.len(),
                    stride * height
                )));
            }
            let mut bits = Vec::with_capacity(len);
            for y in 0..height {
                let row = &raster[y * stride..(y + 1) * stride];
                for x in 0..width {
                    bits.push(row[x / 8] >> (7 - x % 8) & 1 == 1);
                }
            }
            bits
        }
    };
    BinaryImage::from_bits(width, height, bits)
}

pub fn write_pbm(image: &BinaryImage, format: PbmFormat) -> Vec<u8> {
    let (w, h) = (image.width(), image.height());
    match format {
        PbmFormat::Plain => {
            let mut out = format!("P1\n{w} {h}\n").into_bytes();
            for y in 0..h {
                // Lines stay under 70 characters.
                for (i, x) in (0..w).enumerate() {
                    if i > 0 {
                        out.push(if i % 35 == 0 { b'\n' } else { b' ' });
                    }
                    out.push(if image.get(x, y) { b'1' } else { b'0' });
                }
                out.push(b'\n');
            }
            out
        }
        PbmFormat::Raw => {
            let mut out = format!("P4\n{w} {h}\n").into_bytes();
            let stride = w.div_ceil(8);
            for y in 0..h {
                let mut row = vec![0u8; stride];
                for x in 0..w {
                    if image.get(x, y) {
                        row[x / 8] |= 0x80 >> (x % 8);
                    }
                }
                out.extend_from_slice(&row);
            }
            out
        }
    }
}

pub fn read_pbm_file(path: impl AsRef<Path>) -> Result<BinaryImage> {
    read_pbm(&fs::read(path)?)
}

pub fn write_pbm_file(
    path: impl AsRef<Path>,
    image: &BinaryImage,
    format: PbmFormat,
) -> Result<()> {
    fs::write(path, write_pbm(image, format))?;
    Ok(())
}
