//! Binary PGM (P5) reading and writing, 8-bit only.
//!
//! The reader accepts `#` comments anywhere in the header and any ASCII
//! whitespace between fields. Exactly one whitespace byte separates the
//! maxval from the payload, and the payload must be exactly
//! `width * height` bytes. The writer always emits the canonical
//! `P5\n<width> <height>\n255\n` header with no comments.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Upper bound on header numbers; anything larger is rejected before allocation.
pub const MAX_DIMENSION: u32 = 1 << 16;

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::PgmHeader(format!("missing or non-numeric {field}")));
        }
        let digits = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(v) if v <= MAX_DIMENSION => Ok(v),
            _ => Err(Error::PgmHeaderOverflow(format!("{field} = {digits}"))),
        }
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    if magic != b"P5" {
        return Err(Error::PgmBadMagic(
            String::from_utf8_lossy(magic).into_owned(),
        ));
    }
    let mut cur = HeaderCursor {
        data: bytes,
        pos: 2,
    };
    if !cur
        .data
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(Error::PgmHeader(
            "magic must be followed by whitespace".into(),
        ));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::PgmHeader(format!("empty image {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::PgmUnsupportedDepth(maxval));
    }
    match cur.data.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(Error::PgmHeader(
                "maxval must be followed by one whitespace byte".into(),
            ))
        }
    }
    let expected = width as usize * height as usize;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(Error::PgmTruncated {
            expected,
            found: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::PgmTrailingBytes(payload.len() - expected));
    }
    GrayImage::new(width as usize, height as usize, payload.to_vec())
}

pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

pub fn load_pgm(path: &Path) -> Result<GrayImage> {
    read_pgm(&fs::read(path)?)
}
