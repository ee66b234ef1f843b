//! Minimal reader for 8-bit PGM images (plain `P2` and binary `P5`).

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    /// Pixel values requantized to `bits` bits: low bits are dropped for
    /// `bits < 8` and zero bits appended for `bits > 8`.
    pub fn requantized(&self, bits: u32) -> Vec<u32> {
        self.pixels
            .iter()
            .map(|&p| {
                let p = u32::from(p);
                if bits <= 8 {
                    p >> (8 - bits)
                } else {
                    p << (bits - 8)
                }
            })
            .collect()
    }
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let data = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_pgm(&data)
}

pub fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    let mut cursor = Header { data, pos: 0 };
    let magic = cursor.token()?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(Error::Pgm(format!(
                "unsupported magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let maxval = cursor.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Pgm(format!("maxval {maxval} is not 8-bit")));
    }
    let count = width
        .checked_mul(height)
        .filter(|&c| c > 0)
        .ok_or_else(|| Error::Pgm(format!("bad dimensions {width}x{height}")))?;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = cursor.pos + 1;
        let raster = data
            .get(start..start + count)
            .ok_or_else(|| Error::Pgm(format!("raster shorter than {count} bytes")))?;
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            pixels.push(cursor.number("pixel")?);
        }
        pixels
            .into_iter()
            .map(|p| u8::try_from(p).map_err(|_| Error::Pgm(format!("pixel {p} exceeds 255"))))
            .collect::<Result<_>>()?
    };
    if let Some(p) = pixels.iter().find(|&&p| usize::from(p) > maxval) {
        return Err(Error::Pgm(format!("pixel {p} exceeds maxval {maxval}")));
    }
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u32,
        pixels,
    })
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm("unexpected end of data".into()));
        }
        Ok(&self.data[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("bad {what} `{}`", String::from_utf8_lossy(tok))))
    }
}
