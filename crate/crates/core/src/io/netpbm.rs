//! Binary PGM (`P5`) masks and grayscale PFM (`Pf`) float maps.
//!
//! PGM samples are single bytes (maxval 1..=255); a mask pixel is set when
//! its sample is nonzero. PFM stores little-endian samples when the scale
//! field is negative and big-endian otherwise, with rows bottom-up; maps
//! are flipped to top-down on load and back on write.

use thiserror::Error;

use crate::raster::{InstanceMask, PlaneImage, ScalarMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetpbmError {
    #[error("unrecognized magic number {0:?}")]
    BadMagic(String),
    #[error("color PFM (\"PF\") is not supported; expected grayscale \"Pf\"")]
    ColorPfm,
    #[error("malformed header at byte {offset}: {reason}")]
    BadHeader { offset: usize, reason: &'static str },
    #[error("maxval {0} is not supported (expected 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("image planes differ in size")]
    PlaneMismatch,
    #[error("non-finite sample at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
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

    fn token(&mut self) -> Result<&'a str, NetpbmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|c| !c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(NetpbmError::BadHeader {
                offset: start,
                reason: "unexpected end of header",
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| NetpbmError::BadHeader {
            offset: start,
            reason: "non-ASCII header field",
        })
    }

    fn number<T: std::str::FromStr>(&mut self, reason: &'static str) -> Result<T, NetpbmError> {
        self.skip_space_and_comments();
        let offset = self.pos;
        self.token()?
            .parse()
            .map_err(|_| NetpbmError::BadHeader { offset, reason })
    }

    /// Consumes the single whitespace byte separating header and raster.
    fn end_of_header(&mut self) -> Result<usize, NetpbmError> {
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_whitespace() => Ok(self.pos + 1),
            _ => Err(NetpbmError::BadHeader {
                offset: self.pos,
                reason: "missing whitespace after header",
            }),
        }
    }
}

struct Pgm<'a> {
    height: usize,
    width: usize,
    maxval: u32,
    samples: &'a [u8],
}

fn read_pgm(bytes: &[u8]) -> Result<Pgm<'_>, NetpbmError> {
    let mut r = HeaderReader { bytes, pos: 0 };
    let magic = r.token()?;
    if magic != "P5" {
        return Err(NetpbmError::BadMagic(magic.to_owned()));
    }
    let width: usize = r.number("invalid width")?;
    let height: usize = r.number("invalid height")?;
    let maxval: u32 = r.number("invalid maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(NetpbmError::UnsupportedMaxval(maxval));
    }
    let start = r.end_of_header()?;
    let expected = width.checked_mul(height).ok_or(NetpbmError::BadHeader {
        offset: start,
        reason: "dimensions overflow",
    })?;
    let found = bytes.len() - start;
    if found < expected {
        return Err(NetpbmError::Truncated { expected, found });
    }
    Ok(Pgm {
        height,
        width,
        maxval,
        samples: &bytes[start..start + expected],
    })
}

/// Parses a binary PGM into the set of nonzero pixels.
pub fn load_mask(bytes: &[u8]) -> Result<InstanceMask, NetpbmError> {
    let pgm = read_pgm(bytes)?;
    let pixels = pgm
        .samples
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0)
        .map(|(i, _)| i)
        .collect();
    Ok(InstanceMask::from_indices(pgm.height, pgm.width, pixels).expect("indices within grid"))
}

/// Parses a binary PGM as an intensity plane normalized to `[0, 1]`.
pub fn load_plane(bytes: &[u8]) -> Result<ScalarMap, NetpbmError> {
    let pgm = read_pgm(bytes)?;
    let scale = f64::from(pgm.maxval);
    let values = pgm.samples.iter().map(|&v| f64::from(v) / scale).collect();
    Ok(ScalarMap::new(pgm.height, pgm.width, values).expect("finite by construction"))
}

/// Loads three PGM planes as one image.
pub fn load_planes(r: &[u8], g: &[u8], b: &[u8]) -> Result<PlaneImage, NetpbmError> {
    let planes = [load_plane(r)?, load_plane(g)?, load_plane(b)?];
    PlaneImage::new(planes).map_err(|_| NetpbmError::PlaneMismatch)
}

pub fn write_mask(mask: &InstanceMask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    let start = out.len();
    out.resize(start + mask.width() * mask.height(), 0);
    for &i in mask.indices() {
        out[start + i] = 255;
    }
    out
}

/// Writes a plane with values in `[0, 1]` as 8-bit PGM (rounded).
pub fn write_plane(plane: &ScalarMap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend(
        plane
            .values()
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

/// Parses a grayscale PFM into a top-down map.
pub fn load_disparity(bytes: &[u8]) -> Result<ScalarMap, NetpbmError> {
    let mut r = HeaderReader { bytes, pos: 0 };
    let magic = r.token()?;
    match magic {
        "Pf" => {}
        "PF" => return Err(NetpbmError::ColorPfm),
        other => return Err(NetpbmError::BadMagic(other.to_owned())),
    }
    let width: usize = r.number("invalid width")?;
    let height: usize = r.number("invalid height")?;
    let scale_offset = r.pos;
    let scale: f32 = r.number("invalid scale")?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(NetpbmError::BadHeader {
            offset: scale_offset,
            reason: "scale must be finite and nonzero",
        });
    }
    let little_endian = scale < 0.0;
    let start = r.end_of_header()?;
    let pixels = width.checked_mul(height).filter(|n| *n <= usize::MAX / 4);
    let Some(pixels) = pixels else {
        return Err(NetpbmError::BadHeader {
            offset: start,
            reason: "dimensions overflow",
        });
    };
    let expected = pixels * 4;
    let found = bytes.len() - start;
    if found < expected {
        return Err(NetpbmError::Truncated { expected, found });
    }
    let mut values = vec![0.0f64; pixels];
    for (k, chunk) in bytes[start..start + expected].chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little_endian {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        let file_row = k / width;
        let col = k % width;
        let row = height - 1 - file_row;
        if !v.is_finite() {
            return Err(NetpbmError::NonFinite { row, col });
        }
        values[row * width + col] = f64::from(v);
    }
    Ok(ScalarMap::new(height, width, values).expect("finite by construction"))
}

/// Writes a grayscale little-endian PFM (scale -1.0). Values are narrowed
/// to `f32`.
pub fn write_disparity(map: &ScalarMap) -> Vec<u8> {
    let mut out = format!("Pf\n{} {}\n-1.0\n", map.width(), map.height()).into_bytes();
    for row in (0..map.height()).rev() {
        for col in 0..map.width() {
            let v = map.get(row, col).expect("in bounds") as f32;
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}
