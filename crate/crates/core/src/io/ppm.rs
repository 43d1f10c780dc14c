//! Binary PPM (`P6`) codec.
//!
//! Samples wider than 8 bits (`maxval > 255`) and maxvals other than 255 are
//! rescaled to 8 bits on decode. Encoding always writes `maxval = 255`.

use super::FormatError;
use crate::imaging::FrameImage;

struct Header {
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    /// Skips whitespace and `#` comments that run to the end of the line.
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if is_space(b) {
                self.pos += 1;
            } else if b == b'#' {
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

    fn number(&mut self, what: &str) -> Result<u32, FormatError> {
        self.skip_separators();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u32))
                .ok_or_else(|| FormatError::new(format!("{what} overflows")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(FormatError::new(format!("expected {what}")));
        }
        Ok(value)
    }
}

fn parse_header(bytes: &[u8]) -> Result<Header, FormatError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(FormatError::new("missing P6 magic number"));
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(FormatError::new(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(FormatError::new(format!("maxval {maxval} out of range")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(&b) if is_space(b) => {}
        _ => return Err(FormatError::new("missing separator before pixel data")),
    }
    Ok(Header {
        width,
        height,
        maxval,
        data_offset: cur.pos + 1,
    })
}

pub fn decode_ppm(bytes: &[u8]) -> Result<FrameImage, FormatError> {
    let h = parse_header(bytes)?;
    let sample_bytes = if h.maxval > 255 { 2 } else { 1 };
    let samples = h
        .width
        .checked_mul(h.height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| FormatError::new("dimensions overflow"))?;
    let needed = samples
        .checked_mul(sample_bytes)
        .ok_or_else(|| FormatError::new("dimensions overflow"))?;
    let raster = &bytes[h.data_offset..];
    if raster.len() < needed {
        return Err(FormatError::new(format!(
            "truncated raster: need {needed} bytes, have {}",
            raster.len()
        )));
    }
    let maxval = h.maxval as u64;
    let rescale = |v: u64| -> Result<u8, FormatError> {
        if v > maxval {
            return Err(FormatError::new(format!(
                "sample {v} exceeds maxval {maxval}"
            )));
        }
        Ok(((v * 255 + maxval / 2) / maxval) as u8)
    };
    let data = if sample_bytes == 1 && h.maxval == 255 {
        raster[..needed].to_vec()
    } else if sample_bytes == 1 {
        raster[..needed]
            .iter()
            .map(|&b| rescale(b as u64))
            .collect::<Result<_, _>>()?
    } else {
        raster[..needed]
            .chunks_exact(2)
            .map(|c| rescale(u16::from_be_bytes([c[0], c[1]]) as u64))
            .collect::<Result<_, _>>()?
    };
    FrameImage::new(h.width, h.height, data).map_err(|e| FormatError::new(e.to_string()))
}

pub fn encode_ppm(frame: &FrameImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", frame.width(), frame.height());
    let mut out = Vec::with_capacity(header.len() + frame.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(frame.data());
    out
}
