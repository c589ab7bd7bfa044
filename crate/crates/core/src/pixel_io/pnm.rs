//! Netpbm PGM/PPM codec (P2, P3, P5, P6) restricted to maxval 255.
//!
//! Comments are accepted anywhere in the header on read and never emitted on
//! write. Every decode error carries the byte offset where parsing stopped.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::image::Image;

#[derive(Debug, thiserror::Error)]
pub enum PnmError {
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: String },
    #[error("unsupported maxval {maxval} at byte {offset} (only 255 is accepted)")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("truncated data at byte {offset}: expected {expected} samples, found {found}")]
    TruncatedData {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn malformed(&self, reason: impl Into<String>) -> PnmError {
        PnmError::MalformedHeader {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
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

    /// Reads an unsigned decimal token. Returns `None` at end of input.
    fn number(&mut self) -> Result<Option<u32>, PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.data.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or_else(|| PnmError::MalformedHeader {
                    offset: start,
                    reason: "numeric field overflows".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            if self.pos >= self.data.len() {
                return Ok(None);
            }
            return Err(self.malformed(format!(
                "expected a decimal number, found byte 0x{:02x}",
                self.data[self.pos]
            )));
        }
        Ok(Some(value))
    }

    fn header_field(&mut self, what: &str) -> Result<u32, PnmError> {
        match self.number()? {
            Some(v) => Ok(v),
            None => Err(self.malformed(format!("missing {what}"))),
        }
    }
}

/// Decodes a PGM or PPM byte stream.
pub fn decode(data: &[u8]) -> Result<Image, PnmError> {
    if data.len() < 2 || data[0] != b'P' {
        return Err(PnmError::MalformedHeader {
            offset: 0,
            reason: "missing 'P' magic".into(),
        });
    }
    let (channels, encoding) = match data[1] {
        b'2' => (1, Encoding::Ascii),
        b'3' => (3, Encoding::Ascii),
        b'5' => (1, Encoding::Binary),
        b'6' => (3, Encoding::Binary),
        other => {
            return Err(PnmError::MalformedHeader {
                offset: 1,
                reason: format!("unsupported magic 'P{}'", other as char),
            })
        }
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.header_field("width")? as usize;
    let height = cur.header_field("height")? as usize;
    if width == 0 || height == 0 {
        return Err(cur.malformed(format!("zero dimension {width}x{height}")));
    }
    let maxval_offset = {
        let mut probe = Cursor { data, pos: cur.pos };
        probe.skip_whitespace_and_comments();
        probe.pos
    };
    let maxval = cur.header_field("maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval {
            offset: maxval_offset,
            maxval,
        });
    }
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| cur.malformed("image dimensions overflow"))?;

    let samples = match encoding {
        Encoding::Binary => {
            // Exactly one whitespace byte separates maxval from the raster.
            match data.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(cur.malformed("expected a single whitespace after maxval")),
            }
            let available = data.len() - cur.pos;
            if available < expected {
                return Err(PnmError::TruncatedData {
                    offset: data.len(),
                    expected,
                    found: available,
                });
            }
            data[cur.pos..cur.pos + expected].to_vec()
        }
        Encoding::Ascii => {
            let mut samples = Vec::with_capacity(expected);
            while samples.len() < expected {
                cur.skip_whitespace_and_comments();
                let at = cur.pos;
                match cur.number()? {
                    Some(v) if v <= 255 => samples.push(v as u8),
                    Some(v) => {
                        return Err(PnmError::MalformedHeader {
                            offset: at,
                            reason: format!("sample {v} exceeds maxval 255"),
                        })
                    }
                    None => {
                        return Err(PnmError::TruncatedData {
                            offset: data.len(),
                            expected,
                            found: samples.len(),
                        })
                    }
                }
            }
            samples
        }
    };
    Ok(Image::new(width, height, channels, samples).expect("geometry checked above"))
}

/// Encodes an image as P5/P6 (binary) or P2/P3 (ASCII).
pub fn encode(img: &Image, ascii: bool) -> Vec<u8> {
    let magic = match (img.channels(), ascii) {
        (1, false) => "P5",
        (3, false) => "P6",
        (1, true) => "P2",
        _ => "P3",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    if ascii {
        for y in 0..img.height() {
            let line = img
                .row(y)
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(img.samples());
    }
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Image, PnmError> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|source| PnmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&data)
}

pub fn write_image(img: &Image, path: impl AsRef<Path>, ascii: bool) -> Result<(), PnmError> {
    let path = path.as_ref();
    let io_err = |source| PnmError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(&encode(img, ascii)).map_err(io_err)
}
