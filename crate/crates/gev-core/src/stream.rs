//! The `GEV1` binary stream format, little-endian throughout.
//!
//! ```text
//! header:    magic "GEV1" | version u16 | width u16 | height u16
//!            | flags u8 (bit0 = compressed) | n u8 | thresholds n x f32
//! per frame: timestamp u64 (microseconds) | record count u32 | records
//! record:    x u16 | y u16 | channel u8 (0 = X, 1 = Y) | polarity i8
//! ```
//!
//! Only non-zero events are stored. For compressed streams just the
//! even-index member of each duplicate pair is written; readers duplicate it
//! back to the partner slot.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::codec::EventFrame;
use crate::error::{Error, Result};
use crate::threshold::ThresholdMatrix;

pub const MAGIC: [u8; 4] = *b"GEV1";
pub const VERSION: u16 = 1;

const CHANNEL_X: u8 = 0;
const CHANNEL_Y: u8 = 1;

/// Stream geometry and the quantization thresholds the encoder used.
///
/// Decoding requires the receiver to rebuild the encoder's threshold matrix,
/// so the thresholds travel in the header (as `f32`).
#[derive(Debug, Clone, PartialEq)]
pub struct StreamHeader {
    pub width: u16,
    pub height: u16,
    pub compressed: bool,
    pub thresholds: Vec<f32>,
}

impl StreamHeader {
    pub fn new(width: u16, height: u16, compressed: bool, thresholds: Vec<f32>) -> Result<Self> {
        let header = Self {
            width,
            height,
            compressed,
            thresholds,
        };
        header.validate()?;
        Ok(header)
    }

    fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::MalformedHeader(format!(
                "dimensions must be at least 2x2, got {}x{}",
                self.width, self.height
            )));
        }
        if self.compressed && (!self.width.is_multiple_of(2) || !self.height.is_multiple_of(2)) {
            return Err(Error::MalformedHeader(format!(
                "compressed streams need even dimensions, got {}x{}",
                self.width, self.height
            )));
        }
        if self.thresholds.is_empty() || self.thresholds.len() > 255 {
            return Err(Error::MalformedHeader(format!(
                "threshold count {} outside 1..=255",
                self.thresholds.len()
            )));
        }
        if let Some(t) = self.thresholds.iter().find(|t| !t.is_finite() || **t <= 0.0) {
            return Err(Error::MalformedHeader(format!(
                "thresholds must be positive and finite, got {t}"
            )));
        }
        Ok(())
    }

    /// Derives the header for an encoder configuration. Thresholds are
    /// narrowed to `f32` for storage.
    pub fn for_encoder(theta: &ThresholdMatrix, compressed: bool) -> Result<Self> {
        let width = u16::try_from(theta.width())
            .map_err(|_| Error::MalformedHeader("width exceeds u16".into()))?;
        let height = u16::try_from(theta.height())
            .map_err(|_| Error::MalformedHeader("height exceeds u16".into()))?;
        Self::new(
            width,
            height,
            compressed,
            theta.thresholds().iter().map(|&t| t as f32).collect(),
        )
    }

    /// Rebuilds the cyclic threshold matrix the header describes.
    pub fn threshold_matrix(&self) -> Result<ThresholdMatrix> {
        let thresholds: Vec<f64> = self.thresholds.iter().map(|&t| f64::from(t)).collect();
        ThresholdMatrix::cyclic(usize::from(self.width), usize::from(self.height), &thresholds)
    }

    /// True when `theta` matches this header's geometry and thresholds at
    /// stored (`f32`) precision.
    pub fn matches_thresholds(&self, theta: &ThresholdMatrix) -> bool {
        theta.width() == usize::from(self.width)
            && theta.height() == usize::from(self.height)
            && theta.thresholds().len() == self.thresholds.len()
            && theta
                .thresholds()
                .iter()
                .zip(&self.thresholds)
                .all(|(&a, &b)| a as f32 == b)
    }
}

/// Serializes a header and its frames. Frames must match the header's
/// geometry and compression flag. `read_stream(write_stream(x)) == x`
/// bit-exactly.
pub fn write_stream<W: Write>(
    header: &StreamHeader,
    frames: &[EventFrame],
    mut sink: W,
) -> Result<()> {
    header.validate()?;
    sink.write_all(&MAGIC)?;
    sink.write_u16::<LittleEndian>(VERSION)?;
    sink.write_u16::<LittleEndian>(header.width)?;
    sink.write_u16::<LittleEndian>(header.height)?;
    sink.write_u8(u8::from(header.compressed))?;
    sink.write_u8(header.thresholds.len() as u8)?;
    for &t in &header.thresholds {
        sink.write_f32::<LittleEndian>(t)?;
    }
    for frame in frames {
        write_frame(header, frame, &mut sink)?;
    }
    Ok(())
}

/// Appends a single frame to an already-written header. Exposed so long
/// runs can stream frames without collecting them first.
pub fn write_frame<W: Write>(header: &StreamHeader, frame: &EventFrame, mut sink: W) -> Result<()> {
    let (w, h) = (usize::from(header.width), usize::from(header.height));
    if (frame.width(), frame.height()) != (w, h) {
        return Err(Error::dims(
            "write_stream",
            (w, h),
            (frame.width(), frame.height()),
        ));
    }
    if frame.compressed() != header.compressed {
        return Err(Error::InvalidField(
            "frame compression flag differs from stream header".into(),
        ));
    }
    let records = collect_records(frame);
    sink.write_u64::<LittleEndian>(frame.timestamp_us())?;
    sink.write_u32::<LittleEndian>(records.len() as u32)?;
    for (x, y, channel, polarity) in records {
        sink.write_u16::<LittleEndian>(x)?;
        sink.write_u16::<LittleEndian>(y)?;
        sink.write_u8(channel)?;
        sink.write_i8(polarity)?;
    }
    Ok(())
}

fn collect_records(frame: &EventFrame) -> Vec<(u16, u16, u8, i8)> {
    let (w, h) = (frame.width(), frame.height());
    let mut records = Vec::new();
    let x_step = if frame.compressed() { 2 } else { 1 };
    for y in 0..h {
        for x in (0..w).step_by(x_step) {
            let v = frame.ex()[y * w + x];
            if v != 0 {
                records.push((x as u16, y as u16, CHANNEL_X, v));
            }
        }
    }
    let y_step = if frame.compressed() { 2 } else { 1 };
    for y in (0..h).step_by(y_step) {
        for x in 0..w {
            let v = frame.ey()[y * w + x];
            if v != 0 {
                records.push((x as u16, y as u16, CHANNEL_Y, v));
            }
        }
    }
    records
}

/// Parses a whole stream. Error cases are reported distinctly: wrong magic,
/// unsupported version, truncation, out-of-bounds coordinates, and malformed
/// records or headers.
pub fn read_stream<R: Read>(mut source: R) -> Result<(StreamHeader, Vec<EventFrame>)> {
    let mut magic = [0u8; 4];
    read_exact_or_truncated(&mut source, &mut magic)?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = read_u16(&mut source)?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let width = read_u16(&mut source)?;
    let height = read_u16(&mut source)?;
    let flags = read_u8(&mut source)?;
    if flags & !1 != 0 {
        return Err(Error::MalformedHeader(format!(
            "unknown flag bits 0x{flags:02x}"
        )));
    }
    let n = read_u8(&mut source)?;
    let mut thresholds = Vec::with_capacity(usize::from(n));
    for _ in 0..n {
        thresholds.push(read_f32(&mut source)?);
    }
    let header = StreamHeader::new(width, height, flags & 1 != 0, thresholds)?;

    let mut frames = Vec::new();
    while let Some(frame) = read_frame(&header, &mut source)? {
        frames.push(frame);
    }
    Ok((header, frames))
}

fn read_frame<R: Read>(header: &StreamHeader, source: &mut R) -> Result<Option<EventFrame>> {
    let mut ts_buf = [0u8; 8];
    if !read_exact_or_eof(source, &mut ts_buf)? {
        return Ok(None); // clean end of stream at a frame boundary
    }
    let timestamp_us = u64::from_le_bytes(ts_buf);
    let count = read_u32(source)?;
    let (w, h) = (usize::from(header.width), usize::from(header.height));
    let mut ex = vec![0i8; w * h];
    let mut ey = vec![0i8; w * h];
    for _ in 0..count {
        let x = read_u16(source)?;
        let y = read_u16(source)?;
        let channel = read_u8(source)?;
        let polarity = read_i8(source)?;
        if x >= header.width || y >= header.height || channel > CHANNEL_Y {
            return Err(Error::RecordOutOfBounds {
                x,
                y,
                channel,
                width: header.width,
                height: header.height,
            });
        }
        if polarity != 1 && polarity != -1 {
            return Err(Error::MalformedRecord(format!(
                "polarity {polarity} at ({x},{y})"
            )));
        }
        let (xi, yi) = (usize::from(x), usize::from(y));
        let idx = yi * w + xi;
        match channel {
            CHANNEL_X => {
                if header.compressed && xi % 2 != 0 {
                    return Err(Error::MalformedRecord(format!(
                        "X record at odd column {x} in a compressed stream"
                    )));
                }
                if ex[idx] != 0 {
                    return Err(Error::MalformedRecord(format!(
                        "duplicate X record at ({x},{y})"
                    )));
                }
                ex[idx] = polarity;
                if header.compressed {
                    ex[idx + 1] = polarity;
                }
            }
            _ => {
                if header.compressed && yi % 2 != 0 {
                    return Err(Error::MalformedRecord(format!(
                        "Y record at odd row {y} in a compressed stream"
                    )));
                }
                if ey[idx] != 0 {
                    return Err(Error::MalformedRecord(format!(
                        "duplicate Y record at ({x},{y})"
                    )));
                }
                ey[idx] = polarity;
                if header.compressed {
                    ey[idx + w] = polarity;
                }
            }
        }
    }
    Ok(Some(EventFrame::new(
        w,
        h,
        timestamp_us,
        ex,
        ey,
        header.compressed,
    )?))
}

fn read_exact_or_truncated<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<()> {
    source.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::TruncatedStream
        } else {
            Error::Io(e)
        }
    })
}

/// Like `read_exact`, but a clean EOF before the first byte returns `false`.
fn read_exact_or_eof<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<bool> {
    let mut filled = 0;
    while filled < buf.len() {
        match source.read(&mut buf[filled..]) {
            Ok(0) => {
                if filled == 0 {
                    return Ok(false);
                }
                return Err(Error::TruncatedStream);
            }
            Ok(n) => filled += n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(Error::Io(e)),
        }
    }
    Ok(true)
}

fn read_u8<R: Read>(source: &mut R) -> Result<u8> {
    source.read_u8().map_err(map_eof)
}

fn read_i8<R: Read>(source: &mut R) -> Result<i8> {
    source.read_i8().map_err(map_eof)
}

fn read_u16<R: Read>(source: &mut R) -> Result<u16> {
    source.read_u16::<LittleEndian>().map_err(map_eof)
}

fn read_u32<R: Read>(source: &mut R) -> Result<u32> {
    source.read_u32::<LittleEndian>().map_err(map_eof)
}

fn read_f32<R: Read>(source: &mut R) -> Result<f32> {
    source.read_f32::<LittleEndian>().map_err(map_eof)
}

fn map_eof(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::TruncatedStream
    } else {
        Error::Io(e)
    }
}
