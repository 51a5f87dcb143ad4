//! Temporal delta coding of ternary gradients into gradient events.
//!
//! An event frame holds one ternary value per pixel and channel describing
//! how the ternary gradient changed since the previous frame. The code is
//! lossless: each row of the rule table is a bijection of `{-1,0,1}`, so a
//! receiver that knows the previous ternary value recovers the current one
//! from the event alone. Unchanged gradients always map to a zero event.

use crate::error::{Error, Result};
use crate::ternary::TernaryField;

/// Event rule indexed as `RULE[prev + 1][current + 1]`.
///
/// Every row happens to be its own inverse as a permutation of `{-1,0,1}`,
/// so decoding reuses the same table.
pub const EVENT_RULE: [[i8; 3]; 3] = [
    [0, -1, 1],  // prev = -1
    [-1, 0, 1],  // prev =  0
    [-1, 1, 0],  // prev = +1
];

#[inline]
fn idx(v: i8) -> usize {
    (v + 1) as usize
}

/// One frame of gradient events with its source timestamp.
///
/// Planes are full resolution even for compressed frames; there the
/// duplicate-pair members carry equal values and only the even member is
/// serialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventFrame {
    width: usize,
    height: usize,
    timestamp_us: u64,
    ex: Vec<i8>,
    ey: Vec<i8>,
    compressed: bool,
}

impl EventFrame {
    pub fn new(
        width: usize,
        height: usize,
        timestamp_us: u64,
        ex: Vec<i8>,
        ey: Vec<i8>,
        compressed: bool,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidField(format!(
                "dimensions must be at least 2x2, got {width}x{height}"
            )));
        }
        if ex.len() != width * height || ey.len() != width * height {
            return Err(Error::InvalidField(format!(
                "expected {} samples per plane for {width}x{height}",
                width * height
            )));
        }
        if let Some(v) = ex.iter().chain(ey.iter()).find(|v| !matches!(v, -1..=1)) {
            return Err(Error::InvalidField(format!(
                "event value {v} not in {{-1,0,1}}"
            )));
        }
        if compressed {
            if !width.is_multiple_of(2) || !height.is_multiple_of(2) {
                return Err(Error::InvalidField(format!(
                    "compressed frames need even dimensions, got {width}x{height}"
                )));
            }
            for y in 0..height {
                for x in (0..width).step_by(2) {
                    if ex[y * width + x] != ex[y * width + x + 1] {
                        return Err(Error::InvalidField(format!(
                            "compressed pair mismatch in ex at ({x},{y})"
                        )));
                    }
                }
            }
            for y in (0..height).step_by(2) {
                for x in 0..width {
                    if ey[y * width + x] != ey[(y + 1) * width + x] {
                        return Err(Error::InvalidField(format!(
                            "compressed pair mismatch in ey at ({x},{y})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            width,
            height,
            timestamp_us,
            ex,
            ey,
            compressed,
        })
    }

    pub fn zeros(width: usize, height: usize, timestamp_us: u64, compressed: bool) -> Result<Self> {
        Self::new(
            width,
            height,
            timestamp_us,
            vec![0; width * height],
            vec![0; width * height],
            compressed,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn timestamp_us(&self) -> u64 {
        self.timestamp_us
    }

    pub fn ex(&self) -> &[i8] {
        &self.ex
    }

    pub fn ey(&self) -> &[i8] {
        &self.ey
    }

    pub fn compressed(&self) -> bool {
        self.compressed
    }

    pub fn is_zero(&self) -> bool {
        self.ex.iter().all(|&v| v == 0) && self.ey.iter().all(|&v| v == 0)
    }
}

/// Per-channel previous ternary gradients, all zero before the first frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecState {
    prev: TernaryField,
}

impl CodecState {
    pub fn new(width: usize, height: usize, compressed: bool) -> Result<Self> {
        Ok(Self {
            prev: TernaryField::zeros(width, height, compressed)?,
        })
    }

    pub fn prev(&self) -> &TernaryField {
        &self.prev
    }
}

fn check_state(
    context: &'static str,
    state: &CodecState,
    width: usize,
    height: usize,
    compressed: bool,
) -> Result<()> {
    if (state.prev.width(), state.prev.height()) != (width, height) {
        return Err(Error::dims(
            context,
            (state.prev.width(), state.prev.height()),
            (width, height),
        ));
    }
    if state.prev.compressed() != compressed {
        return Err(Error::InvalidField(format!(
            "{context}: compression flag mismatch between state and input"
        )));
    }
    Ok(())
}

/// Encodes the change from the state's previous ternary gradients to `tern`
/// and advances the state.
pub fn encode_frame(
    state: &mut CodecState,
    tern: &TernaryField,
    timestamp_us: u64,
) -> Result<EventFrame> {
    check_state("encode_frame", state, tern.width(), tern.height(), tern.compressed())?;
    let map = |prev: &[i8], cur: &[i8]| -> Vec<i8> {
        prev.iter()
            .zip(cur)
            .map(|(&p, &c)| EVENT_RULE[idx(p)][idx(c)])
            .collect()
    };
    let ex = map(state.prev.tx(), tern.tx());
    let ey = map(state.prev.ty(), tern.ty());
    state.prev = tern.clone();
    EventFrame::new(
        tern.width(),
        tern.height(),
        timestamp_us,
        ex,
        ey,
        tern.compressed(),
    )
}

/// Inverts the event rule against the state's previous ternary gradients and
/// advances the state. A zero event always means "unchanged".
pub fn decode_frame(state: &mut CodecState, ev: &EventFrame) -> Result<TernaryField> {
    check_state("decode_frame", state, ev.width(), ev.height(), ev.compressed())?;
    let map = |prev: &[i8], events: &[i8]| -> Vec<i8> {
        prev.iter()
            .zip(events)
            .map(|(&p, &e)| EVENT_RULE[idx(p)][idx(e)])
            .collect()
    };
    let tx = map(state.prev.tx(), ev.ex());
    let ty = map(state.prev.ty(), ev.ey());
    let tern = TernaryField::new(ev.width(), ev.height(), tx, ty, ev.compressed())?;
    state.prev = tern.clone();
    Ok(tern)
}

/// All rule tables that qualify as a lossless gradient event code: zero on
/// the diagonal (unchanged input, no event) and every row a permutation of
/// `{-1,0,1}`. With the diagonal pinned, each row has two orders for the
/// remaining `-1`/`+1` pair, giving exactly eight tables.
pub fn enumerate_lossless_rules() -> Vec<[[i8; 3]; 3]> {
    let mut rules = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let mut table = [[0i8; 3]; 3];
        for (row, pinned) in table.iter_mut().enumerate() {
            let flipped = bits & (1 << row) != 0;
            let (first, second) = if flipped { (1, -1) } else { (-1, 1) };
            let mut vals = [0i8; 3];
            let mut slots = (0..3).filter(|&c| c != row);
            vals[slots.next().unwrap()] = first;
            vals[slots.next().unwrap()] = second;
            *pinned = vals;
        }
        rules.push(table);
    }
    rules
}
