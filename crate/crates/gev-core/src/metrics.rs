//! Reconstruction quality metrics and event-rate statistics.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::codec::EventFrame;
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Mean squared error between two images of equal size.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims("mse", a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = 0.01 * 0.01;
const SSIM_C2: f64 = 0.03 * 0.03;

/// Mean structural similarity with the standard configuration: an 11x11
/// Gaussian window (sigma 1.5) slid over every fully-interior position, and
/// stabilizers `C1 = (0.01)^2`, `C2 = (0.03)^2` for the `[0,1]` data range.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims("ssim", a, b)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::InvalidImage(format!(
            "ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {w}x{h}"
        )));
    }
    let kernel = gaussian_kernel();
    let product = |p: &[f64], q: &[f64]| -> Vec<f64> {
        p.iter().zip(q).map(|(x, y)| x * y).collect()
    };
    let mu_a = filter_valid(a.data(), w, h, &kernel);
    let mu_b = filter_valid(b.data(), w, h, &kernel);
    let m_aa = filter_valid(&product(a.data(), a.data()), w, h, &kernel);
    let m_bb = filter_valid(&product(b.data(), b.data()), w, h, &kernel);
    let m_ab = filter_valid(&product(a.data(), b.data()), w, h, &kernel);

    let mut total = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = m_aa[i] - ma * ma;
        let var_b = m_bb[i] - mb * mb;
        let cov = m_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2))
            / ((ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2));
    }
    Ok(total / mu_a.len() as f64)
}

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut kernel = [0.0; SSIM_WINDOW];
    let center = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, v) in kernel.iter_mut().enumerate() {
        let d = i as f64 - center;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *v;
    }
    for v in &mut kernel {
        *v /= sum;
    }
    kernel
}

/// Separable valid-mode filtering: the output covers only positions where
/// the whole window fits, shrinking each axis by `SSIM_WINDOW - 1`.
fn filter_valid(src: &[f64], w: usize, h: usize, kernel: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let margin = SSIM_WINDOW - 1;
    let (ow, oh) = (w - margin, h - margin);
    let mut tmp = vec![0.0; ow * h];
    for y in 0..h {
        for x in 0..ow {
            let mut acc = 0.0;
            for (j, &k) in kernel.iter().enumerate() {
                acc += k * src[y * w + x + j];
            }
            tmp[y * ow + x] = acc;
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (j, &k) in kernel.iter().enumerate() {
                acc += k * tmp[(y + j) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    out
}

fn check_dims(context: &'static str, a: &GrayImage, b: &GrayImage) -> Result<()> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::dims(
            context,
            (a.width(), a.height()),
            (b.width(), b.height()),
        ));
    }
    Ok(())
}

/// Number of independent non-zero events in a frame. Compressed frames
/// count each duplicate pair once (the serialized even member), so the
/// count never exceeds `width * height`.
pub fn event_count(ev: &EventFrame) -> usize {
    let (w, h) = (ev.width(), ev.height());
    if ev.compressed() {
        let mut count = 0;
        for y in 0..h {
            for x in (0..w).step_by(2) {
                count += usize::from(ev.ex()[y * w + x] != 0);
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                count += usize::from(ev.ey()[y * w + x] != 0);
            }
        }
        count
    } else {
        ev.ex().iter().filter(|&&v| v != 0).count() + ev.ey().iter().filter(|&&v| v != 0).count()
    }
}

/// Event count normalized by the pixel count. At most 2 for uncompressed
/// two-channel frames and at most 1 for compressed ones.
pub fn event_probability(ev: &EventFrame) -> f64 {
    event_count(ev) as f64 / (ev.width() * ev.height()) as f64
}

/// Per-frame event probabilities with aggregate views.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventStats {
    probabilities: Vec<f64>,
}

impl EventStats {
    pub fn from_frames(frames: &[EventFrame]) -> Self {
        Self {
            probabilities: frames.iter().map(event_probability).collect(),
        }
    }

    pub fn push(&mut self, probability: f64) {
        self.probabilities.push(probability);
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn frame_count(&self) -> usize {
        self.probabilities.len()
    }

    pub fn mean_probability(&self) -> f64 {
        if self.probabilities.is_empty() {
            return 0.0;
        }
        self.probabilities.iter().sum::<f64>() / self.probabilities.len() as f64
    }

    /// Histogram of the per-frame probabilities over `[0, max)` with equal
    /// bins; values at or above `max` land in the last bin.
    pub fn histogram(&self, bins: usize, max: f64) -> Vec<usize> {
        let mut counts = vec![0; bins];
        if bins == 0 || max.is_nan() || max <= 0.0 {
            return counts;
        }
        for &p in &self.probabilities {
            let bin = ((p / max * bins as f64) as usize).min(bins - 1);
            counts[bin] += 1;
        }
        counts
    }
}

/// Per-frame quality scores; the event probability column is present when
/// the scoring run had a stream to count events from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameScore {
    pub frame: usize,
    pub mse: f64,
    pub ssim: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_probability: Option<f64>,
}

/// Frame-by-frame reconstruction scores plus aggregate means.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    scores: Vec<FrameScore>,
}

impl MetricsReport {
    pub fn push(&mut self, score: FrameScore) {
        self.scores.push(score);
    }

    pub fn scores(&self) -> &[FrameScore] {
        &self.scores
    }

    pub fn frame_count(&self) -> usize {
        self.scores.len()
    }

    pub fn mean_mse(&self) -> f64 {
        mean(self.scores.iter().map(|s| s.mse))
    }

    pub fn mean_ssim(&self) -> f64 {
        mean(self.scores.iter().map(|s| s.ssim))
    }

    /// One JSON record per line, one frame per record, then a final summary
    /// line with the aggregate means.
    pub fn write_jsonl<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        for score in &self.scores {
            serde_json::to_writer(&mut sink, score)?;
            writeln!(sink)?;
        }
        let summary = serde_json::json!({
            "summary": {
                "frames": self.frame_count(),
                "mean_mse": self.mean_mse(),
                "mean_ssim": self.mean_ssim(),
            }
        });
        serde_json::to_writer(&mut sink, &summary)?;
        writeln!(sink)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for v in values {
        sum += v;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// A timestamped sparse event from a conventional brightness event camera,
/// used only for offline counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseEvent {
    pub timestamp_us: u64,
    pub x: u16,
    pub y: u16,
}

/// Probability that a pixel saw at least one brightness event between
/// consecutive frame timestamps. Window `i` covers `(t[i], t[i+1]]` and each
/// pixel position counts at most once per window; counts are normalized by
/// the pixel count. Returns one probability per consecutive timestamp pair.
pub fn brightness_event_probability(
    events: &[SparseEvent],
    frame_timestamps: &[u64],
    width: usize,
    height: usize,
) -> Result<Vec<f64>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidField("empty sensor geometry".into()));
    }
    for e in events {
        if usize::from(e.x) >= width || usize::from(e.y) >= height {
            return Err(Error::RecordOutOfBounds {
                x: e.x,
                y: e.y,
                channel: 0,
                width: width as u16,
                height: height as u16,
            });
        }
    }
    let mut out = Vec::new();
    for window in frame_timestamps.windows(2) {
        let (t0, t1) = (window[0], window[1]);
        let mut seen = vec![false; width * height];
        let mut count = 0usize;
        for e in events {
            if e.timestamp_us > t0 && e.timestamp_us <= t1 {
                let idx = usize::from(e.y) * width + usize::from(e.x);
                if !seen[idx] {
                    seen[idx] = true;
                    count += 1;
                }
            }
        }
        out.push(count as f64 / (width * height) as f64);
    }
    Ok(out)
}
