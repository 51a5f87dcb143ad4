//! Position-dependent quantization thresholds.

use crate::error::{Error, Result};

/// Per-pixel quantization thresholds cycling through a small threshold set.
///
/// The default constructor assigns `plane(x,y) = t_i` with `i = (x+y) mod n`,
/// which tiles the set along anti-diagonals so neighboring pixels sample
/// different gradient magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMatrix {
    width: usize,
    height: usize,
    thresholds: Vec<f64>,
    plane: Vec<f64>,
}

impl ThresholdMatrix {
    /// Builds the cyclic `(x+y) mod n` matrix from an ordered threshold set.
    pub fn cyclic(width: usize, height: usize, thresholds: &[f64]) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidThresholds(format!(
                "dimensions must be at least 2x2, got {width}x{height}"
            )));
        }
        validate_thresholds(thresholds)?;
        let n = thresholds.len();
        let mut plane = vec![0.0; width * height];
        for y in 0..height {
            for x in 0..width {
                plane[y * width + x] = thresholds[(x + y) % n];
            }
        }
        Ok(Self {
            width,
            height,
            thresholds: thresholds.to_vec(),
            plane,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// The ordered threshold set `t_0..t_{n-1}`.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.plane[y * self.width + x]
    }

    pub fn plane(&self) -> &[f64] {
        &self.plane
    }
}

fn validate_thresholds(thresholds: &[f64]) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::InvalidThresholds("threshold set is empty".into()));
    }
    if thresholds.len() > 255 {
        return Err(Error::InvalidThresholds(format!(
            "at most 255 thresholds fit a stream header, got {}",
            thresholds.len()
        )));
    }
    if let Some(t) = thresholds.iter().find(|t| !t.is_finite() || **t <= 0.0) {
        return Err(Error::InvalidThresholds(format!(
            "thresholds must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// Converts 8-bit threshold numerators (e.g. `[4, 8, 16]`) to normalized
/// values `k/255`, the exact `f64` quotients.
///
/// Exactness matters: gradients of 8-bit frames are themselves multiples of
/// `1/255`, and the quantizer fires on equality with the threshold. A
/// threshold of `4/255` must therefore compare equal against a gradient of
/// four gray levels, which any rounding up would silently break.
pub fn thresholds_from_numerators(numerators: &[u8]) -> Result<Vec<f64>> {
    if numerators.is_empty() {
        return Err(Error::InvalidThresholds("threshold set is empty".into()));
    }
    if let Some(k) = numerators.iter().find(|&&k| k == 0) {
        return Err(Error::InvalidThresholds(format!(
            "threshold numerator {k} is not positive"
        )));
    }
    Ok(numerators.iter().map(|&k| f64::from(k) / 255.0).collect())
}
