//! Grayscale reconstruction from ternary gradients and event streams.

use crate::codec::{decode_frame, CodecState, EventFrame};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::laplacian::approximate_laplacian;
use crate::sor::{sor_solve, ReconstructionParams};
use crate::stream::StreamHeader;
use crate::ternary::{dequantize, TernaryField};
use crate::threshold::ThresholdMatrix;

/// Reconstructs the unclamped intensity plane for one ternary field:
/// dequantize, build the approximate Laplacian, scale it by `params.scale`,
/// solve with SOR, then shift the result so its mean equals
/// `params.mean_bias`.
pub fn reconstruct_plane(
    tern: &TernaryField,
    theta: &ThresholdMatrix,
    params: &ReconstructionParams,
    initial: Option<&GrayImage>,
) -> Result<Vec<f64>> {
    let grad = dequantize(tern, theta)?;
    let lap = approximate_laplacian(&grad).scaled(params.scale());
    let mut plane = sor_solve(&lap, params, initial)?;
    let mean = plane.iter().sum::<f64>() / plane.len() as f64;
    let shift = params.mean_bias() - mean;
    for v in &mut plane {
        *v += shift;
    }
    Ok(plane)
}

/// [`reconstruct_plane`] clamped to `[0,1]` and wrapped as a [`GrayImage`].
pub fn reconstruct_frame(
    tern: &TernaryField,
    theta: &ThresholdMatrix,
    params: &ReconstructionParams,
    initial: Option<&GrayImage>,
) -> Result<GrayImage> {
    let mut plane = reconstruct_plane(tern, theta, params, initial)?;
    for v in &mut plane {
        *v = v.clamp(0.0, 1.0);
    }
    GrayImage::new(tern.width(), tern.height(), plane)
}

/// Stateful decoder-reconstructor for an event stream.
///
/// Keeps the codec state across frames and reconstructs each one from the
/// latest ternary gradients only — no event windows, no temporal mixing.
/// With `warm_start` the SOR iteration begins from the previous output
/// instead of zeros.
pub struct StreamReconstructor {
    state: CodecState,
    theta: ThresholdMatrix,
    params: ReconstructionParams,
    warm_start: bool,
    prev_output: Option<GrayImage>,
}

impl StreamReconstructor {
    pub fn new(
        header: &StreamHeader,
        theta: &ThresholdMatrix,
        params: &ReconstructionParams,
        warm_start: bool,
    ) -> Result<Self> {
        if !header.matches_thresholds(theta) {
            return Err(Error::ThresholdMismatch);
        }
        Ok(Self {
            state: CodecState::new(
                usize::from(header.width),
                usize::from(header.height),
                header.compressed,
            )?,
            theta: theta.clone(),
            params: params.clone(),
            warm_start,
            prev_output: None,
        })
    }

    /// Decodes one event frame and reconstructs the current state. The
    /// optional override replaces the configured mean bias for this frame
    /// (e.g. with a per-frame ground-truth mean).
    pub fn next_frame(
        &mut self,
        ev: &EventFrame,
        mean_bias_override: Option<f64>,
    ) -> Result<GrayImage> {
        let tern = decode_frame(&mut self.state, ev)?;
        let params = match mean_bias_override {
            Some(bias) => self.params.with_mean_bias(bias)?,
            None => self.params.clone(),
        };
        let initial = if self.warm_start {
            self.prev_output.as_ref()
        } else {
            None
        };
        let img = reconstruct_frame(&tern, &self.theta, &params, initial)?;
        self.prev_output = Some(img.clone());
        Ok(img)
    }

    /// The decoder's current ternary gradients.
    pub fn current_ternary(&self) -> &TernaryField {
        self.state.prev()
    }
}

/// Reconstructs every frame of a decoded stream with a fixed mean bias.
pub fn reconstruct_stream(
    header: &StreamHeader,
    frames: &[EventFrame],
    theta: &ThresholdMatrix,
    params: &ReconstructionParams,
    warm_start: bool,
) -> Result<Vec<GrayImage>> {
    let mut rec = StreamReconstructor::new(header, theta, params, warm_start)?;
    frames.iter().map(|ev| rec.next_frame(ev, None)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_ternary_gives_constant_mean_bias_image() {
        let theta = ThresholdMatrix::cyclic(6, 4, &[0.05]).unwrap();
        let tern = TernaryField::zeros(6, 4, false).unwrap();
        let params = ReconstructionParams::new(1.97, 10, 3.6, 0.42).unwrap();
        let img = reconstruct_frame(&tern, &theta, &params, None).unwrap();
        assert!(img.data().iter().all(|&v| (v - 0.42).abs() < 1e-15));
    }

    #[test]
    fn threshold_mismatch_is_rejected() {
        let header = StreamHeader::new(4, 4, false, vec![0.05f32]).unwrap();
        let other = ThresholdMatrix::cyclic(4, 4, &[0.06]).unwrap();
        let params = ReconstructionParams::default();
        assert!(matches!(
            StreamReconstructor::new(&header, &other, &params, false),
            Err(Error::ThresholdMismatch)
        ));
        let wrong_dims = ThresholdMatrix::cyclic(6, 4, &[0.05]).unwrap();
        assert!(StreamReconstructor::new(&header, &wrong_dims, &params, false).is_err());
    }
}
