//! Behavior of frame and stream reconstruction.

use gev_core::{
    compute_gradients, encode_frame, event_probability, mse, reconstruct::reconstruct_plane,
    reconstruct_frame, reconstruct_stream, ternarize, CodecState, EventFrame, GrayImage,
    ReconstructionParams, StreamHeader, TernaryField, ThresholdMatrix,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..width * height).map(|_| rng.random::<f64>()).collect();
    GrayImage::new(width, height, data).unwrap()
}

fn default_thresholds() -> Vec<f64> {
    vec![4.0 / 255.0, 8.0 / 255.0, 16.0 / 255.0]
}

/// Before clamping, the reconstructed plane's mean equals the configured
/// mean bias.
#[test]
fn reconstructed_plane_mean_equals_mean_bias() {
    let img = random_image(20, 16, 42);
    let theta = ThresholdMatrix::cyclic(20, 16, &default_thresholds()).unwrap();
    let tern = ternarize(&compute_gradients(&img), &theta).unwrap();
    for bias in [0.0, 0.31, 1.0] {
        let params = ReconstructionParams::new(1.97, 25, 3.6, bias).unwrap();
        let plane = reconstruct_plane(&tern, &theta, &params, None).unwrap();
        let mean = plane.iter().sum::<f64>() / plane.len() as f64;
        assert!((mean - bias).abs() < 1e-9, "bias {bias}: mean {mean}");
    }
}

/// Reconstruction is a pure function: identical inputs give bit-identical
/// outputs, cold or warm started.
#[test]
fn reconstruction_is_deterministic() {
    let img = random_image(18, 14, 43);
    let theta = ThresholdMatrix::cyclic(18, 14, &default_thresholds()).unwrap();
    let tern = ternarize(&compute_gradients(&img), &theta).unwrap();
    let params = ReconstructionParams::new(1.97, 30, 3.6, img.mean()).unwrap();
    let cold_a = reconstruct_frame(&tern, &theta, &params, None).unwrap();
    let cold_b = reconstruct_frame(&tern, &theta, &params, None).unwrap();
    assert_eq!(cold_a, cold_b);
    let warm_a = reconstruct_frame(&tern, &theta, &params, Some(&cold_a)).unwrap();
    let warm_b = reconstruct_frame(&tern, &theta, &params, Some(&cold_b)).unwrap();
    assert_eq!(warm_a, warm_b);
}

fn encode_sequence(
    fields: &[TernaryField],
    theta: &ThresholdMatrix,
) -> (StreamHeader, Vec<EventFrame>) {
    let (w, h) = (theta.width(), theta.height());
    let header = StreamHeader::for_encoder(theta, fields.first().is_some_and(|f| f.compressed()))
        .unwrap();
    let mut state = CodecState::new(w, h, header.compressed).unwrap();
    let frames = fields
        .iter()
        .enumerate()
        .map(|(i, f)| encode_frame(&mut state, f, i as u64 * 33_333).unwrap())
        .collect();
    (header, frames)
}

#[test]
fn stream_of_zero_frames_reconstructs_to_constant_bias() {
    let (w, h) = (12, 10);
    let theta = ThresholdMatrix::cyclic(w, h, &default_thresholds()).unwrap();
    let zeros = vec![TernaryField::zeros(w, h, false).unwrap(); 3];
    let (header, frames) = encode_sequence(&zeros, &theta);
    assert!(frames.iter().all(|f| f.is_zero()));
    let params = ReconstructionParams::new(1.97, 15, 3.6, 0.6).unwrap();
    let out = reconstruct_stream(&header, &frames, &theta, &params, false).unwrap();
    for img in out {
        assert!(img.data().iter().all(|&v| (v - 0.6).abs() < 1e-12));
    }
}

#[test]
fn single_frame_stream_equals_direct_reconstruction() {
    let img = random_image(16, 12, 44);
    let theta = ThresholdMatrix::cyclic(16, 12, &default_thresholds()).unwrap();
    let tern = ternarize(&compute_gradients(&img), &theta).unwrap();
    let (header, frames) = encode_sequence(std::slice::from_ref(&tern), &theta);
    let params = ReconstructionParams::new(1.97, 40, 3.6, img.mean()).unwrap();
    let from_stream = reconstruct_stream(&header, &frames, &theta, &params, false).unwrap();
    let direct = reconstruct_frame(&tern, &theta, &params, None).unwrap();
    assert_eq!(from_stream.len(), 1);
    assert_eq!(from_stream[0], direct);
}

/// A second frame carrying zero events leaves the decoder state unchanged,
/// so cold-started reconstructions of both frames are identical.
#[test]
fn zero_event_frame_reproduces_previous_output() {
    let img = random_image(16, 12, 45);
    let theta = ThresholdMatrix::cyclic(16, 12, &default_thresholds()).unwrap();
    let tern = ternarize(&compute_gradients(&img), &theta).unwrap();
    let (header, frames) = encode_sequence(&[tern.clone(), tern], &theta);
    assert_eq!(event_probability(&frames[1]), 0.0);
    let params = ReconstructionParams::new(1.97, 30, 3.6, img.mean()).unwrap();
    let out = reconstruct_stream(&header, &frames, &theta, &params, false).unwrap();
    assert_eq!(out[0], out[1]);
}

/// Reconstruction quality improves with more of the gradient information:
/// sanity-check that the pipeline actually reconstructs content, not just
/// the mean, on a structured image.
#[test]
fn reconstruction_beats_flat_baseline_on_structured_content() {
    use std::f64::consts::TAU;
    let (w, h) = (48, 36);
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let v = 0.5
                + 0.3 * (TAU * x as f64 / 16.0).sin()
                + 0.15 * (TAU * y as f64 / 12.0).cos();
            data.push(v.clamp(0.0, 1.0));
        }
    }
    let img = GrayImage::new(w, h, data).unwrap();
    let theta = ThresholdMatrix::cyclic(w, h, &default_thresholds()).unwrap();
    let tern = ternarize(&compute_gradients(&img), &theta).unwrap();
    let params = ReconstructionParams::new(1.97, 100, 3.6, img.mean()).unwrap();
    let recon = reconstruct_frame(&tern, &theta, &params, None).unwrap();
    let flat = GrayImage::constant(w, h, img.mean()).unwrap();
    let err_recon = mse(&img, &recon).unwrap();
    let err_flat = mse(&img, &flat).unwrap();
    assert!(
        err_recon < err_flat / 4.0,
        "reconstruction {err_recon} vs flat baseline {err_flat}"
    );
}
