//! Browser bindings for the gradient-event pipeline.
//!
//! Three interactive operations, each taking an RGBA canvas buffer:
//! ternary-gradient visualization, single-frame reconstruction with
//! adjustable solver parameters, and event statistics for a synthetic
//! panning sequence. All numerics live in `gev-core`; this crate only
//! converts buffers at the boundary. Errors cross to JS as `JsError`, so
//! the internals use plain strings (a `JsError` cannot even be built on
//! native targets, where the unit tests run).

use wasm_bindgen::prelude::*;

use gev_core::{
    compress_resolution, compute_gradients, encode_frame, event_probability, mse,
    reconstruct_frame, ssim, ternarize, thresholds_from_numerators, write_stream, CodecState,
    GradientField, GrayImage, ReconstructionParams, StreamHeader, TernaryField, ThresholdMatrix,
};

fn gray_from_rgba(rgba: &[u8], width: u32, height: u32) -> Result<GrayImage, String> {
    let (w, h) = (width as usize, height as usize);
    if rgba.len() != w * h * 4 {
        return Err(format!(
            "expected {} RGBA bytes for {w}x{h}, got {}",
            w * h * 4,
            rgba.len()
        ));
    }
    let luma: Vec<u8> = rgba
        .chunks_exact(4)
        .map(|px| {
            let v = 0.299 * f64::from(px[0]) + 0.587 * f64::from(px[1]) + 0.114 * f64::from(px[2]);
            v.round() as u8
        })
        .collect();
    GrayImage::from_u8(w, h, &luma).map_err(|e| e.to_string())
}

fn gray_to_rgba(data: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(data.len() * 4);
    for &v in data {
        out.extend_from_slice(&[v, v, v, 255]);
    }
    out
}

/// -1 black, 0 gray, +1 white, matching the ternary dump convention.
fn ternary_to_rgba(plane: &[i8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(plane.len() * 4);
    for &v in plane {
        let b = match v {
            -1 => 0u8,
            0 => 128,
            _ => 255,
        };
        out.extend_from_slice(&[b, b, b, 255]);
    }
    out
}

fn quantized_field(
    img: &GrayImage,
    theta: &ThresholdMatrix,
    rc: bool,
) -> Result<(GradientField, TernaryField), String> {
    let grad = compute_gradients(img);
    let grad = if rc {
        compress_resolution(&grad).map_err(|e| e.to_string())?
    } else {
        grad
    };
    let tern = ternarize(&grad, theta).map_err(|e| e.to_string())?;
    Ok((grad, tern))
}

fn build_theta(img: &GrayImage, numerators: &[u8]) -> Result<ThresholdMatrix, String> {
    let thresholds = thresholds_from_numerators(numerators).map_err(|e| e.to_string())?;
    ThresholdMatrix::cyclic(img.width(), img.height(), &thresholds).map_err(|e| e.to_string())
}

#[wasm_bindgen(getter_with_clone)]
pub struct TernaryView {
    pub tx_rgba: Vec<u8>,
    pub ty_rgba: Vec<u8>,
    /// Non-zero ternary values per pixel, i.e. the event probability a
    /// zero-initialized encoder would emit for this frame.
    pub event_probability: f64,
}

fn ternary_view_impl(
    rgba: &[u8],
    width: u32,
    height: u32,
    numerators: &[u8],
    rc: bool,
) -> Result<TernaryView, String> {
    let img = gray_from_rgba(rgba, width, height)?;
    let theta = build_theta(&img, numerators)?;
    let (_, tern) = quantized_field(&img, &theta, rc)?;
    let mut state = CodecState::new(img.width(), img.height(), rc).map_err(|e| e.to_string())?;
    let ev = encode_frame(&mut state, &tern, 0).map_err(|e| e.to_string())?;
    Ok(TernaryView {
        tx_rgba: ternary_to_rgba(tern.tx()),
        ty_rgba: ternary_to_rgba(tern.ty()),
        event_probability: event_probability(&ev),
    })
}

/// Quantizes the image's gradients and renders both ternary planes.
#[wasm_bindgen]
pub fn ternary_view(
    rgba: &[u8],
    width: u32,
    height: u32,
    threshold_numerators: &[u8],
    rc: bool,
) -> Result<TernaryView, JsError> {
    ternary_view_impl(rgba, width, height, threshold_numerators, rc)
        .map_err(|m| JsError::new(&m))
}

#[wasm_bindgen(getter_with_clone)]
pub struct ReconstructView {
    pub image_rgba: Vec<u8>,
    pub mse: f64,
    pub ssim: f64,
    pub event_probability: f64,
}

#[allow(clippy::too_many_arguments)]
fn reconstruct_view_impl(
    rgba: &[u8],
    width: u32,
    height: u32,
    numerators: &[u8],
    rc: bool,
    alpha: f64,
    iterations: u32,
    scale: f64,
) -> Result<ReconstructView, String> {
    let img = gray_from_rgba(rgba, width, height)?;
    let theta = build_theta(&img, numerators)?;
    let (_, tern) = quantized_field(&img, &theta, rc)?;
    let params = ReconstructionParams::new(alpha, iterations as usize, scale, img.mean())
        .map_err(|e| e.to_string())?;
    let recon = reconstruct_frame(&tern, &theta, &params, None).map_err(|e| e.to_string())?;
    let mut state = CodecState::new(img.width(), img.height(), rc).map_err(|e| e.to_string())?;
    let ev = encode_frame(&mut state, &tern, 0).map_err(|e| e.to_string())?;
    Ok(ReconstructView {
        image_rgba: gray_to_rgba(&recon.to_u8()),
        mse: mse(&img, &recon).map_err(|e| e.to_string())?,
        ssim: ssim(&img, &recon).map_err(|e| e.to_string())?,
        event_probability: event_probability(&ev),
    })
}

/// Full single-frame pipeline: quantize, rebuild the Laplacian, solve with
/// SOR, and score the result against the input. The input image's own mean
/// stands in for the ground-truth mean bias.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn reconstruct_view(
    rgba: &[u8],
    width: u32,
    height: u32,
    threshold_numerators: &[u8],
    rc: bool,
    alpha: f64,
    iterations: u32,
    scale: f64,
) -> Result<ReconstructView, JsError> {
    reconstruct_view_impl(
        rgba,
        width,
        height,
        threshold_numerators,
        rc,
        alpha,
        iterations,
        scale,
    )
    .map_err(|m| JsError::new(&m))
}

#[wasm_bindgen(getter_with_clone)]
pub struct PanStats {
    /// Event probability per frame of the synthetic pan.
    pub probabilities: Vec<f64>,
    pub mean_probability: f64,
    /// Size of the serialized GEV1 stream for the whole sequence.
    pub stream_bytes: u32,
    /// Activity map of the last frame: black none, gray one channel fired,
    /// white both.
    pub events_rgba: Vec<u8>,
}

fn pan_stream_stats_impl(
    rgba: &[u8],
    width: u32,
    height: u32,
    numerators: &[u8],
    rc: bool,
    frames: u32,
    step: u32,
) -> Result<PanStats, String> {
    if frames == 0 {
        return Err("need at least one frame".into());
    }
    let img = gray_from_rgba(rgba, width, height)?;
    let theta = build_theta(&img, numerators)?;
    let (w, h) = (img.width(), img.height());
    let header = StreamHeader::for_encoder(&theta, rc).map_err(|e| e.to_string())?;
    let mut state = CodecState::new(w, h, rc).map_err(|e| e.to_string())?;
    let mut probabilities = Vec::with_capacity(frames as usize);
    let mut encoded = Vec::new();
    let mut last_activity = vec![0u8; w * h];
    for i in 0..frames as usize {
        let shift = (i * step as usize) % w;
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                data.push(img.get((x + shift) % w, y));
            }
        }
        let frame = GrayImage::new(w, h, data).map_err(|e| e.to_string())?;
        let (_, tern) = quantized_field(&frame, &theta, rc)?;
        let ev = encode_frame(&mut state, &tern, (i as u64) * 33_333).map_err(|e| e.to_string())?;
        probabilities.push(event_probability(&ev));
        if i + 1 == frames as usize {
            for (slot, (&ex, &ey)) in last_activity.iter_mut().zip(ev.ex().iter().zip(ev.ey())) {
                *slot = match (ex != 0, ey != 0) {
                    (false, false) => 0,
                    (true, true) => 255,
                    _ => 128,
                };
            }
        }
        encoded.push(ev);
    }
    let mut stream = Vec::new();
    write_stream(&header, &encoded, &mut stream).map_err(|e| e.to_string())?;
    let mean_probability = probabilities.iter().sum::<f64>() / probabilities.len() as f64;
    Ok(PanStats {
        probabilities,
        mean_probability,
        stream_bytes: stream.len() as u32,
        events_rgba: gray_to_rgba(&last_activity),
    })
}

/// Slides the image horizontally (wrapping around) by `step` pixels per
/// frame, encodes the resulting sequence, and reports the event rates and
/// the stream size.
#[wasm_bindgen]
pub fn pan_stream_stats(
    rgba: &[u8],
    width: u32,
    height: u32,
    threshold_numerators: &[u8],
    rc: bool,
    frames: u32,
    step: u32,
) -> Result<PanStats, JsError> {
    pan_stream_stats_impl(rgba, width, height, threshold_numerators, rc, frames, step)
        .map_err(|m| JsError::new(&m))
}
