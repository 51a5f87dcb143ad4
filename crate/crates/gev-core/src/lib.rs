//! Emulation of a gradient-event camera.
//!
//! A gradient event camera does not signal per-pixel brightness changes.
//! Instead every pixel watches its horizontal and vertical intensity
//! gradients, quantizes them to ternary values against a position-dependent
//! threshold matrix, and emits an event whenever a ternary gradient changes.
//! The event code is lossless: a receiver that tracks the ternary state can
//! rebuild the quantized gradients exactly and recover a grayscale frame by
//! solving the Poisson equation with successive over-relaxation.
//!
//! The crate is organized along that pipeline:
//!
//! * [`image`], [`gradient`], [`threshold`], [`ternary`] — plane types,
//!   finite differences, cyclic threshold matrices, ternary quantization and
//!   optional resolution compression.
//! * [`codec`], [`stream`] — the temporal event code and the `GEV1` binary
//!   stream format.
//! * [`laplacian`], [`sor`], [`reconstruct`] — approximate discrete
//!   Laplacian, checkerboard SOR solver, and frame/stream reconstruction.
//! * [`metrics`] — MSE, SSIM, and event-rate statistics.
//!
//! ```
//! use gev_core::*;
//!
//! let img = GrayImage::from_u8(4, 4, &[
//!     10, 10, 200, 200,
//!     10, 10, 200, 200,
//!     90, 90, 90, 90,
//!     90, 90, 90, 90,
//! ])?;
//! let theta = ThresholdMatrix::cyclic(4, 4, &thresholds_from_numerators(&[4, 8, 16])?)?;
//! let tern = ternarize(&compute_gradients(&img), &theta)?;
//!
//! // events are a lossless delta code over the ternary gradients
//! let mut encoder = CodecState::new(4, 4, false)?;
//! let event_frame = encode_frame(&mut encoder, &tern, 0)?;
//! let mut decoder = CodecState::new(4, 4, false)?;
//! assert_eq!(decode_frame(&mut decoder, &event_frame)?, tern);
//!
//! // and the quantized gradients reconstruct a grayscale estimate
//! let params = ReconstructionParams::new(1.97, 50, 3.6, img.mean())?;
//! let recon = reconstruct_frame(&tern, &theta, &params, None)?;
//! assert!(mse(&img, &recon)? < 0.05);
//! # Ok::<(), Error>(())
//! ```

pub mod codec;
mod error;
pub mod gradient;
pub mod image;
pub mod laplacian;
pub mod metrics;
pub mod reconstruct;
pub mod sor;
pub mod stream;
pub mod ternary;
pub mod threshold;

pub use codec::{decode_frame, encode_frame, enumerate_lossless_rules, CodecState, EventFrame};
pub use error::{Error, Result};
pub use gradient::{compress_resolution, compute_gradients, GradientField};
pub use image::GrayImage;
pub use laplacian::{approximate_laplacian, LaplacianField};
pub use metrics::{event_count, event_probability, mse, ssim, EventStats, MetricsReport};
pub use reconstruct::{reconstruct_frame, reconstruct_stream, StreamReconstructor};
pub use sor::{sor_solve, ReconstructionParams};
pub use stream::{read_stream, write_stream, StreamHeader};
pub use ternary::{dequantize, ternarize, TernaryField};
pub use threshold::{thresholds_from_numerators, ThresholdMatrix};
