//! The five pipeline subcommands. Each one is a thin composition of the
//! library operations; nothing here transforms data beyond file I/O.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use gev_core::{
    compress_resolution, compute_gradients, decode_frame, encode_frame, event_count,
    event_probability, mse, read_stream, ssim, ternarize, write_stream, CodecState, EventFrame,
    EventStats, MetricsReport, ReconstructionParams, StreamHeader, StreamReconstructor,
    ThresholdMatrix,
};
use gev_core::metrics::FrameScore;
use gev_core::stream::write_frame;
use gev_core::thresholds_from_numerators;

use crate::error::{CliError, CliResult};
use crate::ingest::ingest_frames;
use crate::MeanBiasArg;

pub struct EncodeOpts {
    pub input: PathBuf,
    pub output: PathBuf,
    pub thresholds: Vec<u8>,
    pub rc: bool,
    pub timestamps: Option<PathBuf>,
}

pub fn cmd_encode(opts: &EncodeOpts) -> CliResult<()> {
    let frames = ingest_frames(&opts.input, opts.timestamps.as_deref())?;
    let thresholds = thresholds_from_numerators(&opts.thresholds)?;
    let (w, h) = {
        let first = &frames[0].1;
        (first.width(), first.height())
    };
    let theta = ThresholdMatrix::cyclic(w, h, &thresholds)?;
    let header = StreamHeader::for_encoder(&theta, opts.rc)?;
    let mut state = CodecState::new(w, h, opts.rc)?;

    let file = File::create(&opts.output)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", opts.output.display())))?;
    let mut sink = BufWriter::new(file);
    write_stream(&header, &[], &mut sink)?;
    for (timestamp, img) in &frames {
        let grad = compute_gradients(img);
        let grad = if opts.rc {
            compress_resolution(&grad)?
        } else {
            grad
        };
        let tern = ternarize(&grad, &theta)?;
        let ev = encode_frame(&mut state, &tern, *timestamp)?;
        write_frame(&header, &ev, &mut sink)?;
    }
    sink.flush()?;
    Ok(())
}

pub struct DecodeOpts {
    pub input: PathBuf,
    pub output: PathBuf,
}

pub fn cmd_decode(opts: &DecodeOpts) -> CliResult<()> {
    let (header, frames) = open_stream(&opts.input)?;
    fs::create_dir_all(&opts.output)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", opts.output.display())))?;
    let (w, h) = (usize::from(header.width), usize::from(header.height));
    let mut state = CodecState::new(w, h, header.compressed)?;
    for (i, ev) in frames.iter().enumerate() {
        let tern = decode_frame(&mut state, ev)?;
        save_gray_png(
            &opts.output.join(format!("frame_{i:06}_tx.png")),
            w,
            h,
            ternary_to_bytes(tern.tx()),
        )?;
        save_gray_png(
            &opts.output.join(format!("frame_{i:06}_ty.png")),
            w,
            h,
            ternary_to_bytes(tern.ty()),
        )?;
    }
    Ok(())
}

/// -1, 0, +1 rendered as black, gray, white.
fn ternary_to_bytes(plane: &[i8]) -> Vec<u8> {
    plane
        .iter()
        .map(|v| match v {
            -1 => 0u8,
            0 => 128,
            _ => 255,
        })
        .collect()
}

pub struct ReconstructOpts {
    pub input: PathBuf,
    pub output: PathBuf,
    pub alpha: f64,
    pub iters: usize,
    pub scale: f64,
    pub mean_bias: MeanBiasArg,
    pub gt: Option<PathBuf>,
    pub warm_start: bool,
}

pub fn cmd_reconstruct(opts: &ReconstructOpts) -> CliResult<()> {
    let (header, frames) = open_stream(&opts.input)?;
    let theta = header.threshold_matrix()?;

    let gt_means: Option<Vec<f64>> = match (&opts.mean_bias, &opts.gt) {
        (MeanBiasArg::GroundTruth, Some(dir)) => {
            let gt = ingest_frames(dir, None)?;
            if gt.len() != frames.len() {
                return Err(CliError::validation(format!(
                    "{} ground-truth frames but {} stream frames",
                    gt.len(),
                    frames.len()
                )));
            }
            Some(gt.iter().map(|(_, img)| img.mean()).collect())
        }
        (MeanBiasArg::GroundTruth, None) => {
            return Err(CliError::validation(
                "--mean-bias gt needs --gt <DIR> with the ground-truth frames",
            ));
        }
        (MeanBiasArg::Fixed(_), _) => None,
    };
    let base_bias = match opts.mean_bias {
        MeanBiasArg::Fixed(v) => v,
        MeanBiasArg::GroundTruth => 0.5, // overridden per frame below
    };
    let params = ReconstructionParams::new(opts.alpha, opts.iters, opts.scale, base_bias)?;
    let mut rec = StreamReconstructor::new(&header, &theta, &params, opts.warm_start)?;

    fs::create_dir_all(&opts.output)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", opts.output.display())))?;
    for (i, ev) in frames.iter().enumerate() {
        let bias = gt_means.as_ref().map(|m| m[i]);
        let img = rec.next_frame(ev, bias)?;
        save_gray_png(
            &opts.output.join(format!("frame_{i:06}.png")),
            img.width(),
            img.height(),
            img.to_u8(),
        )?;
    }
    Ok(())
}

pub struct EvalOpts {
    pub input: PathBuf,
    pub gt: PathBuf,
    pub stream: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

pub fn cmd_eval(opts: &EvalOpts) -> CliResult<()> {
    let recon = ingest_frames(&opts.input, None)?;
    let truth = ingest_frames(&opts.gt, None)?;
    if recon.len() != truth.len() {
        return Err(CliError::validation(format!(
            "{} reconstructed frames but {} ground-truth frames",
            recon.len(),
            truth.len()
        )));
    }
    let probabilities: Option<Vec<f64>> = match &opts.stream {
        Some(path) => {
            let (_, frames) = open_stream(path)?;
            if frames.len() != recon.len() {
                return Err(CliError::validation(format!(
                    "{} stream frames but {} reconstructed frames",
                    frames.len(),
                    recon.len()
                )));
            }
            Some(frames.iter().map(event_probability).collect())
        }
        None => None,
    };

    let mut report = MetricsReport::default();
    for (i, ((_, r), (_, t))) in recon.iter().zip(&truth).enumerate() {
        report.push(FrameScore {
            frame: i,
            mse: mse(t, r)?,
            ssim: ssim(t, r)?,
            event_probability: probabilities.as_ref().map(|p| p[i]),
        });
    }
    match &opts.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            report.write_jsonl(BufWriter::new(file))?;
        }
        None => report.write_jsonl(std::io::stdout().lock())?,
    }
    Ok(())
}

pub struct StatsOpts {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub bins: usize,
}

pub fn cmd_stats(opts: &StatsOpts) -> CliResult<()> {
    let (header, frames) = open_stream(&opts.input)?;
    match &opts.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            write_stats(&header, &frames, opts.bins, BufWriter::new(file))
        }
        None => write_stats(&header, &frames, opts.bins, std::io::stdout().lock()),
    }
}

fn write_stats<W: Write>(
    header: &StreamHeader,
    frames: &[EventFrame],
    bins: usize,
    mut sink: W,
) -> CliResult<()> {
    let stats = EventStats::from_frames(frames);
    for (i, ev) in frames.iter().enumerate() {
        let line = serde_json::json!({
            "frame": i,
            "timestamp_us": ev.timestamp_us(),
            "events": event_count(ev),
            "probability": stats.probabilities()[i],
        });
        serde_json::to_writer(&mut sink, &line)?;
        writeln!(sink)?;
    }
    // two event channels per pixel, unless compression dedups them
    let max_probability = if header.compressed { 1.0 } else { 2.0 };
    let summary = serde_json::json!({
        "summary": {
            "frames": stats.frame_count(),
            "compressed": header.compressed,
            "mean_probability": stats.mean_probability(),
            "histogram": {
                "bins": bins,
                "max": max_probability,
                "counts": stats.histogram(bins, max_probability),
            }
        }
    });
    serde_json::to_writer(&mut sink, &summary)?;
    writeln!(sink)?;
    Ok(())
}

fn open_stream(path: &Path) -> CliResult<(StreamHeader, Vec<EventFrame>)> {
    let file = File::open(path)
        .map_err(|e| CliError::io(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_stream(BufReader::new(file))?)
}

fn save_gray_png(path: &Path, width: usize, height: usize, bytes: Vec<u8>) -> CliResult<()> {
    let buf: image::ImageBuffer<image::Luma<u8>, Vec<u8>> =
        image::ImageBuffer::from_raw(width as u32, height as u32, bytes)
            .expect("buffer sized to dimensions");
    buf.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}
