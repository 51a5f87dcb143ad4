//! Frame ingestion: a directory of 8-bit raster images becomes an ordered,
//! timestamped grayscale sequence.

use std::fs;
use std::path::{Path, PathBuf};

use gev_core::GrayImage;

use crate::error::{CliError, CliResult};

/// Default frame spacing when no sidecar timestamps exist (about 30 fps).
pub const DEFAULT_FRAME_INTERVAL_US: u64 = 33_333;

const EXTENSIONS: &[&str] = &["png", "pgm", "pnm", "ppm", "bmp", "tif", "tiff"];

/// Lists the frame files of a directory in lexicographic filename order.
pub fn list_frame_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| CliError::io(format!("cannot read directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            path.is_file()
                && path
                    .extension()
                    .and_then(|ext| ext.to_str())
                    .map(|ext| EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str()))
                    .unwrap_or(false)
        })
        .collect();
    files.sort_by_key(|p| p.file_name().map(|n| n.to_os_string()));
    if files.is_empty() {
        return Err(CliError::validation(format!(
            "no frames found in {} (looked for {})",
            dir.display(),
            EXTENSIONS.join(", ")
        )));
    }
    Ok(files)
}

/// Loads one frame as normalized grayscale. Color inputs are converted to
/// 8-bit luma first.
pub fn load_frame(path: &Path) -> CliResult<GrayImage> {
    let img = image::open(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?
        .into_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    GrayImage::from_u8(w, h, img.as_raw()).map_err(|e| {
        CliError::validation(format!("{}: {e}", path.display()))
    })
}

/// Loads all frames of a directory, enforcing consistent dimensions, and
/// attaches timestamps: one microsecond value per line from the sidecar
/// file, or multiples of [`DEFAULT_FRAME_INTERVAL_US`] without one.
pub fn ingest_frames(dir: &Path, timestamps: Option<&Path>) -> CliResult<Vec<(u64, GrayImage)>> {
    let files = list_frame_files(dir)?;
    let ts = match timestamps {
        Some(path) => {
            let ts = read_timestamps(path)?;
            if ts.len() != files.len() {
                return Err(CliError::validation(format!(
                    "{} timestamps in {} but {} frames in {}",
                    ts.len(),
                    path.display(),
                    files.len(),
                    dir.display()
                )));
            }
            ts
        }
        None => (0..files.len() as u64)
            .map(|i| i * DEFAULT_FRAME_INTERVAL_US)
            .collect(),
    };

    let mut frames = Vec::with_capacity(files.len());
    let mut dims: Option<(usize, usize)> = None;
    for (path, t) in files.iter().zip(ts) {
        let img = load_frame(path)?;
        match dims {
            None => dims = Some((img.width(), img.height())),
            Some((w, h)) if (img.width(), img.height()) != (w, h) => {
                return Err(CliError::validation(format!(
                    "{} is {}x{} but earlier frames are {w}x{h}",
                    path.display(),
                    img.width(),
                    img.height()
                )));
            }
            _ => {}
        }
        frames.push((t, img));
    }
    Ok(frames)
}

fn read_timestamps(path: &Path) -> CliResult<Vec<u64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| {
            line.trim().parse::<u64>().map_err(|_| {
                CliError::validation(format!(
                    "{}: bad timestamp line {line:?} (expected integer microseconds)",
                    path.display()
                ))
            })
        })
        .collect()
}
