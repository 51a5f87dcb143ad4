//! `gev` — emulate a gradient event camera and reconstruct video from its
//! streams.

mod commands;
mod error;
mod ingest;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use commands::{
    cmd_decode, cmd_encode, cmd_eval, cmd_reconstruct, cmd_stats, DecodeOpts, EncodeOpts,
    EvalOpts, ReconstructOpts, StatsOpts,
};
use error::CliResult;

/// Where the reconstruction's mean intensity comes from: the per-frame
/// ground-truth mean, or a fixed value standing in for a global
/// illumination sensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanBiasArg {
    GroundTruth,
    Fixed(f64),
}

impl FromStr for MeanBiasArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("gt") {
            return Ok(MeanBiasArg::GroundTruth);
        }
        match s.parse::<f64>() {
            Ok(v) if (0.0..=1.0).contains(&v) => Ok(MeanBiasArg::Fixed(v)),
            Ok(v) => Err(format!("mean bias {v} outside [0,1]")),
            Err(_) => Err(format!("expected 'gt' or a number in [0,1], got {s:?}")),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gev",
    version,
    about = "Gradient-event video: turn grayscale frames into lossless ternary \
             gradient-event streams and reconstruct them by solving the Poisson equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a directory of grayscale frames into a GEV1 event stream
    Encode {
        /// Directory of 8-bit grayscale frames (lexicographic order)
        #[arg(long)]
        input: PathBuf,
        /// Output stream file
        #[arg(long)]
        output: PathBuf,
        /// Quantization thresholds as 8-bit numerators k, meaning k/255
        #[arg(long, value_delimiter = ',', default_values_t = vec![4u8, 8, 16])]
        thresholds: Vec<u8>,
        /// Apply resolution compression before quantization
        #[arg(long)]
        rc: bool,
        /// Sidecar file with one microsecond timestamp per frame
        #[arg(long)]
        timestamps: Option<PathBuf>,
    },
    /// Decode a stream into per-frame ternary gradient images
    Decode {
        /// Input stream file
        #[arg(long)]
        input: PathBuf,
        /// Output directory for frame_NNNNNN_tx.png / _ty.png dumps
        #[arg(long)]
        output: PathBuf,
    },
    /// Reconstruct grayscale frames from a stream
    Reconstruct {
        /// Input stream file
        #[arg(long)]
        input: PathBuf,
        /// Output directory for reconstructed frames
        #[arg(long)]
        output: PathBuf,
        /// Over-relaxation factor between 1 and 2
        #[arg(long, default_value_t = 1.97)]
        alpha: f64,
        /// Solver iterations per frame
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// Scaling constant applied to the approximate Laplacian
        #[arg(long, default_value_t = 3.6)]
        scale: f64,
        /// 'gt' for per-frame ground-truth means (needs --gt), or a fixed value
        #[arg(long, default_value = "gt")]
        mean_bias: MeanBiasArg,
        /// Ground-truth frame directory for --mean-bias gt
        #[arg(long)]
        gt: Option<PathBuf>,
        /// Start each frame's solve from the previous reconstruction
        #[arg(long)]
        warm_start: bool,
    },
    /// Score reconstructed frames against ground truth
    Eval {
        /// Directory of reconstructed frames
        #[arg(long)]
        input: PathBuf,
        /// Directory of ground-truth frames
        #[arg(long)]
        gt: PathBuf,
        /// Stream file to add per-frame event probabilities to the report
        #[arg(long)]
        stream: Option<PathBuf>,
        /// Report file (JSON lines); stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Event-rate statistics of a stream
    Stats {
        /// Input stream file
        #[arg(long)]
        input: PathBuf,
        /// Output file (JSON lines); stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        /// Histogram bin count
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Encode {
            input,
            output,
            thresholds,
            rc,
            timestamps,
        } => cmd_encode(&EncodeOpts {
            input,
            output,
            thresholds,
            rc,
            timestamps,
        }),
        Command::Decode { input, output } => cmd_decode(&DecodeOpts { input, output }),
        Command::Reconstruct {
            input,
            output,
            alpha,
            iters,
            scale,
            mean_bias,
            gt,
            warm_start,
        } => cmd_reconstruct(&ReconstructOpts {
            input,
            output,
            alpha,
            iters,
            scale,
            mean_bias,
            gt,
            warm_start,
        }),
        Command::Eval {
            input,
            gt,
            stream,
            output,
        } => cmd_eval(&EvalOpts {
            input,
            gt,
            stream,
            output,
        }),
        Command::Stats {
            input,
            output,
            bins,
        } => cmd_stats(&StatsOpts {
            input,
            output,
            bins,
        }),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1, // bad usage is a validation error
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        if !matches!(e, error::CliError::BrokenPipe) {
            eprintln!("error: {e}");
        }
        std::process::exit(e.exit_code());
    }
}
