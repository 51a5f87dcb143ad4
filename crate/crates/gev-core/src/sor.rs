//! Checkerboard successive over-relaxation for the discrete Poisson
//! equation.
//!
//! Each iteration runs two half-sweeps: first every cell with even parity
//! `(x + y) mod 2 == 0`, then every odd-parity cell. A cell update reads
//! only opposite-parity neighbors, so cells within one half-sweep are
//! independent and the sweep parallelizes over rows without changing a
//! single bit of the result.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::laplacian::LaplacianField;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Solver and post-processing parameters for reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionParams {
    alpha: f64,
    iterations: usize,
    scale: f64,
    mean_bias: f64,
}

impl ReconstructionParams {
    pub fn new(alpha: f64, iterations: usize, scale: f64, mean_bias: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!(
                "over-relaxation factor {alpha} outside [1,2]"
            )));
        }
        if iterations == 0 {
            return Err(Error::InvalidParams("iteration count must be positive".into()));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "scaling constant {scale} must be positive and finite"
            )));
        }
        if !(0.0..=1.0).contains(&mean_bias) {
            return Err(Error::InvalidParams(format!(
                "mean bias {mean_bias} outside [0,1]"
            )));
        }
        Ok(Self {
            alpha,
            iterations,
            scale,
            mean_bias,
        })
    }

    /// Same parameters with a different mean bias, e.g. a per-frame
    /// ground-truth mean.
    pub fn with_mean_bias(&self, mean_bias: f64) -> Result<Self> {
        Self::new(self.alpha, self.iterations, self.scale, mean_bias)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean_bias(&self) -> f64 {
        self.mean_bias
    }
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        Self {
            alpha: 1.97,
            iterations: 100,
            scale: 3.6,
            mean_bias: 0.5,
        }
    }
}

/// Runs `iterations` red-black SOR iterations on `4R - sum(neighbors) = -L`
/// with replicated-edge boundaries (an out-of-bounds neighbor contributes
/// the center value).
///
/// The per-cell update is `R += beta * (sum(neighbors) - 4R - L)` with
/// `beta = alpha / 4`. Starts from `initial` or from all zeros; the output
/// plane is unclamped.
pub fn sor_solve(
    lap: &LaplacianField,
    params: &ReconstructionParams,
    initial: Option<&GrayImage>,
) -> Result<Vec<f64>> {
    let (w, h) = (lap.width(), lap.height());
    for (i, v) in lap.data().iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteLaplacian { x: i % w, y: i / w });
        }
    }
    let mut cur = match initial {
        Some(img) => {
            if (img.width(), img.height()) != (w, h) {
                return Err(Error::dims(
                    "sor_solve initial",
                    (w, h),
                    (img.width(), img.height()),
                ));
            }
            img.data().to_vec()
        }
        None => vec![0.0; w * h],
    };
    let mut prev = vec![0.0; w * h];
    let beta = params.alpha() / 4.0;
    for _ in 0..params.iterations() {
        for parity in 0..2 {
            prev.copy_from_slice(&cur);
            half_sweep(&mut cur, &prev, lap.data(), w, h, beta, parity);
        }
    }
    Ok(cur)
}

/// Updates all cells of one parity, reading neighbor values from the
/// snapshot taken at the start of the half-sweep. Those neighbors all have
/// the opposite parity and are untouched within the sweep, so this equals
/// the in-place sequential update and is deterministic under any worker
/// count.
fn half_sweep(
    cur: &mut [f64],
    prev: &[f64],
    lap: &[f64],
    w: usize,
    h: usize,
    beta: f64,
    parity: usize,
) {
    let update_row = |y: usize, row: &mut [f64]| {
        let x0 = parity ^ (y & 1);
        for x in (x0..w).step_by(2) {
            let i = y * w + x;
            let center = prev[i];
            let up = if y > 0 { prev[i - w] } else { center };
            let down = if y + 1 < h { prev[i + w] } else { center };
            let left = if x > 0 { prev[i - 1] } else { center };
            let right = if x + 1 < w { prev[i + 1] } else { center };
            row[x] = center + beta * (up + down + left + right - 4.0 * center - lap[i]);
        }
    };

    #[cfg(feature = "parallel")]
    cur.par_chunks_mut(w)
        .enumerate()
        .for_each(|(y, row)| update_row(y, row));

    #[cfg(not(feature = "parallel"))]
    cur.chunks_mut(w)
        .enumerate()
        .for_each(|(y, row)| update_row(y, row));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_validation() {
        assert!(ReconstructionParams::new(0.9, 100, 3.6, 0.5).is_err());
        assert!(ReconstructionParams::new(2.1, 100, 3.6, 0.5).is_err());
        assert!(ReconstructionParams::new(1.97, 0, 3.6, 0.5).is_err());
        assert!(ReconstructionParams::new(1.97, 100, 0.0, 0.5).is_err());
        assert!(ReconstructionParams::new(1.97, 100, 3.6, 1.5).is_err());
        assert!(ReconstructionParams::new(1.0, 1, 1.0, 0.0).is_ok());
        assert!(ReconstructionParams::new(2.0, 1, 1.0, 1.0).is_ok());
    }

    #[test]
    fn zero_laplacian_zero_start_is_a_fixed_point() {
        let lap = LaplacianField::new(4, 4, vec![0.0; 16]).unwrap();
        let params = ReconstructionParams::new(1.97, 37, 3.6, 0.5).unwrap();
        let out = sor_solve(&lap, &params, None).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn non_finite_laplacian_is_rejected() {
        let lap = LaplacianField::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0]).unwrap();
        let params = ReconstructionParams::default();
        assert!(matches!(
            sor_solve(&lap, &params, None),
            Err(Error::NonFiniteLaplacian { x: 1, y: 0 })
        ));
    }

    #[test]
    fn one_iteration_matches_hand_computed_2x2_trace() {
        // L = [l00 l10; l01 l11], start from zero, beta = alpha/4.
        // Parity 0 cells: (0,0) and (1,1); all neighbors mirror to the
        // center (value 0) or are the opposite-parity zeros:
        //   r00 = beta * (-l00), r11 = beta * (-l11)
        // Parity 1 cells (1,0) and (0,1) then see the updated r00/r11:
        //   (1,0): up=center, down=r11, left=r00, right=center, center=0
        //          r10 = beta * (r00 + r11 - l10)
        //   (0,1): up=r00, down=center, left=center, right=r11
        //          r01 = beta * (r00 + r11 - l01)
        let (l00, l10, l01, l11) = (0.4, -0.2, 0.1, 0.8);
        let alpha = 1.5;
        let beta = alpha / 4.0;
        let lap = LaplacianField::new(2, 2, vec![l00, l10, l01, l11]).unwrap();
        let params = ReconstructionParams::new(alpha, 1, 1.0, 0.5).unwrap();
        let out = sor_solve(&lap, &params, None).unwrap();
        let r00 = beta * -l00;
        let r11 = beta * -l11;
        let r10 = beta * (r00 + r11 - l10);
        let r01 = beta * (r00 + r11 - l01);
        assert_eq!(out, vec![r00, r10, r01, r11]);
    }
}
