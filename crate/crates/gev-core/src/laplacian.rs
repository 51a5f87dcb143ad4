//! Approximate discrete Laplacian assembled from gradient backward
//! differences.

use crate::error::{Error, Result};
use crate::gradient::GradientField;

/// Row-major plane holding the (approximate) discrete Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl LaplacianField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidField(format!(
                "dimensions must be at least 2x2, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidField(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Returns the field multiplied by a scalar.
    pub fn scaled(&self, factor: f64) -> LaplacianField {
        LaplacianField {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Sums per-axis backward differences of the gradient planes:
/// `A_X(x,y) = g_x(x,y) - g_x(x-1,y)` with `A_X(0,y) = g_x(0,y)`, and the
/// transpose convention for `A_Y`.
///
/// When the input holds the exact forward differences of an image this
/// reproduces the 5-point Laplacian of that image under replicated-edge
/// (zero-flux) boundaries, at every pixel. Quantized and resolution
/// compressed fields plug into the same formula.
pub fn approximate_laplacian(grad: &GradientField) -> LaplacianField {
    let (w, h) = (grad.width(), grad.height());
    let mut data = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let ax = if x == 0 {
                grad.gx_at(0, y)
            } else {
                grad.gx_at(x, y) - grad.gx_at(x - 1, y)
            };
            let ay = if y == 0 {
                grad.gy_at(x, 0)
            } else {
                grad.gy_at(x, y) - grad.gy_at(x, y - 1)
            };
            data[y * w + x] = ax + ay;
        }
    }
    LaplacianField {
        width: w,
        height: h,
        data,
    }
}
