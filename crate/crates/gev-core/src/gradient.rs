//! Forward-difference gradient images and resolution compression.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Paired horizontal/vertical gradient planes over a pixel grid.
///
/// Uncompressed fields follow the forward-difference boundary convention:
/// the last column of `gx` and the last row of `gy` are zero. Compressed
/// fields instead carry pairwise-duplicate values: `gx` is constant over
/// each horizontal pair of columns `(2m, 2m+1)` and `gy` over each vertical
/// pair of rows, so only half of each plane is independent.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    width: usize,
    height: usize,
    gx: Vec<f64>,
    gy: Vec<f64>,
    compressed: bool,
}

impl GradientField {
    pub fn new(
        width: usize,
        height: usize,
        gx: Vec<f64>,
        gy: Vec<f64>,
        compressed: bool,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidField(format!(
                "dimensions must be at least 2x2, got {width}x{height}"
            )));
        }
        if gx.len() != width * height || gy.len() != width * height {
            return Err(Error::InvalidField(format!(
                "expected {} samples per plane for {width}x{height}",
                width * height
            )));
        }
        if let Some(v) = gx.iter().chain(gy.iter()).find(|v| !(-1.0..=1.0).contains(*v)) {
            return Err(Error::InvalidField(format!("gradient {v} outside [-1,1]")));
        }
        let field = Self {
            width,
            height,
            gx,
            gy,
            compressed,
        };
        if compressed {
            field.check_even_dims()?;
            field.check_duplicates()?;
        } else {
            field.check_boundary_zeros()?;
        }
        Ok(field)
    }

    fn check_even_dims(&self) -> Result<()> {
        if !self.width.is_multiple_of(2) || !self.height.is_multiple_of(2) {
            return Err(Error::InvalidField(format!(
                "compressed fields need even dimensions, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    fn check_boundary_zeros(&self) -> Result<()> {
        let (w, h) = (self.width, self.height);
        for y in 0..h {
            if self.gx[y * w + w - 1] != 0.0 {
                return Err(Error::InvalidField(format!(
                    "gx must be zero on the last column, found {} at row {y}",
                    self.gx[y * w + w - 1]
                )));
            }
        }
        for x in 0..w {
            if self.gy[(h - 1) * w + x] != 0.0 {
                return Err(Error::InvalidField(format!(
                    "gy must be zero on the last row, found {} at column {x}",
                    self.gy[(h - 1) * w + x]
                )));
            }
        }
        Ok(())
    }

    fn check_duplicates(&self) -> Result<()> {
        let (w, h) = (self.width, self.height);
        for y in 0..h {
            for x in (0..w).step_by(2) {
                if self.gx[y * w + x] != self.gx[y * w + x + 1] {
                    return Err(Error::InvalidField(format!(
                        "compressed pair mismatch in gx at ({x},{y})"
                    )));
                }
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                if self.gy[y * w + x] != self.gy[(y + 1) * w + x] {
                    return Err(Error::InvalidField(format!(
                        "compressed pair mismatch in gy at ({x},{y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn gx(&self) -> &[f64] {
        &self.gx
    }

    pub fn gy(&self) -> &[f64] {
        &self.gy
    }

    #[inline]
    pub fn gx_at(&self, x: usize, y: usize) -> f64 {
        self.gx[y * self.width + x]
    }

    #[inline]
    pub fn gy_at(&self, x: usize, y: usize) -> f64 {
        self.gy[y * self.width + x]
    }

    pub fn compressed(&self) -> bool {
        self.compressed
    }
}

/// Forward differences of a grayscale image.
///
/// `gx(x,y) = I(x+1,y) - I(x,y)` with a zero last column, and
/// `gy(x,y) = I(x,y+1) - I(x,y)` with a zero last row.
pub fn compute_gradients(img: &GrayImage) -> GradientField {
    let (w, h) = (img.width(), img.height());
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w - 1 {
            gx[y * w + x] = img.get(x + 1, y) - img.get(x, y);
        }
    }
    for y in 0..h - 1 {
        for x in 0..w {
            gy[y * w + x] = img.get(x, y + 1) - img.get(x, y);
        }
    }
    GradientField {
        width: w,
        height: h,
        gx,
        gy,
        compressed: false,
    }
}

/// Halves the independent sample count by averaging horizontal gradients
/// over column pairs and vertical gradients over row pairs. Both members of
/// a pair carry the average, so the planes keep their full size while only
/// `width * height` values remain unique across the two channels.
pub fn compress_resolution(grad: &GradientField) -> Result<GradientField> {
    if grad.compressed() {
        return Err(Error::InvalidField(
            "field is already resolution compressed".into(),
        ));
    }
    let (w, h) = (grad.width(), grad.height());
    if w % 2 != 0 || h % 2 != 0 {
        return Err(Error::InvalidField(format!(
            "resolution compression needs even dimensions, got {w}x{h}"
        )));
    }
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        for x in (0..w).step_by(2) {
            let avg = (grad.gx_at(x, y) + grad.gx_at(x + 1, y)) / 2.0;
            gx[y * w + x] = avg;
            gx[y * w + x + 1] = avg;
        }
    }
    for y in (0..h).step_by(2) {
        for x in 0..w {
            let avg = (grad.gy_at(x, y) + grad.gy_at(x, y + 1)) / 2.0;
            gy[y * w + x] = avg;
            gy[(y + 1) * w + x] = avg;
        }
    }
    Ok(GradientField {
        width: w,
        height: h,
        gx,
        gy,
        compressed: true,
    })
}
