//! Ternary gradients: threshold quantization and its dequantization.

use crate::error::{Error, Result};
use crate::gradient::GradientField;
use crate::threshold::ThresholdMatrix;

/// Paired planes over `{-1, 0, +1}`, holding ternary gradients.
///
/// Shares the structural invariants of [`GradientField`]: uncompressed
/// fields have a zero last column in `tx` and a zero last row in `ty`;
/// compressed fields are pairwise duplicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryField {
    width: usize,
    height: usize,
    tx: Vec<i8>,
    ty: Vec<i8>,
    compressed: bool,
}

impl TernaryField {
    pub fn new(
        width: usize,
        height: usize,
        tx: Vec<i8>,
        ty: Vec<i8>,
        compressed: bool,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidField(format!(
                "dimensions must be at least 2x2, got {width}x{height}"
            )));
        }
        if tx.len() != width * height || ty.len() != width * height {
            return Err(Error::InvalidField(format!(
                "expected {} samples per plane for {width}x{height}",
                width * height
            )));
        }
        if let Some(v) = tx.iter().chain(ty.iter()).find(|v| !matches!(v, -1..=1)) {
            return Err(Error::InvalidField(format!("ternary value {v} not in {{-1,0,1}}")));
        }
        let field = Self {
            width,
            height,
            tx,
            ty,
            compressed,
        };
        if compressed {
            if !width.is_multiple_of(2) || !height.is_multiple_of(2) {
                return Err(Error::InvalidField(format!(
                    "compressed fields need even dimensions, got {width}x{height}"
                )));
            }
            field.check_duplicates()?;
        } else {
            field.check_boundary_zeros()?;
        }
        Ok(field)
    }

    pub fn zeros(width: usize, height: usize, compressed: bool) -> Result<Self> {
        Self::new(
            width,
            height,
            vec![0; width * height],
            vec![0; width * height],
            compressed,
        )
    }

    fn check_boundary_zeros(&self) -> Result<()> {
        let (w, h) = (self.width, self.height);
        if (0..h).any(|y| self.tx[y * w + w - 1] != 0) {
            return Err(Error::InvalidField(
                "tx must be zero on the last column".into(),
            ));
        }
        if (0..w).any(|x| self.ty[(h - 1) * w + x] != 0) {
            return Err(Error::InvalidField("ty must be zero on the last row".into()));
        }
        Ok(())
    }

    fn check_duplicates(&self) -> Result<()> {
        let (w, h) = (self.width, self.height);
        for y in 0..h {
            for x in (0..w).step_by(2) {
                if self.tx[y * w + x] != self.tx[y * w + x + 1] {
                    return Err(Error::InvalidField(format!(
                        "compressed pair mismatch in tx at ({x},{y})"
                    )));
                }
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                if self.ty[y * w + x] != self.ty[(y + 1) * w + x] {
                    return Err(Error::InvalidField(format!(
                        "compressed pair mismatch in ty at ({x},{y})"
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

    pub fn tx(&self) -> &[i8] {
        &self.tx
    }

    pub fn ty(&self) -> &[i8] {
        &self.ty
    }

    #[inline]
    pub fn tx_at(&self, x: usize, y: usize) -> i8 {
        self.tx[y * self.width + x]
    }

    #[inline]
    pub fn ty_at(&self, x: usize, y: usize) -> i8 {
        self.ty[y * self.width + x]
    }

    pub fn compressed(&self) -> bool {
        self.compressed
    }
}

/// The quantizer: zero below the threshold, the sign otherwise.
/// Equality with the threshold fires.
#[inline]
fn quantize(g: f64, threshold: f64) -> i8 {
    if g.abs() < threshold {
        0
    } else if g > 0.0 {
        1
    } else {
        -1
    }
}

/// Quantizes a gradient field against a threshold matrix.
///
/// For compressed fields the comparison runs once per duplicate pair, at the
/// even-index member, and the result is copied to the partner, so both
/// members stay identical even though their matrix thresholds differ.
pub fn ternarize(grad: &GradientField, theta: &ThresholdMatrix) -> Result<TernaryField> {
    let (w, h) = (grad.width(), grad.height());
    if (theta.width(), theta.height()) != (w, h) {
        return Err(Error::dims(
            "ternarize",
            (w, h),
            (theta.width(), theta.height()),
        ));
    }
    let mut tx = vec![0i8; w * h];
    let mut ty = vec![0i8; w * h];
    if grad.compressed() {
        for y in 0..h {
            for x in (0..w).step_by(2) {
                let t = quantize(grad.gx_at(x, y), theta.get(x, y));
                tx[y * w + x] = t;
                tx[y * w + x + 1] = t;
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                let t = quantize(grad.gy_at(x, y), theta.get(x, y));
                ty[y * w + x] = t;
                ty[(y + 1) * w + x] = t;
            }
        }
    } else {
        for y in 0..h {
            for x in 0..w {
                tx[y * w + x] = quantize(grad.gx_at(x, y), theta.get(x, y));
                ty[y * w + x] = quantize(grad.gy_at(x, y), theta.get(x, y));
            }
        }
    }
    TernaryField::new(w, h, tx, ty, grad.compressed())
}

/// Recovers quantized gradients as the element-wise product of the ternary
/// field with the threshold matrix. Compressed pairs both use the threshold
/// of the even-index member, mirroring [`ternarize`].
pub fn dequantize(tern: &TernaryField, theta: &ThresholdMatrix) -> Result<GradientField> {
    let (w, h) = (tern.width(), tern.height());
    if (theta.width(), theta.height()) != (w, h) {
        return Err(Error::dims(
            "dequantize",
            (w, h),
            (theta.width(), theta.height()),
        ));
    }
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    if tern.compressed() {
        for y in 0..h {
            for x in (0..w).step_by(2) {
                let v = f64::from(tern.tx_at(x, y)) * theta.get(x, y);
                gx[y * w + x] = v;
                gx[y * w + x + 1] = v;
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                let v = f64::from(tern.ty_at(x, y)) * theta.get(x, y);
                gy[y * w + x] = v;
                gy[(y + 1) * w + x] = v;
            }
        }
    } else {
        for y in 0..h {
            for x in 0..w {
                gx[y * w + x] = f64::from(tern.tx_at(x, y)) * theta.get(x, y);
                gy[y * w + x] = f64::from(tern.ty_at(x, y)) * theta.get(x, y);
            }
        }
    }
    GradientField::new(w, h, gx, gy, tern.compressed())
}
