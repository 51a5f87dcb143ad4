//! Oracle-backed checks for gradients, thresholds, quantization, and
//! resolution compression.

use gev_core::{
    compress_resolution, compute_gradients, dequantize, ternarize, GradientField, GrayImage,
    TernaryField, ThresholdMatrix,
};
use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..width * height).map(|_| rng.random::<f64>()).collect();
    GrayImage::new(width, height, data).unwrap()
}

/// Column x of the image recovered by summing gx along the row from I(0,y).
#[test]
fn telescoping_sum_recovers_image_exactly() {
    let img = random_image(8, 8, 1);
    let grad = compute_gradients(&img);
    for y in 0..8 {
        let mut acc = img.get(0, y);
        for x in 1..8 {
            acc += grad.gx_at(x - 1, y);
            assert!(
                (acc - img.get(x, y)).abs() < 1e-12,
                "column {x}, row {y}: {acc} vs {}",
                img.get(x, y)
            );
        }
    }
    // same along columns for gy
    for x in 0..8 {
        let mut acc = img.get(x, 0);
        for y in 1..8 {
            acc += grad.gy_at(x, y - 1);
            assert!((acc - img.get(x, y)).abs() < 1e-12);
        }
    }
}

/// Exhaustive sweep of gradient values against each threshold: dequantized
/// magnitudes never exceed max(|g|, theta) and signs follow the quantizer.
#[test]
fn dequantize_magnitude_and_sign_over_value_grid() {
    for &threshold in &[4.0 / 255.0, 8.0 / 255.0, 16.0 / 255.0, 0.5, 1.0] {
        let theta = ThresholdMatrix::cyclic(2, 2, &[threshold]).unwrap();
        let mut g = -1.0;
        while g <= 1.0 {
            let grad = GradientField::new(2, 2, vec![g, 0.0, 0.0, 0.0], vec![0.0; 4], false).unwrap();
            let tern = ternarize(&grad, &theta).unwrap();
            let back = dequantize(&tern, &theta).unwrap();
            let v = back.gx_at(0, 0);
            assert!(v.abs() <= g.abs().max(threshold) + 1e-15);
            if g.abs() < threshold {
                assert_eq!(v, 0.0);
            } else {
                assert_eq!(v, if g > 0.0 { threshold } else { -threshold });
            }
            g += 1.0 / 64.0;
        }
    }
}

/// Compressed planes carry exactly width*height independent samples across
/// the two channels: count the unique pair slots on a random 6x6 field.
#[test]
fn compressed_field_has_width_times_height_unique_slots() {
    let img = random_image(6, 6, 2);
    let rc = compress_resolution(&compute_gradients(&img)).unwrap();
    let (w, h) = (rc.width(), rc.height());
    let x_slots = (w / 2) * h; // one per horizontal pair
    let y_slots = w * (h / 2); // one per vertical pair
    assert_eq!(x_slots + y_slots, w * h);
    assert_eq!(x_slots + y_slots, 36);
    // and the non-slot members are literal duplicates
    for y in 0..h {
        for x in (0..w).step_by(2) {
            assert_eq!(rc.gx_at(x, y), rc.gx_at(x + 1, y));
        }
    }
    for y in (0..h).step_by(2) {
        for x in 0..w {
            assert_eq!(rc.gy_at(x, y), rc.gy_at(x, y + 1));
        }
    }
}

/// Compressing a field whose values already sit in pairwise-constant form
/// reproduces it: average of two equal members is the member.
#[test]
fn compression_is_idempotent_on_pairwise_constant_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (w, h) = (8usize, 6usize);
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        // the last pair stays zero to honor the boundary convention
        for x in (0..w - 2).step_by(2) {
            let v = rng.random_range(-1.0..1.0);
            gx[y * w + x] = v;
            gx[y * w + x + 1] = v;
        }
    }
    for y in (0..h - 2).step_by(2) {
        for x in 0..w {
            let v = rng.random_range(-1.0..1.0);
            gy[y * w + x] = v;
            gy[(y + 1) * w + x] = v;
        }
    }
    let field = GradientField::new(w, h, gx.clone(), gy.clone(), false).unwrap();
    let rc = compress_resolution(&field).unwrap();
    assert_eq!(rc.gx(), gx.as_slice());
    assert_eq!(rc.gy(), gy.as_slice());
    assert!(rc.compressed());
}

proptest! {
    /// dequantize(ternarize(g)) equals the element-wise product of the
    /// ternary field with the threshold plane, exactly.
    #[test]
    fn dequantize_commutes_with_elementwise_product(seed in 0u64..500) {
        let img = random_image(12, 10, seed);
        let theta = ThresholdMatrix::cyclic(12, 10, &[4.0 / 255.0, 8.0 / 255.0, 16.0 / 255.0]).unwrap();
        let grad = compute_gradients(&img);
        let tern = ternarize(&grad, &theta).unwrap();
        let back = dequantize(&tern, &theta).unwrap();
        for y in 0..10 {
            for x in 0..12 {
                prop_assert_eq!(back.gx_at(x, y), f64::from(tern.tx_at(x, y)) * theta.get(x, y));
                prop_assert_eq!(back.gy_at(x, y), f64::from(tern.ty_at(x, y)) * theta.get(x, y));
            }
        }
    }

    /// Quantization is position-deterministic: identical inputs, identical
    /// outputs.
    #[test]
    fn ternarize_is_deterministic(seed in 0u64..500) {
        let img = random_image(9, 7, seed);
        let theta = ThresholdMatrix::cyclic(9, 7, &[0.01, 0.03, 0.06]).unwrap();
        let grad = compute_gradients(&img);
        let a = ternarize(&grad, &theta).unwrap();
        let b = ternarize(&grad, &theta).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Every duplicate pair of a compressed ternary field is identical even
    /// though the two members see different matrix thresholds.
    #[test]
    fn compressed_ternary_pairs_are_identical(seed in 0u64..500) {
        let img = random_image(10, 8, seed);
        let theta = ThresholdMatrix::cyclic(10, 8, &[4.0 / 255.0, 8.0 / 255.0, 16.0 / 255.0]).unwrap();
        let rc = compress_resolution(&compute_gradients(&img)).unwrap();
        let tern: TernaryField = ternarize(&rc, &theta).unwrap();
        for y in 0..8 {
            for x in (0..10).step_by(2) {
                prop_assert_eq!(tern.tx_at(x, y), tern.tx_at(x + 1, y));
            }
        }
        for y in (0..8).step_by(2) {
            for x in 0..10 {
                prop_assert_eq!(tern.ty_at(x, y), tern.ty_at(x, y + 1));
            }
        }
    }
}
