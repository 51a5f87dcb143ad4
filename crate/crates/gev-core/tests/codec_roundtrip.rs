//! Losslessness of the event code, checked by brute force and round trips.

use gev_core::codec::EVENT_RULE;
use gev_core::{
    decode_frame, encode_frame, enumerate_lossless_rules, CodecState, TernaryField,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_ternary(width: usize, height: usize, rng: &mut impl Rng) -> TernaryField {
    let mut tx = vec![0i8; width * height];
    let mut ty = vec![0i8; width * height];
    for y in 0..height {
        for x in 0..width {
            // keep the boundary-zero convention of real ternary gradients
            if x + 1 < width {
                tx[y * width + x] = rng.random_range(-1..=1);
            }
            if y + 1 < height {
                ty[y * width + x] = rng.random_range(-1..=1);
            }
        }
    }
    TernaryField::new(width, height, tx, ty, false).unwrap()
}

/// All nine (previous, current) transitions survive an encode/decode pair.
#[test]
fn full_transition_table_round_trips() {
    for prev in [-1i8, 0, 1] {
        for cur in [-1i8, 0, 1] {
            // install `prev` as state on an interior pixel, then move to `cur`
            let mut enc = CodecState::new(3, 3, false).unwrap();
            let mut dec = CodecState::new(3, 3, false).unwrap();
            let mk = |v: i8| {
                let mut tx = vec![0i8; 9];
                tx[4] = v; // center pixel, away from the zero boundary
                TernaryField::new(3, 3, tx, vec![0i8; 9], false).unwrap()
            };
            let first = mk(prev);
            let second = mk(cur);
            let ev1 = encode_frame(&mut enc, &first, 0).unwrap();
            let ev2 = encode_frame(&mut enc, &second, 1).unwrap();
            assert_eq!(decode_frame(&mut dec, &ev1).unwrap(), first);
            assert_eq!(decode_frame(&mut dec, &ev2).unwrap(), second);
        }
    }
}

/// One hundred random 64x64 ternary frames reproduce exactly through the
/// codec, starting from the all-zero state.
#[test]
fn hundred_random_frames_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut enc = CodecState::new(64, 64, false).unwrap();
    let mut dec = CodecState::new(64, 64, false).unwrap();
    for i in 0..100u64 {
        let tern = random_ternary(64, 64, &mut rng);
        let ev = encode_frame(&mut enc, &tern, i * 1000).unwrap();
        let back = decode_frame(&mut dec, &ev).unwrap();
        assert_eq!(back, tern, "frame {i}");
        assert_eq!(ev.timestamp_us(), i * 1000);
    }
}

/// Encoder and decoder states stay identical after every frame of a shared
/// stream.
#[test]
fn encoder_and_decoder_states_stay_in_lockstep() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut enc = CodecState::new(16, 12, false).unwrap();
    let mut dec = CodecState::new(16, 12, false).unwrap();
    for i in 0..50u64 {
        let tern = random_ternary(16, 12, &mut rng);
        let ev = encode_frame(&mut enc, &tern, i).unwrap();
        decode_frame(&mut dec, &ev).unwrap();
        assert_eq!(enc.prev(), dec.prev(), "after frame {i}");
    }
}

/// If nothing changed, the event frame is all zeros.
#[test]
fn zero_event_sparsity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut enc = CodecState::new(8, 8, false).unwrap();
    let tern = random_ternary(8, 8, &mut rng);
    encode_frame(&mut enc, &tern, 0).unwrap();
    let ev = encode_frame(&mut enc, &tern, 1).unwrap();
    assert!(ev.is_zero());
}

/// Independent oracle for the rule enumeration: filter all 3^9 tables over
/// {-1,0,1} for the lossless-code properties and compare with the generator.
#[test]
fn enumeration_matches_exhaustive_filter() {
    let mut expected = Vec::new();
    for code in 0..3usize.pow(9) {
        let mut digits = code;
        let mut table = [[0i8; 3]; 3];
        for row in 0..3 {
            for col in 0..3 {
                table[row][col] = (digits % 3) as i8 - 1;
                digits /= 3;
            }
        }
        let zero_diagonal = (0..3).all(|i| table[i][i] == 0);
        let rows_bijective = table.iter().all(|row| {
            let mut sorted = *row;
            sorted.sort_unstable();
            sorted == [-1, 0, 1]
        });
        if zero_diagonal && rows_bijective {
            expected.push(table);
        }
    }
    assert_eq!(expected.len(), 8);

    let mut produced = enumerate_lossless_rules();
    assert_eq!(produced.len(), 8);
    assert!(produced.contains(&EVENT_RULE));
    produced.sort();
    expected.sort();
    assert_eq!(produced, expected);
}

/// Compressed ternary fields ride through the codec unchanged as well.
#[test]
fn compressed_fields_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut enc = CodecState::new(12, 10, true).unwrap();
    let mut dec = CodecState::new(12, 10, true).unwrap();
    for i in 0..20u64 {
        let (w, h) = (12usize, 10usize);
        let mut tx = vec![0i8; w * h];
        let mut ty = vec![0i8; w * h];
        for y in 0..h {
            for x in (0..w).step_by(2) {
                let v = rng.random_range(-1..=1);
                tx[y * w + x] = v;
                tx[y * w + x + 1] = v;
            }
        }
        for y in (0..h).step_by(2) {
            for x in 0..w {
                let v = rng.random_range(-1..=1);
                ty[y * w + x] = v;
                ty[(y + 1) * w + x] = v;
            }
        }
        let tern = TernaryField::new(w, h, tx, ty, true).unwrap();
        let ev = encode_frame(&mut enc, &tern, i).unwrap();
        assert_eq!(decode_frame(&mut dec, &ev).unwrap(), tern);
    }
}
