use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use scpa_core::colorspace::{
    convert_image, convert_pixel, convert_pixel_q88, convert_pixel_real, inverse_matrix, ArithPath, ColorMatrix,
    ColorSpace, Direction, PixelTriple,
};
use scpa_core::pixel_io::Image;
use scpa_core::Execution;

/// Straight evaluation of the real-valued matrix.
fn oracle_real(p: [u8; 3], m: &ColorMatrix) -> [u8; 3] {
    let (c, o) = (m.coeffs_real(), m.offsets_real());
    std::array::from_fn(|r| {
        let v = o[r] + (0..3).map(|k| c[r][k] * f64::from(p[k])).sum::<f64>();
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    })
}

/// Integer Q8.8 evaluation with i64 accumulation.
fn oracle_q88(p: [u8; 3], m: &ColorMatrix) -> [u8; 3] {
    let (c, o) = (m.coeffs_q88(), m.offsets_q88());
    std::array::from_fn(|r| {
        let acc: i64 = i64::from(o[r]) + (0..3).map(|k| i64::from(c[r][k]) * i64::from(p[k])).sum::<i64>();
        ((acc + 128) >> 8).clamp(0, 255) as u8
    })
}

proptest! {
    #[test]
    fn conversions_match_oracles(p in prop::array::uniform3(any::<u8>())) {
        for space in ColorSpace::ALL {
            let m = ColorMatrix::forward(space);
            prop_assert_eq!(convert_pixel_real(PixelTriple(p), &m).0, oracle_real(p, &m));
            prop_assert_eq!(convert_pixel_q88(PixelTriple(p), &m).0, oracle_q88(p, &m));
        }
    }

    #[test]
    fn cmy_is_complement(p in prop::array::uniform3(any::<u8>())) {
        let m = ColorMatrix::forward(ColorSpace::Cmy);
        for path in [ArithPath::Real, ArithPath::Q88] {
            prop_assert_eq!(convert_pixel(PixelTriple(p), &m, path).0, p.map(|v| 255 - v));
        }
    }
}

#[test]
fn known_values() {
    let ycc = ColorMatrix::forward(ColorSpace::Ycc);
    for path in [ArithPath::Real, ArithPath::Q88] {
        assert_eq!(convert_pixel(PixelTriple([0, 0, 0]), &ycc, path).0, [0, 128, 128]);
        assert_eq!(convert_pixel(PixelTriple([255, 255, 255]), &ycc, path).0, [255, 128, 128]);
        assert_eq!(convert_pixel(PixelTriple([77, 77, 77]), &ycc, path).0, [77, 128, 128]);
    }
}

#[test]
fn grays_have_neutral_chroma_in_every_space() {
    for space in [ColorSpace::Ycc, ColorSpace::Yiq, ColorSpace::Yuv] {
        let m = ColorMatrix::forward(space);
        for v in 0..=255u8 {
            let out = convert_pixel_real(PixelTriple([v; 3]), &m).0;
            assert_eq!(out, [v, 128, 128], "{space} gray {v}");
        }
    }
}

#[test]
fn luma_is_monotone_in_each_channel() {
    let mut rng = SplitMix64::seed_from_u64(21);
    for space in [ColorSpace::Ycc, ColorSpace::Yiq, ColorSpace::Yuv] {
        let m = ColorMatrix::forward(space);
        for _ in 0..20_000 {
            let p: [u8; 3] = rng.gen();
            let c = rng.gen_range(0..3);
            if p[c] == 255 {
                continue;
            }
            let mut q = p;
            q[c] += 1;
            for path in [ArithPath::Real, ArithPath::Q88] {
                let (a, b) = (convert_pixel(PixelTriple(p), &m, path), convert_pixel(PixelTriple(q), &m, path));
                assert!(a.0[0] <= b.0[0], "{space} {p:?} -> {q:?}");
            }
        }
    }
}

#[test]
fn inverse_of_inverse_is_forward() {
    for space in ColorSpace::ALL {
        let m = ColorMatrix::forward(space);
        let inv = inverse_matrix(&m).unwrap();
        assert_eq!(inv.direction(), Direction::Inverse);
        let back = inverse_matrix(&inv).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert!((back.coeffs_real()[r][c] - m.coeffs_real()[r][c]).abs() < 1e-9);
            }
            assert!((back.offsets_real()[r] - m.offsets_real()[r]).abs() < 1e-6);
        }
    }
}

#[test]
fn matrix_names_resolve() {
    for space in ColorSpace::ALL {
        assert_eq!(ColorMatrix::by_name(space.name()).unwrap().space(), space);
    }
    assert!(ColorMatrix::by_name("hsv").is_err());
}

#[test]
fn image_conversion_parallel_identity_and_gray_rejection() {
    let mut rng = SplitMix64::seed_from_u64(22);
    let img = Image::new(61, 37, 3, (0..61 * 37 * 3).map(|_| rng.gen()).collect()).unwrap();
    for space in ColorSpace::ALL {
        let m = ColorMatrix::forward(space);
        for path in [ArithPath::Real, ArithPath::Q88] {
            let seq = convert_image(&img, &m, path, Execution::Sequential).unwrap();
            assert_eq!(seq, convert_image(&img, &m, path, Execution::Parallel).unwrap());
            assert_eq!(
                seq.get(5, 9, 1),
                convert_pixel(PixelTriple([img.get(5, 9, 0), img.get(5, 9, 1), img.get(5, 9, 2)]), &m, path).0[1]
            );
        }
    }
    let gray = Image::filled(4, 4, 1, 0).unwrap();
    assert!(convert_image(&gray, &ColorMatrix::forward(ColorSpace::Cmy), ArithPath::Q88, Execution::Sequential).is_err());
}
