use proptest::prelude::*;
use scpa_core::pixel_io::{
    decode, encode, inject_impulse_noise, read_image, write_image, Image, NoiseSpec, PnmError, PEPPER, SALT,
};

fn image_strategy() -> impl Strategy<Value = Image> {
    (1usize..24, 1usize..24, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(|(w, h, c)| {
        prop::collection::vec(any::<u8>(), w * h * c).prop_map(move |s| Image::new(w, h, c, s).unwrap())
    })
}

proptest! {
    #[test]
    fn binary_and_ascii_round_trip(img in image_strategy()) {
        prop_assert_eq!(decode(&encode(&img, false)).unwrap(), img.clone());
        prop_assert_eq!(decode(&encode(&img, true)).unwrap(), img);
    }

    #[test]
    fn noise_count_and_mask_agree(density in 0.0f64..=1.0, seed in any::<u64>()) {
        let clean = Image::filled(19, 13, 1, 100).unwrap();
        let spec = NoiseSpec::new(density, seed).unwrap();
        let (noisy, mask) = inject_impulse_noise(&clean, &spec).unwrap();
        let expected = (density * clean.pixel_count() as f64).round() as usize;
        prop_assert_eq!(mask.count(), expected);
        for y in 0..13 {
            for x in 0..19 {
                let v = noisy.get(x, y, 0);
                if mask.get(x, y) {
                    prop_assert!(v == SALT || v == PEPPER);
                } else {
                    prop_assert_eq!(v, 100);
                }
            }
        }
    }
}

#[test]
fn file_round_trip_and_noise_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let img = Image::from_fn_gray(40, 30, |x, y| (x * 3 + y * 5) as u8).unwrap();
    let path = dir.path().join("in.pgm");
    write_image(&img, &path, false).unwrap();
    let back = read_image(&path).unwrap();
    assert_eq!(back, img);

    let spec = NoiseSpec::new(0.25, 77).unwrap();
    let (a, ma) = inject_impulse_noise(&back, &spec).unwrap();
    let (b, mb) = inject_impulse_noise(&img, &spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(ma, mb);
    let other = inject_impulse_noise(&img, &NoiseSpec::new(0.25, 78).unwrap()).unwrap().1;
    assert_ne!(ma, other);
}

#[test]
fn comments_and_mixed_whitespace_in_header() {
    let data = b"P2\n# a comment\n3 # width\n2\n255\n0 1 2\n\t3 4 255\n";
    let img = decode(data).unwrap();
    assert_eq!(img.samples(), &[0, 1, 2, 3, 4, 255]);
}

#[test]
fn errors_carry_offsets() {
    match decode(b"P5\n2 2\n255\n\x01\x02") {
        Err(PnmError::TruncatedData { expected, found, .. }) => assert_eq!((expected, found), (4, 2)),
        other => panic!("unexpected {other:?}"),
    }
    match decode(b"P5\n2 2\n65535\n") {
        Err(PnmError::UnsupportedMaxval { maxval, .. }) => assert_eq!(maxval, 65535),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(decode(b"P7\n"), Err(PnmError::MalformedHeader { offset: 1, .. })));
    assert!(matches!(read_image("/nonexistent/x.pgm"), Err(PnmError::Io { .. })));
}
