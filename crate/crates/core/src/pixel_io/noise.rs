//! Salt-and-pepper impulse noise.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::image::{Image, NoiseMask};

pub const SALT: u8 = 255;
pub const PEPPER: u8 = 0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NoiseError {
    #[error("impulse noise is defined for grayscale images only (got {0} channels)")]
    UnsupportedInput(usize),
    #[error("noise density {0} is outside [0, 1]")]
    InvalidDensity(f64),
}

/// Fraction of pixels to corrupt plus the generator seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    density: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(density: f64, seed: u64) -> Result<Self, NoiseError> {
        if !(0.0..=1.0).contains(&density) {
            return Err(NoiseError::InvalidDensity(density));
        }
        Ok(Self { density, seed })
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// Number of pixels corrupted in an image of `pixels` pixels.
    pub fn corrupted_count(&self, pixels: usize) -> usize {
        ((self.density * pixels as f64).round() as usize).min(pixels)
    }
}

/// Replaces exactly `round(density * N)` distinct pixels with 0 or 255.
///
/// Positions come from a partial Fisher–Yates shuffle of the pixel index
/// space driven by SplitMix64; after each position one further draw picks salt
/// or pepper from its top bit. The result depends only on the seed.
pub fn inject_impulse_noise(
    img: &Image,
    spec: &NoiseSpec,
) -> Result<(Image, NoiseMask), NoiseError> {
    if !img.is_gray() {
        return Err(NoiseError::UnsupportedInput(img.channels()));
    }
    let n = img.pixel_count();
    let count = spec.corrupted_count(n);
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut out = img.clone();
    let mut mask = NoiseMask::new(img.width(), img.height());
    let samples = out.samples_mut();
    for i in 0..count {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
        let pos = order[i];
        samples[pos] = if rng.gen::<u64>() >> 63 == 1 { SALT } else { PEPPER };
        mask.set_index(pos, true);
    }
    Ok((out, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp(w: usize, h: usize) -> Image {
        Image::from_fn_gray(w, h, |x, y| (10 + (x + y) % 200) as u8).unwrap()
    }

    #[test]
    fn zero_density_is_identity() {
        let img = ramp(8, 5);
        let (out, mask) = inject_impulse_noise(&img, &NoiseSpec::new(0.0, 1).unwrap()).unwrap();
        assert_eq!(out, img);
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn full_density_saturates() {
        let img = ramp(4, 4);
        let (out, mask) = inject_impulse_noise(&img, &NoiseSpec::new(1.0, 9).unwrap()).unwrap();
        assert!(out.samples().iter().all(|&v| v == SALT || v == PEPPER));
        assert_eq!(mask.count(), 16);
    }

    #[test]
    fn quarter_density_is_reproducible() {
        let img = ramp(10, 10);
        let spec = NoiseSpec::new(0.25, 42).unwrap();
        let (a, ma) = inject_impulse_noise(&img, &spec).unwrap();
        let (b, mb) = inject_impulse_noise(&img, &spec).unwrap();
        assert_eq!(ma.count(), 25);
        assert_eq!(ma, mb);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_rgb_and_bad_density() {
        let rgb = Image::filled(2, 2, 3, 0).unwrap();
        assert_eq!(
            inject_impulse_noise(&rgb, &NoiseSpec::new(0.5, 0).unwrap()).unwrap_err(),
            NoiseError::UnsupportedInput(3)
        );
        assert!(NoiseSpec::new(1.5, 0).is_err());
        assert!(NoiseSpec::new(-0.1, 0).is_err());
        assert!(NoiseSpec::new(f64::NAN, 0).is_err());
    }

    proptest! {
        #[test]
        fn corrupts_exactly_the_masked_pixels(
            w in 1usize..40, h in 1usize..40, density in 0.0f64..=1.0, seed: u64
        ) {
            let img = ramp(w, h);
            let spec = NoiseSpec::new(density, seed).unwrap();
            let (out, mask) = inject_impulse_noise(&img, &spec).unwrap();
            prop_assert_eq!(mask.count(), (density * (w * h) as f64).round() as usize);
            for (i, (&before, &after)) in img.samples().iter().zip(out.samples()).enumerate() {
                if mask.bits()[i] {
                    prop_assert!(after == SALT || after == PEPPER);
                } else {
                    prop_assert_eq!(before, after);
                }
            }
        }
    }
}
