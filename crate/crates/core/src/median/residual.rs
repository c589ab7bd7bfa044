use crate::pixel_io::{Image, NoiseMask, PEPPER, SALT};

use super::MedianError;

fn check_geometry(img: &Image, mask: &NoiseMask) -> Result<(), MedianError> {
    if !img.is_gray() {
        return Err(MedianError::UnsupportedInput(img.channels()));
    }
    if img.width() != mask.width() || img.height() != mask.height() {
        return Err(MedianError::DimensionMismatch {
            image: (img.width(), img.height()),
            mask: (mask.width(), mask.height()),
        });
    }
    Ok(())
}

fn is_impulse(v: u8) -> bool {
    v == SALT || v == PEPPER
}

/// Masked positions whose value is still exactly 0 or 255.
pub fn count_residual_impulses(img: &Image, mask: &NoiseMask) -> Result<usize, MedianError> {
    count_residual_impulses_interior(img, mask, 0)
}

/// Like [`count_residual_impulses`], ignoring pixels closer than `margin` to the border.
pub fn count_residual_impulses_interior(
    img: &Image,
    mask: &NoiseMask,
    margin: usize,
) -> Result<usize, MedianError> {
    check_geometry(img, mask)?;
    Ok(interior(img.width(), img.height(), margin)
        .filter(|&(x, y)| mask.get(x, y) && is_impulse(img.get(x, y, 0)))
        .count())
}

/// Unmasked interior pixels whose value differs between `clean` and `filtered`.
pub fn count_altered_clean(
    clean: &Image,
    filtered: &Image,
    mask: &NoiseMask,
    margin: usize,
) -> Result<usize, MedianError> {
    check_geometry(clean, mask)?;
    check_geometry(filtered, mask)?;
    Ok(interior(clean.width(), clean.height(), margin)
        .filter(|&(x, y)| !mask.get(x, y) && clean.get(x, y, 0) != filtered.get(x, y, 0))
        .count())
}

/// Pixel coordinates at least `margin` away from every border.
pub fn interior(width: usize, height: usize, margin: usize) -> impl Iterator<Item = (usize, usize)> {
    let xs = margin..width.saturating_sub(margin);
    (margin..height.saturating_sub(margin)).flat_map(move |y| xs.clone().map(move |x| (x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel_io::{inject_impulse_noise, NoiseSpec};

    #[test]
    fn empty_mask_counts_nothing() {
        let img = Image::filled(4, 4, 1, 0).unwrap();
        assert_eq!(count_residual_impulses(&img, &NoiseMask::new(4, 4)).unwrap(), 0);
    }

    #[test]
    fn unfiltered_noise_is_fully_residual() {
        let img = Image::filled(20, 20, 1, 128).unwrap();
        let (noisy, mask) = inject_impulse_noise(&img, &NoiseSpec::new(0.3, 5).unwrap()).unwrap();
        assert_eq!(count_residual_impulses(&noisy, &mask).unwrap(), 120);
    }

    #[test]
    fn dimension_mismatch() {
        let img = Image::filled(4, 4, 1, 0).unwrap();
        assert!(matches!(
            count_residual_impulses(&img, &NoiseMask::new(4, 3)),
            Err(MedianError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn interior_iteration() {
        assert_eq!(interior(5, 4, 1).collect::<Vec<_>>(), vec![(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2)]);
        assert_eq!(interior(2, 2, 3).count(), 0);
    }
}
