use crate::pixel_io::Image;

use super::MedianError;

/// A 3×3 neighbourhood in row-major order: NW, N, NE, W, C, E, SW, S, SE.
/// Cells that fall outside the image hold 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Window3x3(pub [u8; 9]);

impl Window3x3 {
    pub const CENTER: usize = 4;

    /// Zero-padded window around `(x, y)` of a grayscale image.
    #[inline]
    pub fn around(img: &Image, x: usize, y: usize) -> Self {
        let mut values = [0u8; 9];
        fill_window(img, x, y, 1, &mut values);
        Self(values)
    }

    #[inline]
    pub fn values(&self) -> &[u8; 9] {
        &self.0
    }
}

/// Returns the `size × size` zero-padded neighbourhood centred on `(x, y)`.
pub fn extract_window(img: &Image, x: usize, y: usize, size: usize) -> Result<Vec<u8>, MedianError> {
    if !img.is_gray() {
        return Err(MedianError::UnsupportedInput(img.channels()));
    }
    if size.is_multiple_of(2) {
        return Err(MedianError::InvalidArgument(format!(
            "window size must be odd, got {size}"
        )));
    }
    if x >= img.width() || y >= img.height() {
        return Err(MedianError::InvalidArgument(format!(
            "centre ({x}, {y}) lies outside a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let mut values = vec![0u8; size * size];
    fill_window(img, x, y, size / 2, &mut values);
    Ok(values)
}

/// Writes the `(2r+1)²` neighbourhood of `(x, y)` into `out`, zero outside the image.
#[inline]
pub(crate) fn fill_window(img: &Image, x: usize, y: usize, radius: usize, out: &mut [u8]) {
    let side = 2 * radius + 1;
    debug_assert_eq!(out.len(), side * side);
    let (w, h) = (img.width(), img.height());
    let samples = img.samples();
    let interior = x >= radius && y >= radius && x + radius < w && y + radius < h;
    if interior {
        for (dy, dst) in out.chunks_exact_mut(side).enumerate() {
            let start = (y + dy - radius) * w + x - radius;
            dst.copy_from_slice(&samples[start..start + side]);
        }
        return;
    }
    for dy in 0..side {
        for dx in 0..side {
            let sx = (x + dx).checked_sub(radius);
            let sy = (y + dy).checked_sub(radius);
            out[dy * side + dx] = match (sx, sy) {
                (Some(sx), Some(sy)) if sx < w && sy < h => samples[sy * w + sx],
                _ => 0,
            };
        }
    }
}
