use crate::exec::{fill_rows, Execution};
use crate::pixel_io::Image;

use super::window::fill_window;
use super::MedianError;

/// Window bounds for the adaptive filter. Both sizes are odd, `3 ≤ initial ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveParams {
    initial_window: usize,
    max_window: usize,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self {
            initial_window: 3,
            max_window: 7,
        }
    }
}

impl AdaptiveParams {
    pub fn new(initial_window: usize, max_window: usize) -> Result<Self, MedianError> {
        if initial_window < 3 || initial_window.is_multiple_of(2) || max_window.is_multiple_of(2) {
            return Err(MedianError::InvalidArgument(format!(
                "adaptive windows must be odd and at least 3, got {initial_window}..{max_window}"
            )));
        }
        if max_window < initial_window {
            return Err(MedianError::InvalidArgument(format!(
                "max window {max_window} is smaller than initial window {initial_window}"
            )));
        }
        Ok(Self {
            initial_window,
            max_window,
        })
    }

    pub fn initial_window(&self) -> usize {
        self.initial_window
    }

    pub fn max_window(&self) -> usize {
        self.max_window
    }

    /// Distance from the border beyond which no grown window needs padding.
    pub fn interior_margin(&self) -> usize {
        self.max_window / 2
    }
}

/// Two-level adaptive median filter with zero padding at every window size.
///
/// Level A grows the window until its median is strictly between its minimum
/// and maximum (falling back to the median once `max_window` is exceeded).
/// Level B then keeps the centre pixel unless it equals one of the extremes.
pub fn adaptive_median_filter(
    img: &Image,
    params: &AdaptiveParams,
    exec: Execution,
) -> Result<Image, MedianError> {
    if !img.is_gray() {
        return Err(MedianError::UnsupportedInput(img.channels()));
    }
    let mut out = vec![0u8; img.pixel_count()];
    fill_rows(&mut out, img.width(), exec, |y, row| {
        let mut scratch = vec![0u8; params.max_window * params.max_window];
        for (x, dst) in row.iter_mut().enumerate() {
            *dst = adaptive_pixel(img, x, y, params, &mut scratch);
        }
    });
    Ok(Image::new(img.width(), img.height(), 1, out).expect("same geometry as input"))
}

fn adaptive_pixel(
    img: &Image,
    x: usize,
    y: usize,
    params: &AdaptiveParams,
    scratch: &mut [u8],
) -> u8 {
    let centre = img.get(x, y, 0);
    let mut size = params.initial_window;
    loop {
        let window = &mut scratch[..size * size];
        fill_window(img, x, y, size / 2, window);
        window.sort_unstable();
        let (zmin, zmed, zmax) = (window[0], window[window.len() / 2], window[window.len() - 1]);
        if zmin < zmed && zmed < zmax {
            return if zmin < centre && centre < zmax {
                centre
            } else {
                zmed
            };
        }
        size += 2;
        if size > params.max_window {
            return zmed;
        }
    }
}
