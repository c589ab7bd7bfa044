use std::fmt;
use std::str::FromStr;

use crate::exec::{fill_rows, Execution};
use crate::pixel_io::Image;

use super::kernels::{median9_approx, median9_naive};
use super::network::median9_widereg_window;
use super::{MedianError, Window3x3};

/// Which 3×3 median the sliding-window driver applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Naive,
    WideReg,
    Approx,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::Naive, Kernel::WideReg, Kernel::Approx];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Naive => "naive",
            Kernel::WideReg => "widereg",
            Kernel::Approx => "approx",
        }
    }

    #[inline]
    pub fn apply(self, w: &Window3x3) -> u8 {
        match self {
            Kernel::Naive => median9_naive(w),
            Kernel::WideReg => median9_widereg_window(w),
            Kernel::Approx => median9_approx(w),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = MedianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kernel::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MedianError::InvalidArgument(format!("unknown median kernel '{s}'")))
    }
}

/// Replaces every pixel, borders included, with `kernel` applied to its
/// zero-padded 3×3 window of the input.
pub fn median_filter(img: &Image, kernel: Kernel, exec: Execution) -> Result<Image, MedianError> {
    if !img.is_gray() {
        return Err(MedianError::UnsupportedInput(img.channels()));
    }
    let width = img.width();
    let mut out = vec![0u8; img.pixel_count()];
    // Monomorphise per kernel so the inner loop has no dispatch.
    match kernel {
        Kernel::Naive => run(img, &mut out, exec, median9_naive),
        Kernel::WideReg => run(img, &mut out, exec, median9_widereg_window),
        Kernel::Approx => run(img, &mut out, exec, median9_approx),
    }
    Ok(Image::new(width, img.height(), 1, out).expect("same geometry as input"))
}

fn run<F>(img: &Image, out: &mut [u8], exec: Execution, kernel: F)
where
    F: Fn(&Window3x3) -> u8 + Sync + Send,
{
    fill_rows(out, img.width(), exec, |y, row| {
        for (x, dst) in row.iter_mut().enumerate() {
            *dst = kernel(&Window3x3::around(img, x, y));
        }
    });
}
