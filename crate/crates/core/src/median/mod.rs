//! The 3×3 median family and the adaptive median filter.
//!
//! Every kernel treats out-of-image window cells as 0, for all window sizes.

mod adaptive;
mod filter;
mod kernels;
mod network;
mod residual;
mod window;

pub use adaptive::{adaptive_median_filter, AdaptiveParams};
pub use filter::{median_filter, Kernel};
pub use kernels::{median9_approx, median9_naive};
pub use network::{
    median9_widereg, run_median9_network, WideRegister, MEDIAN9_NETWORK, WIDE_REGISTER_LANES,
};
pub use residual::{
    count_altered_clean, count_residual_impulses, count_residual_impulses_interior, interior,
};
pub use window::{extract_window, Window3x3};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MedianError {
    #[error("median filters take grayscale images only (got {0} channels)")]
    UnsupportedInput(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("mask is {mask:?} but image is {image:?}")]
    DimensionMismatch {
        image: (usize, usize),
        mask: (usize, usize),
    },
}
