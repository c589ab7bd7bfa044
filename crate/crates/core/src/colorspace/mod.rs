//! RGB → YCC / YIQ / YUV / CMY conversions in real and Q8.8 fixed-point
//! arithmetic, with inverses for round-trip checks.
//!
//! Chroma planes carry a +128 bias. YCC is full-range BT.601 YCbCr. The I, Q
//! and V rows are rescaled from their textbook values so that their biased
//! planes stay inside one byte; U already fits and is unchanged.

mod convert;
mod matrix;

pub use convert::{
    convert_image, convert_pixel, convert_pixel_q88, convert_pixel_real, ArithPath, PixelTriple,
};
pub(crate) use convert::convert_samples;
pub use matrix::{inverse_matrix, ColorMatrix, ColorSpace, Direction, CHROMA_BIAS, Q88_ONE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColorError {
    #[error("unknown colour matrix '{0}' (expected ycc, yiq, yuv or cmy)")]
    UnknownMatrix(String),
    #[error("unknown arithmetic path '{0}' (expected real or q88)")]
    UnknownPath(String),
    #[error("colour conversion needs a 3-channel image (got {0} channels)")]
    UnsupportedInput(usize),
    #[error("matrix {0} is singular")]
    Singular(String),
}
