//! Image representation, Netpbm I/O and impulse-noise injection.

mod image;
mod noise;
mod pnm;

pub use image::{Image, ImageError, NoiseMask};
pub use noise::{inject_impulse_noise, NoiseError, NoiseSpec, PEPPER, SALT};
pub use pnm::{decode, encode, read_image, write_image, PnmError};
