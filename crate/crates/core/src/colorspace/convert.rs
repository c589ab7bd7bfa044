use std::fmt;
use std::str::FromStr;

use crate::exec::{fill_rows, Execution};
use crate::pixel_io::Image;

use super::matrix::ColorMatrix;
use super::ColorError;

/// Three 8-bit channels whose meaning depends on the active space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PixelTriple(pub [u8; 3]);

/// Arithmetic used to evaluate a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ArithPath {
    Real,
    #[default]
    Q88,
}

impl ArithPath {
    pub fn name(self) -> &'static str {
        match self {
            ArithPath::Real => "real",
            ArithPath::Q88 => "q88",
        }
    }
}

impl fmt::Display for ArithPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArithPath {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(ArithPath::Real),
            "q88" => Ok(ArithPath::Q88),
            other => Err(ColorError::UnknownPath(other.to_string())),
        }
    }
}

#[inline]
fn complement(p: PixelTriple) -> PixelTriple {
    PixelTriple(p.0.map(|v| 255 - v))
}

/// `clamp(round_half_up(M·p + o))` in double precision.
pub fn convert_pixel_real(p: PixelTriple, m: &ColorMatrix) -> PixelTriple {
    if m.is_complement() {
        return complement(p);
    }
    let c = m.coeffs_real();
    let o = m.offsets_real();
    let input = p.0.map(f64::from);
    PixelTriple(std::array::from_fn(|i| {
        let v = c[i][0] * input[0] + c[i][1] * input[1] + c[i][2] * input[2] + o[i];
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    }))
}

/// Q8.8 evaluation: 8-bit sample × 16-bit coefficient products accumulated in
/// 32 bits, rounded half-up by adding 128 before the shift, then clamped.
#[inline]
pub fn convert_pixel_q88(p: PixelTriple, m: &ColorMatrix) -> PixelTriple {
    if m.is_complement() {
        return complement(p);
    }
    let c = m.coeffs_q88();
    let o = m.offsets_q88();
    let [r, g, b] = p.0.map(i32::from);
    PixelTriple(std::array::from_fn(|i| {
        let acc = i32::from(c[i][0]) * r + i32::from(c[i][1]) * g + i32::from(c[i][2]) * b + o[i] + 128;
        (acc >> 8).clamp(0, 255) as u8
    }))
}

pub fn convert_pixel(p: PixelTriple, m: &ColorMatrix, path: ArithPath) -> PixelTriple {
    match path {
        ArithPath::Real => convert_pixel_real(p, m),
        ArithPath::Q88 => convert_pixel_q88(p, m),
    }
}

/// Converts interleaved RGB samples in place-order into `out`.
pub(crate) fn convert_samples(input: &[u8], out: &mut [u8], m: &ColorMatrix, path: ArithPath) {
    for (src, dst) in input.chunks_exact(3).zip(out.chunks_exact_mut(3)) {
        let p = PixelTriple([src[0], src[1], src[2]]);
        dst.copy_from_slice(&convert_pixel(p, m, path).0);
    }
}

pub fn convert_image(
    img: &Image,
    m: &ColorMatrix,
    path: ArithPath,
    exec: Execution,
) -> Result<Image, ColorError> {
    if img.channels() != 3 {
        return Err(ColorError::UnsupportedInput(img.channels()));
    }
    let row_len = img.width() * 3;
    let mut out = vec![0u8; img.samples().len()];
    fill_rows(&mut out, row_len, exec, |y, row| {
        convert_samples(img.row(y), row, m, path);
    });
    Ok(Image::new(img.width(), img.height(), 3, out).expect("same geometry as input"))
}
