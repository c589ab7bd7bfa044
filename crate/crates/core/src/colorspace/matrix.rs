use std::fmt;
use std::str::FromStr;

use super::ColorError;

/// Target spaces reachable from RGB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorSpace {
    Ycc,
    Yiq,
    Yuv,
    Cmy,
}

impl ColorSpace {
    pub const ALL: [ColorSpace; 4] = [ColorSpace::Ycc, ColorSpace::Yiq, ColorSpace::Yuv, ColorSpace::Cmy];

    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Ycc => "ycc",
            ColorSpace::Yiq => "yiq",
            ColorSpace::Yuv => "yuv",
            ColorSpace::Cmy => "cmy",
        }
    }
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColorSpace {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ColorSpace::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ColorError::UnknownMatrix(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// RGB → space
    Forward,
    /// space → RGB
    Inverse,
}

/// Chroma planes are biased by this amount so they fit unsigned 8 bits.
pub const CHROMA_BIAS: f64 = 128.0;

/// Q8.8: one unit is 1/256.
pub const Q88_ONE: i32 = 256;

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

// Canonical coefficient rows. Signed chroma rows whose excursion over 8-bit
// RGB exceeds ±127.5 are rescaled in `normalise_chroma`.
const YIQ: [[f64; 3]; 3] = [LUMA, [0.596, -0.274, -0.322], [0.212, -0.523, 0.311]];
const YUV: [[f64; 3]; 3] = [LUMA, [-0.147, -0.289, 0.436], [0.615, -0.515, -0.100]];
const YCC: [[f64; 3]; 3] = [
    LUMA,
    [-0.168736, -0.331264, 0.5],
    [0.5, -0.418688, -0.081312],
];

/// A 3×3 affine colour transform kept both as reals and as Q8.8 integers.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorMatrix {
    space: ColorSpace,
    direction: Direction,
    coeffs_real: [[f64; 3]; 3],
    offsets_real: [f64; 3],
    coeffs_q88: [[i16; 3]; 3],
    offsets_q88: [i32; 3],
}

impl ColorMatrix {
    /// The registered RGB → `space` transform.
    pub fn forward(space: ColorSpace) -> Self {
        let (coeffs, offsets) = match space {
            ColorSpace::Ycc => (YCC, [0.0, CHROMA_BIAS, CHROMA_BIAS]),
            ColorSpace::Yiq => (normalise_chroma(YIQ), [0.0, CHROMA_BIAS, CHROMA_BIAS]),
            ColorSpace::Yuv => (normalise_chroma(YUV), [0.0, CHROMA_BIAS, CHROMA_BIAS]),
            ColorSpace::Cmy => (
                [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
                [255.0; 3],
            ),
        };
        Self::from_real(space, Direction::Forward, coeffs, offsets)
    }

    /// Looks up a forward matrix by its CLI name.
    pub fn by_name(name: &str) -> Result<Self, ColorError> {
        name.parse().map(Self::forward)
    }

    fn from_real(
        space: ColorSpace,
        direction: Direction,
        coeffs_real: [[f64; 3]; 3],
        offsets_real: [f64; 3],
    ) -> Self {
        let mut coeffs_q88 = coeffs_real.map(|row| row.map(to_q88_coeff));
        if direction == Direction::Forward && space != ColorSpace::Cmy {
            balance_luma_row(&mut coeffs_q88[0], &coeffs_real[0]);
        }
        let offsets_q88 = offsets_real.map(|o| (o * f64::from(Q88_ONE)).round() as i32);
        Self {
            space,
            direction,
            coeffs_real,
            offsets_real,
            coeffs_q88,
            offsets_q88,
        }
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn coeffs_real(&self) -> &[[f64; 3]; 3] {
        &self.coeffs_real
    }

    pub fn offsets_real(&self) -> &[f64; 3] {
        &self.offsets_real
    }

    pub fn coeffs_q88(&self) -> &[[i16; 3]; 3] {
        &self.coeffs_q88
    }

    pub fn offsets_q88(&self) -> &[i32; 3] {
        &self.offsets_q88
    }

    /// CMY is evaluated as an exact complement rather than through the matrix.
    pub fn is_complement(&self) -> bool {
        self.space == ColorSpace::Cmy
    }

    pub fn name(&self) -> String {
        match self.direction {
            Direction::Forward => self.space.name().to_string(),
            Direction::Inverse => format!("{}-inverse", self.space.name()),
        }
    }
}

/// Scales every signed chroma row whose extreme response to 8-bit RGB would
/// leave `[-127.5, 127.5]`, so that the biased plane fits one byte.
fn normalise_chroma(mut rows: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    for row in rows.iter_mut().skip(1) {
        let pos: f64 = row.iter().filter(|c| **c > 0.0).sum();
        let neg: f64 = -row.iter().filter(|c| **c < 0.0).sum::<f64>();
        let reach = pos.max(neg);
        if reach > 0.5 {
            let scale = 0.5 / reach;
            row.iter_mut().for_each(|c| *c *= scale);
        }
    }
    rows
}

fn to_q88_coeff(c: f64) -> i16 {
    (c * f64::from(Q88_ONE)).round() as i16
}

/// Forces the luminance row to sum to exactly 1.0 in Q8.8 by moving the
/// rounding residual onto the largest coefficient, so gray maps to gray.
fn balance_luma_row(q: &mut [i16; 3], real: &[f64; 3]) {
    let residual = Q88_ONE - q.iter().map(|&c| i32::from(c)).sum::<i32>();
    if residual != 0 {
        let largest = (0..3)
            .max_by(|&a, &b| real[a].abs().total_cmp(&real[b].abs()))
            .expect("three coefficients");
        q[largest] += residual as i16;
    }
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some(adj.map(|row| row.map(|v| v / det)))
}

/// Inverse transform: coefficients `M⁻¹` and offsets `-M⁻¹·o`, so the
/// composition with `m` is the identity in exact arithmetic. The complement
/// is its own inverse.
pub fn inverse_matrix(m: &ColorMatrix) -> Result<ColorMatrix, ColorError> {
    let direction = match m.direction {
        Direction::Forward => Direction::Inverse,
        Direction::Inverse => Direction::Forward,
    };
    if m.is_complement() {
        return Ok(ColorMatrix {
            direction,
            ..m.clone()
        });
    }
    let inv = invert3(&m.coeffs_real).ok_or_else(|| ColorError::Singular(m.name()))?;
    let offsets = std::array::from_fn(|i| -(0..3).map(|j| inv[i][j] * m.offsets_real[j]).sum::<f64>());
    Ok(ColorMatrix::from_real(m.space, direction, inv, offsets))
}
