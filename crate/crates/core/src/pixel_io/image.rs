use std::fmt;

/// Errors raised when an image or mask is constructed with inconsistent geometry.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    UnsupportedChannels(usize),
    #[error("sample buffer holds {actual} values, geometry requires {expected}")]
    SampleCount { expected: usize, actual: usize },
}

/// An 8-bit raster, row-major, with 1 (gray) or 3 (RGB) interleaved channels.
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        samples: Vec<u8>,
    ) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(ImageError::UnsupportedChannels(channels));
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(ImageError::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(
        width: usize,
        height: usize,
        channels: usize,
        value: u8,
    ) -> Result<Self, ImageError> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds a grayscale image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn_gray(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, ImageError> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, 1, samples)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    #[inline]
    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// Samples of one row, `width * channels` long.
    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        let stride = self.width * self.channels;
        &self.samples[y * stride..(y + 1) * stride]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.samples[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: u8) {
        self.samples[(y * self.width + x) * self.channels + c] = value;
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Sample dumps of real frames are unreadable; show a prefix only.
        const SHOWN: usize = 16;
        let head = &self.samples[..self.samples.len().min(SHOWN)];
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .field("samples", &format_args!("{head:?}{}", if self.samples.len() > SHOWN { "…" } else { "" }))
            .finish()
    }
}

/// Per-pixel boolean raster marking corrupted positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl NoiseMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set_index(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Renders the mask as a grayscale image, 255 where set.
    pub fn to_image(&self) -> Image {
        let samples = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        Image::new(self.width, self.height, 1, samples).expect("mask geometry is valid")
    }
}
