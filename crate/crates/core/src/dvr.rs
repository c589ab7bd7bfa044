//! Real-time frame loop: each frame gets impulse noise, is cleaned by the
//! adaptive median filter, and is written as a side-by-side composite
//! (noisy left, filtered right). Frame timings are compared with a target
//! frame rate.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::exec::Execution;
use crate::median::{adaptive_median_filter, count_residual_impulses_interior, AdaptiveParams, MedianError};
use crate::pixel_io::{inject_impulse_noise, read_image, write_image, Image, NoiseError, NoiseSpec, PnmError};

pub const DEFAULT_FPS: f64 = 30.0;

/// Odd multiplier used to decorrelate per-frame seeds.
pub const FRAME_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, thiserror::Error)]
pub enum DvrError {
    #[error("invalid frame source: {0}")]
    InvalidSource(String),
    #[error(transparent)]
    Io(#[from] PnmError),
    #[error("i/o failure on {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Filter(#[from] MedianError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("the pipeline report has no frames")]
    EmptyReport,
}

/// Frame geometries standing in for the usual capture formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 352×288
    Cif,
    /// 640×480
    Ntsc,
    /// 704×576
    Pal,
}

impl Preset {
    pub fn dimensions(self) -> (usize, usize) {
        match self {
            Preset::Cif => (352, 288),
            Preset::Ntsc => (640, 480),
            Preset::Pal => (704, 576),
        }
    }
}

impl FromStr for Preset {
    type Err = DvrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cif" => Ok(Preset::Cif),
            "ntsc" => Ok(Preset::Ntsc),
            "pal" => Ok(Preset::Pal),
            other => Err(DvrError::InvalidSource(format!("unknown preset '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    /// Diagonal ramp in [16, 239] drifting by one level per frame.
    Gradient,
    /// Two-level 8-pixel checkerboard scrolling one column per frame.
    Checkerboard,
    /// Grayscale PGM files, one per frame.
    Files(Vec<PathBuf>),
}

impl FromStr for Pattern {
    type Err = DvrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gradient" => Ok(Pattern::Gradient),
            "checkerboard" => Ok(Pattern::Checkerboard),
            other => Err(DvrError::InvalidSource(format!("unknown pattern '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSource {
    width: usize,
    height: usize,
    frame_count: usize,
    pattern: Pattern,
    fps_target: f64,
}

impl FrameSource {
    pub fn new(
        width: usize,
        height: usize,
        frame_count: usize,
        pattern: Pattern,
        fps_target: f64,
    ) -> Result<Self, DvrError> {
        if width == 0 || height == 0 {
            return Err(DvrError::InvalidSource(format!("empty geometry {width}x{height}")));
        }
        if frame_count == 0 {
            return Err(DvrError::InvalidSource("frame_count must be at least 1".into()));
        }
        if !(fps_target > 0.0 && fps_target.is_finite()) {
            return Err(DvrError::InvalidSource(format!("fps target {fps_target} must be positive")));
        }
        if let Pattern::Files(files) = &pattern {
            if files.len() < frame_count {
                return Err(DvrError::InvalidSource(format!(
                    "{frame_count} frames requested but only {} files given",
                    files.len()
                )));
            }
        }
        Ok(Self {
            width,
            height,
            frame_count,
            pattern,
            fps_target,
        })
    }

    pub fn preset(preset: Preset, frame_count: usize, pattern: Pattern) -> Result<Self, DvrError> {
        let (w, h) = preset.dimensions();
        Self::new(w, h, frame_count, pattern, DEFAULT_FPS)
    }

    /// A file sequence; geometry is taken from the first file.
    pub fn from_files(files: Vec<PathBuf>, fps_target: f64) -> Result<Self, DvrError> {
        let first = files
            .first()
            .ok_or_else(|| DvrError::InvalidSource("no input files".into()))?;
        let img = read_image(first)?;
        let n = files.len();
        Self::new(img.width(), img.height(), n, Pattern::Files(files), fps_target)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn frame_count(&self) -> usize {
        self.frame_count
    }

    pub fn fps_target(&self) -> f64 {
        self.fps_target
    }

    /// Grabs frame `k`.
    pub fn frame(&self, k: usize) -> Result<Image, DvrError> {
        let (w, h) = (self.width, self.height);
        let img = match &self.pattern {
            Pattern::Gradient => {
                let span = (w + h).saturating_sub(2).max(1);
                let drift = (k % 16) as i64 - 8;
                Image::from_fn_gray(w, h, |x, y| {
                    let base = 16 + ((x + y) * 223 / span) as i64;
                    (base + drift).clamp(16, 239) as u8
                })
            }
            Pattern::Checkerboard => Image::from_fn_gray(w, h, |x, y| {
                if ((x + k) / 8 + y / 8).is_multiple_of(2) {
                    60
                } else {
                    190
                }
            }),
            Pattern::Files(files) => {
                let img = read_image(&files[k])?;
                if !img.is_gray() || img.width() != w || img.height() != h {
                    return Err(DvrError::InvalidSource(format!(
                        "{} is not a {w}x{h} grayscale frame",
                        files[k].display()
                    )));
                }
                return Ok(img);
            }
        };
        Ok(img.expect("geometry validated at construction"))
    }
}

/// Seed for frame `k`, so any frame can be reproduced on its own.
pub fn frame_seed(base_seed: u64, k: usize) -> u64 {
    base_seed ^ (k as u64).wrapping_mul(FRAME_SEED_STRIDE)
}

/// `left | right`, both grayscale with equal geometry.
pub fn composite(left: &Image, right: &Image) -> Image {
    assert_eq!((left.width(), left.height()), (right.width(), right.height()));
    let w = left.width();
    let mut samples = Vec::with_capacity(2 * left.samples().len());
    for y in 0..left.height() {
        samples.extend_from_slice(left.row(y));
        samples.extend_from_slice(right.row(y));
    }
    Image::new(2 * w, left.height(), 1, samples).expect("doubled width is valid")
}

pub fn frame_file_name(k: usize) -> String {
    format!("frame_{k:05}.pgm")
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub index: usize,
    /// Noise + filter + composite time.
    pub ms: f64,
    pub corrupted: usize,
    /// Masked pixels at least `max_window / 2` from the border still at 0 or 255.
    pub residual_impulses: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub frames: Vec<FrameRecord>,
    pub fps_target: f64,
}

impl PipelineReport {
    pub fn total_seconds(&self) -> f64 {
        self.frames.iter().map(|f| f.ms).sum::<f64>() / 1000.0
    }

    /// `frame_index,ms,residual_impulses`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame_index,ms,residual_impulses\n");
        for f in &self.frames {
            let _ = writeln!(out, "{},{:.3},{}", f.index, f.ms, f.residual_impulses);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpsSummary {
    pub achieved_fps: f64,
    pub fps_target: f64,
    pub pass: bool,
}

pub fn fps_report(report: &PipelineReport) -> Result<FpsSummary, DvrError> {
    if report.frames.is_empty() {
        return Err(DvrError::EmptyReport);
    }
    let seconds = report.total_seconds();
    let achieved_fps = if seconds > 0.0 {
        report.frames.len() as f64 / seconds
    } else {
        f64::INFINITY
    };
    Ok(FpsSummary {
        achieved_fps,
        fps_target: report.fps_target,
        pass: achieved_fps >= report.fps_target,
    })
}

/// Processes every frame in order and writes `frame_NNNNN.pgm` composites plus
/// `report.csv` into `out_dir`.
pub fn run_pipeline(
    src: &FrameSource,
    noise: &NoiseSpec,
    params: &AdaptiveParams,
    out_dir: &Path,
    exec: Execution,
) -> Result<PipelineReport, DvrError> {
    fs::create_dir_all(out_dir).map_err(|source| DvrError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let margin = params.interior_margin();
    let mut frames = Vec::with_capacity(src.frame_count());
    for k in 0..src.frame_count() {
        let frame = src.frame(k)?;
        let spec = NoiseSpec::new(noise.density(), frame_seed(noise.seed, k))?;
        let started = Instant::now();
        let (noisy, mask) = inject_impulse_noise(&frame, &spec)?;
        let filtered = adaptive_median_filter(&noisy, params, exec)?;
        let out = composite(&noisy, &filtered);
        let ms = started.elapsed().as_secs_f64() * 1000.0;
        write_image(&out, out_dir.join(frame_file_name(k)), false)?;
        frames.push(FrameRecord {
            index: k,
            ms,
            corrupted: mask.count(),
            residual_impulses: count_residual_impulses_interior(&filtered, &mask, margin)?,
        });
    }
    let report = PipelineReport {
        frames,
        fps_target: src.fps_target(),
    };
    let csv_path = out_dir.join("report.csv");
    fs::write(&csv_path, report.to_csv()).map_err(|source| DvrError::Write {
        path: csv_path,
        source,
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report_with(frames: usize, total_ms: f64) -> PipelineReport {
        PipelineReport {
            frames: (0..frames)
                .map(|index| FrameRecord {
                    index,
                    ms: total_ms / frames as f64,
                    corrupted: 0,
                    residual_impulses: 0,
                })
                .collect(),
            fps_target: DEFAULT_FPS,
        }
    }

    #[test]
    fn fps_arithmetic() {
        let fast = fps_report(&report_with(30, 500.0)).unwrap();
        assert!((fast.achieved_fps - 60.0).abs() < 1e-9);
        assert!(fast.pass);
        let slow = fps_report(&report_with(30, 2000.0)).unwrap();
        assert!((slow.achieved_fps - 15.0).abs() < 1e-9);
        assert!(!slow.pass);
        assert!(matches!(fps_report(&report_with(0, 0.0)), Err(DvrError::EmptyReport)));
    }

    #[test]
    fn composite_geometry() {
        let l = Image::filled(3, 2, 1, 1).unwrap();
        let r = Image::filled(3, 2, 1, 2).unwrap();
        let c = composite(&l, &r);
        assert_eq!((c.width(), c.height()), (6, 2));
        assert_eq!(c.row(1), &[1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn frame_seeds_differ_and_are_stable() {
        assert_eq!(frame_seed(7, 0), 7);
        assert_ne!(frame_seed(7, 1), frame_seed(7, 2));
        assert_eq!(frame_seed(7, 3), 7 ^ 3u64.wrapping_mul(FRAME_SEED_STRIDE));
    }

    #[test]
    fn synthetic_frames_avoid_impulse_levels() {
        for pattern in [Pattern::Gradient, Pattern::Checkerboard] {
            let src = FrameSource::new(40, 30, 20, pattern, DEFAULT_FPS).unwrap();
            for k in [0, 5, 19] {
                assert!(src.frame(k).unwrap().samples().iter().all(|&v| v != 0 && v != 255));
            }
        }
    }

    #[test]
    fn source_validation() {
        assert!(FrameSource::new(8, 8, 0, Pattern::Gradient, 30.0).is_err());
        assert!(FrameSource::new(8, 8, 1, Pattern::Gradient, 0.0).is_err());
        assert!(FrameSource::new(0, 8, 1, Pattern::Gradient, 30.0).is_err());
        assert!(FrameSource::new(8, 8, 2, Pattern::Files(vec!["a.pgm".into()]), 30.0).is_err());
        assert_eq!(Preset::Cif.dimensions(), (352, 288));
        assert!("secam".parse::<Preset>().is_err());
    }
}
