//! `scpa` command-line tool.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, BenchTable};
use crate::colorspace::{convert_image, inverse_matrix, ArithPath, ColorMatrix, ColorSpace};
use crate::dvr::{fps_report, run_pipeline, FrameSource, Pattern, Preset};
use crate::exec::Execution;
use crate::median::{adaptive_median_filter, median_filter, AdaptiveParams, Kernel};
use crate::pixel_io::{inject_impulse_noise, read_image, write_image, Image, NoiseSpec};
use crate::scpa::{CostWeights, Runtime, TaskTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scpa", version, about = "Median filtering, colour conversion and processor-array simulation")]
struct Cli {
    /// Worker threads for row-parallel kernels (1 = single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add salt-and-pepper noise to a PGM; also writes a mask sidecar.
    Noise(NoiseArgs),
    /// Median-filter a PGM.
    Median(MedianArgs),
    /// Convert a PPM to another colour space.
    Convert(ConvertArgs),
    /// Run the colour conversions on the simulated processor array.
    Scpa(ScpaArgs),
    /// Run the noisy-frame pipeline and write side-by-side composites.
    Dvr(DvrArgs),
    /// Time the sorting-network median against the sort-based one.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct NoiseArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mask path; defaults to `<output stem>.mask.pgm`.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Write ASCII (P2) instead of binary.
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Args)]
struct AdaptiveArgs {
    #[arg(long, default_value_t = 3)]
    initial_window: usize,
    #[arg(long, default_value_t = 7)]
    max_window: usize,
}

#[derive(Debug, Args)]
struct MedianArgs {
    input: PathBuf,
    output: PathBuf,
    /// naive | widereg | approx | adaptive
    #[arg(long, default_value = "widereg")]
    kernel: String,
    #[command(flatten)]
    adaptive: AdaptiveArgs,
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    input: PathBuf,
    output: PathBuf,
    /// ycc | yiq | yuv | cmy
    #[arg(long)]
    space: String,
    /// real | q88
    #[arg(long, default_value = "q88")]
    path: String,
    /// Apply the inverse transform (space → RGB).
    #[arg(long)]
    inverse: bool,
    #[arg(long)]
    ascii: bool,
}

#[derive(Debug, Args)]
struct ScpaArgs {
    /// RGB input image (PPM).
    image: PathBuf,
    /// Task table file; defaults to PE0 master with YCC, YIQ and CMY workers.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    tile_rows: usize,
    /// Where to write the event trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Directory for `<space>.ppm` results and `ledger.csv`.
    #[arg(long, default_value = "scpa_out")]
    out_dir: PathBuf,
    /// Cost weight overrides, e.g. `multiply=2,message_word=4`.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Debug, Args)]
struct DvrArgs {
    /// cif | ntsc | pal
    #[arg(long, default_value = "cif")]
    preset: String,
    /// gradient | checkerboard
    #[arg(long, default_value = "gradient")]
    pattern: String,
    /// Use these PGM files as frames instead of a synthetic pattern.
    #[arg(long, num_args = 1..)]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 30)]
    frames: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30.0)]
    fps: f64,
    #[command(flatten)]
    adaptive: AdaptiveArgs,
    #[arg(long, default_value = "dvr_out")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Square image sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}

fn execution(threads: usize) -> Result<Execution, CliError> {
    match threads {
        0 => Err(usage("--threads must be at least 1")),
        1 => Ok(Execution::Sequential),
        n => {
            // A pool may already exist when called repeatedly in-process.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Execution::Parallel)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let exec = execution(cli.threads)?;
    match cli.command {
        Command::Noise(a) => cmd_noise(a),
        Command::Median(a) => cmd_median(a, exec),
        Command::Convert(a) => cmd_convert(a, exec),
        Command::Scpa(a) => cmd_scpa(a),
        Command::Dvr(a) => cmd_dvr(a, exec),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn adaptive_params(a: &AdaptiveArgs) -> Result<AdaptiveParams, CliError> {
    AdaptiveParams::new(a.initial_window, a.max_window).map_err(usage)
}

fn read_input(path: &Path) -> Result<Image, CliError> {
    read_image(path).map_err(runtime)
}

fn write_output(img: &Image, path: &Path, ascii: bool) -> Result<(), CliError> {
    write_image(img, path, ascii).map_err(runtime)
}

/// `out/noisy.pgm` → `out/noisy.mask.pgm`
pub fn mask_sidecar_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "noise".into());
    output.with_file_name(format!("{stem}.mask.pgm"))
}

fn cmd_noise(a: NoiseArgs) -> Result<(), CliError> {
    let spec = NoiseSpec::new(a.density, a.seed).map_err(usage)?;
    let img = read_input(&a.input)?;
    if !img.is_gray() {
        return Err(usage(format!(
            "noise needs a grayscale PGM, {} has {} channels",
            a.input.display(),
            img.channels()
        )));
    }
    let (noisy, mask) = inject_impulse_noise(&img, &spec).map_err(runtime)?;
    let mask_path = a.mask.unwrap_or_else(|| mask_sidecar_path(&a.output));
    write_output(&noisy, &a.output, a.ascii)?;
    write_output(&mask.to_image(), &mask_path, a.ascii)?;
    println!(
        "corrupted {} of {} pixels (density {}, seed {})",
        mask.count(),
        img.pixel_count(),
        a.density,
        a.seed
    );
    Ok(())
}

fn cmd_median(a: MedianArgs, exec: Execution) -> Result<(), CliError> {
    enum Choice {
        Fixed(Kernel),
        Adaptive(AdaptiveParams),
    }
    let choice = if a.kernel == "adaptive" {
        Choice::Adaptive(adaptive_params(&a.adaptive)?)
    } else {
        Choice::Fixed(a.kernel.parse::<Kernel>().map_err(usage)?)
    };
    let img = read_input(&a.input)?;
    if !img.is_gray() {
        return Err(usage(format!("median needs a grayscale PGM, got {} channels", img.channels())));
    }
    let out = match choice {
        Choice::Fixed(k) => median_filter(&img, k, exec),
        Choice::Adaptive(p) => adaptive_median_filter(&img, &p, exec),
    }
    .map_err(runtime)?;
    write_output(&out, &a.output, a.ascii)
}

fn cmd_convert(a: ConvertArgs, exec: Execution) -> Result<(), CliError> {
    let space: ColorSpace = a.space.parse().map_err(usage)?;
    let path: ArithPath = a.path.parse().map_err(usage)?;
    let mut matrix = ColorMatrix::forward(space);
    if a.inverse {
        matrix = inverse_matrix(&matrix).map_err(runtime)?;
    }
    let img = read_input(&a.input)?;
    if img.channels() != 3 {
        return Err(usage(format!(
            "convert needs an RGB PPM, {} has {} channel(s)",
            a.input.display(),
            img.channels()
        )));
    }
    let out = convert_image(&img, &matrix, path, exec).map_err(runtime)?;
    write_output(&out, &a.output, a.ascii)
}

/// Parses `name=value` pairs over [`CostWeights::default`].
pub fn parse_weights(spec: &str) -> Result<CostWeights, String> {
    let mut w = CostWeights::default();
    for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("weight '{pair}' is not name=value"))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| format!("weight '{pair}' needs a non-negative integer"))?;
        let slot = match key.trim() {
            "multiply" => &mut w.multiply,
            "add" => &mut w.add,
            "subtract" => &mut w.subtract,
            "compare" => &mut w.compare,
            "message_word" => &mut w.message_word,
            other => return Err(format!("unknown weight '{other}'")),
        };
        *slot = value;
    }
    Ok(w)
}

fn cmd_scpa(a: ScpaArgs) -> Result<(), CliError> {
    if a.tile_rows == 0 {
        return Err(usage("--tile-rows must be at least 1"));
    }
    let weights = match &a.weights {
        Some(s) => parse_weights(s).map_err(usage)?,
        None => CostWeights::default(),
    };
    let table = match &a.table {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
            TaskTable::parse(&text).map_err(usage)?
        }
        None => TaskTable::default_array(),
    };
    let img = read_input(&a.image)?;
    if img.channels() != 3 {
        return Err(usage("scpa needs an RGB PPM input"));
    }
    let mut rt = Runtime::with_weights(table, a.tile_rows, weights).map_err(usage)?;
    rt.scatter(&img).map_err(runtime)?;
    let results = rt.gather().map_err(runtime)?;
    let report = rt.ledger_report().map_err(runtime)?;

    fs::create_dir_all(&a.out_dir).map_err(|e| runtime(format!("{}: {e}", a.out_dir.display())))?;
    for (space, out) in &results {
        write_output(out, &a.out_dir.join(format!("{}.ppm", space.name())), false)?;
    }
    fs::write(a.out_dir.join("ledger.csv"), report.to_csv()).map_err(runtime)?;
    if let Some(trace) = &a.trace {
        fs::write(trace, rt.trace_text()).map_err(|e| runtime(format!("{}: {e}", trace.display())))?;
    }
    print!("{report}");
    let top = report.rows.iter().map(|r| r.pixels_per_cycle).fold(f64::MIN, f64::max);
    let best: Vec<&str> = report
        .rows
        .iter()
        .filter(|r| r.pixels_per_cycle == top)
        .map(|r| r.conversion.name())
        .collect();
    println!("highest pixels/cycle: {}; trace events: {}", best.join(", "), rt.trace().len());
    Ok(())
}

fn cmd_dvr(a: DvrArgs, exec: Execution) -> Result<(), CliError> {
    if a.frames == 0 {
        return Err(usage("--frames must be at least 1"));
    }
    let noise = NoiseSpec::new(a.density, a.seed).map_err(usage)?;
    let params = adaptive_params(&a.adaptive)?;
    let src = if a.files.is_empty() {
        let preset: Preset = a.preset.parse().map_err(usage)?;
        let pattern: Pattern = a.pattern.parse().map_err(usage)?;
        let (w, h) = preset.dimensions();
        FrameSource::new(w, h, a.frames, pattern, a.fps).map_err(usage)?
    } else {
        let mut files = a.files.clone();
        files.truncate(a.frames);
        FrameSource::from_files(files, a.fps).map_err(usage)?
    };
    let report = run_pipeline(&src, &noise, &params, &a.out_dir, exec).map_err(runtime)?;
    let fps = fps_report(&report).map_err(runtime)?;
    let residual: usize = report.frames.iter().map(|f| f.residual_impulses).sum();
    println!(
        "{} frames {}x{} -> {} (report.csv)",
        report.frames.len(),
        src.width(),
        src.height(),
        a.out_dir.display()
    );
    println!("residual interior impulses: {residual}");
    println!(
        "achieved {:.1} fps vs target {:.1} fps: {}",
        fps.achieved_fps,
        fps.fps_target,
        if fps.pass { "PASS" } else { "FAIL" }
    );
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    if a.repetitions == 0 {
        return Err(usage("--repetitions must be at least 1"));
    }
    if a.sizes.is_empty() || a.sizes.contains(&0) {
        return Err(usage("--sizes must list positive sizes"));
    }
    let rows = run_bench(&a.sizes, a.repetitions, a.seed).map_err(runtime)?;
    print!("{}", BenchTable(&rows));
    if let Some(bad) = rows.iter().find(|r| !r.identical) {
        return Err(runtime(format!("kernel outputs differ at size {}", bad.size)));
    }
    println!("outputs identical on every size; speedup = naive_ms / widereg_ms (reported, not asserted)");
    Ok(())
}
