//! Wall-clock comparison of the sorting-network median against the
//! sort-based median. Only output equality is checked; the speedup is
//! reported as measured.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::exec::Execution;
use crate::median::{median_filter, Kernel, MedianError};
use crate::pixel_io::Image;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub repetitions: usize,
    /// Mean milliseconds per full-image pass.
    pub naive_ms: f64,
    pub widereg_ms: f64,
    pub identical: bool,
}

impl BenchRow {
    pub fn speedup(&self) -> f64 {
        self.naive_ms / self.widereg_ms
    }
}

/// Random grayscale test image.
pub fn random_gray(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let samples = (0..width * height).map(|_| rng.gen()).collect();
    Image::new(width, height, 1, samples).expect("positive geometry")
}

fn time_ms<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1000.0)
}

/// Times both kernels on a `size × size` random image per entry of `sizes`.
pub fn run_bench(sizes: &[usize], repetitions: usize, seed: u64) -> Result<Vec<BenchRow>, MedianError> {
    if repetitions == 0 {
        return Err(MedianError::InvalidArgument("repetitions must be at least 1".into()));
    }
    if let Some(bad) = sizes.iter().find(|&&s| s == 0) {
        return Err(MedianError::InvalidArgument(format!("image size {bad} must be positive")));
    }
    sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let img = random_gray(size, size, seed.wrapping_add(i as u64));
            let mut naive_total = 0.0;
            let mut wide_total = 0.0;
            let mut identical = true;
            for _ in 0..repetitions {
                let (naive, t_naive) = time_ms(|| median_filter(&img, Kernel::Naive, Execution::Sequential));
                let (wide, t_wide) = time_ms(|| median_filter(&img, Kernel::WideReg, Execution::Sequential));
                identical &= naive? == wide?;
                naive_total += t_naive;
                wide_total += t_wide;
            }
            Ok(BenchRow {
                size,
                repetitions,
                naive_ms: naive_total / repetitions as f64,
                widereg_ms: wide_total / repetitions as f64,
                identical,
            })
        })
        .collect()
}

pub struct BenchTable<'a>(pub &'a [BenchRow]);

impl fmt::Display for BenchTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>10} {:>5} {:>12} {:>12} {:>9} {:>10}",
            "size", "reps", "naive_ms", "widereg_ms", "speedup", "identical"
        )?;
        for r in self.0 {
            writeln!(
                f,
                "{:>10} {:>5} {:>12.3} {:>12.3} {:>8.2}x {:>10}",
                format!("{0}x{0}", r.size),
                r.repetitions,
                r.naive_ms,
                r.widereg_ms,
                r.speedup(),
                r.identical
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_checks_equivalence() {
        let rows = run_bench(&[8, 17], 2, 3).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.identical && r.speedup().is_finite()));
        let table = BenchTable(&rows).to_string();
        assert!(table.contains("speedup") && table.contains("17x17"));
    }

    #[test]
    fn zero_repetitions_rejected() {
        assert!(run_bench(&[8], 0, 0).is_err());
        assert!(run_bench(&[0], 1, 0).is_err());
    }
}
