//! Row-parallel drivers shared by the image kernels.

use rayon::prelude::*;

/// How a full-image kernel walks its output rows.
///
/// Rows are disjoint output tiles reading a shared immutable input, so both
/// modes produce bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    /// Rows are spread over the current rayon pool.
    Parallel,
}

pub(crate) fn fill_rows<F>(out: &mut [u8], row_len: usize, exec: Execution, f: F)
where
    F: Fn(usize, &mut [u8]) + Sync + Send,
{
    match exec {
        Execution::Sequential => out
            .chunks_mut(row_len)
            .enumerate()
            .for_each(|(y, row)| f(y, row)),
        Execution::Parallel => out
            .par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(y, row)| f(y, row)),
    }
}
