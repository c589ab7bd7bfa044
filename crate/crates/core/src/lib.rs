//! Image kernels for impulse-noise removal and colour conversion, plus a
//! deterministic model of a small processor array that runs them.
//!
//! - [`pixel_io`]: images, PGM/PPM files, salt-and-pepper noise
//! - [`median`]: naive, sorting-network, pseudo-median and adaptive filters
//! - [`colorspace`]: RGB → YCC / YIQ / YUV / CMY in real and Q8.8 arithmetic
//! - [`scpa`]: master/worker array simulation with a cycle-cost ledger
//! - [`dvr`]: noisy-frame pipeline with side-by-side composites
//! - [`cli`]: the `scpa` command-line tool

pub mod bench;
pub mod cli;
pub mod colorspace;
pub mod dvr;
pub mod exec;
pub mod median;
pub mod pixel_io;
pub mod scpa;

pub use exec::Execution;
