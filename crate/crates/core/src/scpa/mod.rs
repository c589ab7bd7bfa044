//! Simulated processor array: a PE0 master scatters an RGB image to worker
//! PEs, each runs one colour conversion, and the master gathers the results.
//! Message passing is by value through per-PE mailboxes; a cost ledger turns
//! operation and message-word counts into pixels per compute-cycle.

mod ledger;
mod message;
mod runtime;
mod table;

pub use ledger::{
    ops_per_pixel, CostLedger, CostWeights, LedgerReport, OpCounts, PeCounters, ThroughputRow,
};
pub use message::{Control, Message, Payload, Tile, WORD_BYTES};
pub use runtime::{ChannelStats, Runtime, StepOutcome, TraceEvent, TraceKind};
pub use table::{PeId, TaskEntry, TaskRole, TaskTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScpaError {
    #[error("malformed task table{}: {reason}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    MalformedTable { line: Option<usize>, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the array needs an RGB image (got {0} channels)")]
    UnsupportedInput(usize),
    #[error("an image has already been scattered on this runtime")]
    AlreadyScattered,
    #[error("gather called before scatter")]
    NotScattered,
    #[error("results were already gathered")]
    ResultsConsumed,
    #[error("no PE can make progress but the master has not finished")]
    Stalled,
    #[error("worker {pe} failed: {reason}")]
    WorkerFailure { pe: PeId, reason: String },
    #[error("the run has not completed")]
    RunIncomplete,
}
