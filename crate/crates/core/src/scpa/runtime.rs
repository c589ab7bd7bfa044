//! Cooperative, single-threaded simulation of the processor array.
//!
//! Every PE is a small state machine. [`Runtime::step`] picks the next
//! runnable PE in fixed round-robin index order and runs it for one slice,
//! which ends at exactly one traced action: starting, sending, receiving,
//! yielding after a compute burst, or finishing. Nothing depends on wall
//! time or hashing order, so a run is a pure function of its inputs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::colorspace::{convert_samples, ArithPath, ColorMatrix, ColorSpace};
use crate::pixel_io::Image;

use super::ledger::{ops_per_pixel, CostLedger, CostWeights, LedgerReport, ThroughputRow};
use super::message::{Control, Message, Payload, Tile};
use super::table::{PeId, TaskRole, TaskTable};
use super::ScpaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    TaskStart,
    Send,
    Receive,
    Yield,
    TaskDone,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::TaskStart => "task-start",
            TraceKind::Send => "send",
            TraceKind::Receive => "receive",
            TraceKind::Yield => "yield",
            TraceKind::TaskDone => "task-done",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub ordinal: u64,
    pub kind: TraceKind,
    pub pe: PeId,
    /// Other end of a send or receive.
    pub peer: Option<PeId>,
    pub seq: Option<u64>,
}

impl fmt::Display for TraceEvent {
    /// `<ordinal> <kind> pe=<n> peer=<n|-> seq=<n|->`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} pe={}", self.ordinal, self.kind.name(), self.pe.0)?;
        match self.peer {
            Some(p) => write!(f, " peer={}", p.0)?,
            None => f.write_str(" peer=-")?,
        }
        match self.seq {
            Some(s) => write!(f, " seq={s}"),
            None => f.write_str(" seq=-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Event(TraceEvent),
    /// No PE can make progress.
    Exhausted,
}

/// Traffic totals for one directed (src, dst) channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChannelStats {
    pub sent_messages: u64,
    pub received_messages: u64,
    pub sent_bytes: u64,
    pub received_bytes: u64,
    next_send_seq: u64,
    next_recv_seq: u64,
    /// Receives whose seq was not the next expected one.
    pub seq_gaps: u64,
}

#[derive(Debug)]
enum MasterState {
    NotStarted,
    AwaitingImage,
    Scattering { worker: usize, next_row: usize },
    Collecting,
    Finishing,
    Finished,
}

#[derive(Debug)]
enum WorkerState {
    NotStarted,
    Waiting,
    Converting(Tile),
    Replying(Tile),
    Reporting(Control),
    Finishing,
    Finished,
}

#[derive(Debug)]
struct Worker {
    pe: PeId,
    space: ColorSpace,
    path: ArithPath,
    matrix: ColorMatrix,
    state: WorkerState,
    pixels_done: u64,
    #[cfg(test)]
    fault: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Initialized,
    Scattered,
    Gathered,
}

/// Handle to one initialised array run.
#[derive(Debug)]
pub struct Runtime {
    table: TaskTable,
    tile_rows: usize,
    master: MasterState,
    workers: Vec<Worker>,
    /// Worker slot for each PE index; `None` for PE0.
    slot_of_pe: Vec<Option<usize>>,
    mailboxes: Vec<VecDeque<Message>>,
    channels: BTreeMap<(PeId, PeId), ChannelStats>,
    ledger: CostLedger,
    trace: Vec<TraceEvent>,
    cursor: usize,
    phase: Phase,
    input: Option<Image>,
    buffers: Vec<Vec<u8>>,
    done_reports: usize,
    failures: Vec<(PeId, String)>,
}

impl Runtime {
    pub fn init(table: TaskTable, tile_rows: usize) -> Result<Self, ScpaError> {
        Self::with_weights(table, tile_rows, CostWeights::default())
    }

    /// Builds the scheduler with PE0's task first in line and every worker idle.
    pub fn with_weights(
        table: TaskTable,
        tile_rows: usize,
        weights: CostWeights,
    ) -> Result<Self, ScpaError> {
        if tile_rows == 0 {
            return Err(ScpaError::InvalidArgument("tile_rows must be positive".into()));
        }
        let n = table.pe_count();
        let mut slot_of_pe = vec![None; n];
        let workers: Vec<Worker> = table
            .workers()
            .enumerate()
            .map(|(slot, e)| {
                let TaskRole::Convert { space, path } = e.role else {
                    unreachable!("table validation keeps the master at PE0 only")
                };
                slot_of_pe[e.pe.0] = Some(slot);
                Worker {
                    pe: e.pe,
                    space,
                    path,
                    matrix: ColorMatrix::forward(space),
                    state: WorkerState::NotStarted,
                    pixels_done: 0,
                    #[cfg(test)]
                    fault: None,
                }
            })
            .collect();
        Ok(Self {
            table,
            tile_rows,
            master: MasterState::NotStarted,
            workers,
            slot_of_pe,
            mailboxes: vec![VecDeque::new(); n],
            channels: BTreeMap::new(),
            ledger: CostLedger::new(n, weights),
            trace: Vec::new(),
            // Start just "before" PE0 so the first slice goes to the master.
            cursor: n - 1,
            phase: Phase::Initialized,
            input: None,
            buffers: Vec::new(),
            done_reports: 0,
            failures: Vec::new(),
        })
    }

    pub fn table(&self) -> &TaskTable {
        &self.table
    }

    pub fn tile_rows(&self) -> usize {
        self.tile_rows
    }

    pub fn worker_count(&self) -> usize {
        self.workers.len()
    }

    /// Workers that have not yet received anything to work on.
    pub fn idle_workers(&self) -> usize {
        self.workers
            .iter()
            .filter(|w| {
                matches!(w.state, WorkerState::NotStarted | WorkerState::Waiting) && w.pixels_done == 0
            })
            .count()
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    /// One event per line in [`TraceEvent`]'s display format.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn channel_stats(&self) -> &BTreeMap<(PeId, PeId), ChannelStats> {
        &self.channels
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.master, MasterState::Finished)
    }

    /// Hands PE0 its own copy of `img` to distribute.
    ///
    /// PE0 then sends every worker the whole image in `tile_rows`-row bulk
    /// messages followed by one done-control message, as the scheduler runs.
    pub fn scatter(&mut self, img: &Image) -> Result<(), ScpaError> {
        if self.phase != Phase::Initialized {
            return Err(ScpaError::AlreadyScattered);
        }
        if img.channels() != 3 {
            return Err(ScpaError::UnsupportedInput(img.channels()));
        }
        self.buffers = vec![vec![0u8; img.samples().len()]; self.workers.len()];
        self.input = Some(img.clone());
        self.phase = Phase::Scattered;
        if matches!(self.master, MasterState::AwaitingImage) {
            self.master = MasterState::Scattering {
                worker: 0,
                next_row: 0,
            };
        }
        Ok(())
    }

    /// Runs the array to completion and returns each worker's converted image.
    pub fn gather(&mut self) -> Result<BTreeMap<ColorSpace, Image>, ScpaError> {
        match self.phase {
            Phase::Initialized => return Err(ScpaError::NotScattered),
            Phase::Gathered => return Err(ScpaError::ResultsConsumed),
            Phase::Scattered => {}
        }
        while let StepOutcome::Event(_) = self.step() {}
        if !self.is_complete() {
            return Err(ScpaError::Stalled);
        }
        self.phase = Phase::Gathered;
        if let Some((pe, reason)) = self.failures.first() {
            return Err(ScpaError::WorkerFailure {
                pe: *pe,
                reason: reason.clone(),
            });
        }
        let img = self.input.as_ref().expect("scattered runs hold an input");
        let (w, h) = (img.width(), img.height());
        let buffers = std::mem::take(&mut self.buffers);
        Ok(self
            .workers
            .iter()
            .zip(buffers)
            .map(|(wk, buf)| (wk.space, Image::new(w, h, 3, buf).expect("buffer sized at scatter")))
            .collect())
    }

    /// Pixels per compute-cycle for every worker, with and without link traffic.
    pub fn ledger_report(&self) -> Result<LedgerReport, ScpaError> {
        if !self.is_complete() {
            return Err(ScpaError::RunIncomplete);
        }
        let rows = self
            .workers
            .iter()
            .map(|wk| {
                let c = self.ledger.counters(wk.pe);
                let compute = self.ledger.compute_cycles(wk.pe);
                let ipc = self.ledger.ipc_cycles(wk.pe);
                let ratio = |cycles: u64| {
                    if cycles == 0 {
                        0.0
                    } else {
                        c.pixels as f64 / cycles as f64
                    }
                };
                ThroughputRow {
                    conversion: wk.space,
                    pe: wk.pe,
                    pixels: c.pixels,
                    compute_cycles: compute,
                    message_words: c.message_words,
                    ipc_cycles: ipc,
                    pixels_per_cycle: ratio(compute),
                    pixels_per_cycle_with_ipc: ratio(compute + ipc),
                }
            })
            .collect();
        Ok(LedgerReport { rows })
    }

    /// Advances the scheduler by one slice.
    pub fn step(&mut self) -> StepOutcome {
        let n = self.mailboxes.len();
        for offset in 1..=n {
            let pe = (self.cursor + offset) % n;
            if self.runnable(pe) {
                self.cursor = pe;
                let (kind, peer, seq) = if pe == 0 {
                    self.run_master()
                } else {
                    self.run_worker(self.slot_of_pe[pe].expect("every non-master PE is a worker"))
                };
                let event = TraceEvent {
                    ordinal: self.trace.len() as u64,
                    kind,
                    pe: PeId(pe),
                    peer,
                    seq,
                };
                self.trace.push(event.clone());
                return StepOutcome::Event(event);
            }
        }
        StepOutcome::Exhausted
    }

    fn runnable(&self, pe: usize) -> bool {
        let has_mail = !self.mailboxes[pe].is_empty();
        if pe == 0 {
            return match self.master {
                MasterState::AwaitingImage | MasterState::Finished => false,
                MasterState::Collecting => has_mail,
                _ => true,
            };
        }
        let slot = self.slot_of_pe[pe].expect("worker PE");
        match self.workers[slot].state {
            WorkerState::Finished => false,
            WorkerState::Waiting => has_mail,
            _ => true,
        }
    }

    fn send(&mut self, src: PeId, dst: PeId, payload: Payload) -> (TraceKind, Option<PeId>, Option<u64>) {
        let stats = self.channels.entry((src, dst)).or_default();
        let seq = stats.next_send_seq;
        stats.next_send_seq += 1;
        let msg = Message {
            src,
            dst,
            seq,
            payload,
        };
        stats.sent_messages += 1;
        stats.sent_bytes += msg.payload_bytes() as u64;
        self.ledger.charge_words(src, msg.words());
        self.mailboxes[dst.0].push_back(msg);
        (TraceKind::Send, Some(dst), Some(seq))
    }

    fn receive(&mut self, pe: PeId) -> Message {
        let msg = self.mailboxes[pe.0]
            .pop_front()
            .expect("only runnable with mail");
        let stats = self.channels.entry((msg.src, pe)).or_default();
        if msg.seq != stats.next_recv_seq {
            stats.seq_gaps += 1;
        }
        stats.next_recv_seq = msg.seq + 1;
        stats.received_messages += 1;
        stats.received_bytes += msg.payload_bytes() as u64;
        self.ledger.charge_words(pe, msg.words());
        msg
    }

    fn run_master(&mut self) -> (TraceKind, Option<PeId>, Option<u64>) {
        let me = PeId::MASTER;
        match self.master {
            MasterState::NotStarted => {
                self.master = if self.input.is_some() {
                    MasterState::Scattering {
                        worker: 0,
                        next_row: 0,
                    }
                } else {
                    MasterState::AwaitingImage
                };
                (TraceKind::TaskStart, None, None)
            }
            MasterState::Scattering { worker, next_row } => {
                let img = self.input.as_ref().expect("scattering requires input");
                let (width, height) = (img.width(), img.height());
                let dst = self.workers[worker].pe;
                if next_row < height {
                    let rows = self.tile_rows.min(height - next_row);
                    let stride = width * 3;
                    let tile = Tile {
                        row_offset: next_row,
                        width,
                        total_height: height,
                        samples: img.samples()[next_row * stride..(next_row + rows) * stride].to_vec(),
                    };
                    self.master = MasterState::Scattering {
                        worker,
                        next_row: next_row + rows,
                    };
                    self.send(me, dst, Payload::Bulk(tile))
                } else {
                    self.master = if worker + 1 < self.workers.len() {
                        MasterState::Scattering {
                            worker: worker + 1,
                            next_row: 0,
                        }
                    } else {
                        MasterState::Collecting
                    };
                    let pixels = (width * height) as u64;
                    self.send(me, dst, Payload::Control(Control::Done { pixels }))
                }
            }
            MasterState::Collecting => {
                let msg = self.receive(me);
                let (src, seq) = (msg.src, msg.seq);
                let slot = self.slot_of_pe[src.0].expect("only workers message the master");
                match msg.payload {
                    Payload::Bulk(tile) => self.store_result(slot, src, tile),
                    Payload::Control(Control::Done { .. }) => self.done_reports += 1,
                    Payload::Control(Control::Failed { reason }) => {
                        self.failures.push((src, reason));
                        self.done_reports += 1;
                    }
                }
                if self.done_reports == self.workers.len() {
                    self.master = MasterState::Finishing;
                }
                (TraceKind::Receive, Some(src), Some(seq))
            }
            MasterState::Finishing => {
                self.master = MasterState::Finished;
                (TraceKind::TaskDone, None, None)
            }
            MasterState::AwaitingImage | MasterState::Finished => {
                unreachable!("not runnable")
            }
        }
    }

    fn store_result(&mut self, slot: usize, src: PeId, tile: Tile) {
        let img = self.input.as_ref().expect("collecting requires input");
        let stride = img.width() * 3;
        if !tile.is_well_formed() || tile.width != img.width() || tile.total_height != img.height() {
            self.failures
                .push((src, format!("result tile at row {} does not fit the image", tile.row_offset)));
            return;
        }
        let start = tile.row_offset * stride;
        self.buffers[slot][start..start + tile.samples.len()].copy_from_slice(&tile.samples);
    }

    fn run_worker(&mut self, slot: usize) -> (TraceKind, Option<PeId>, Option<u64>) {
        let me = self.workers[slot].pe;
        let state = std::mem::replace(&mut self.workers[slot].state, WorkerState::Finished);
        let (next, event) = match state {
            WorkerState::NotStarted => (WorkerState::Waiting, (TraceKind::TaskStart, None, None)),
            WorkerState::Waiting => {
                let msg = self.receive(me);
                let event = (TraceKind::Receive, Some(msg.src), Some(msg.seq));
                let next = match msg.payload {
                    Payload::Bulk(tile) => match self.check_tile(slot, &tile) {
                        Ok(()) => WorkerState::Converting(tile),
                        Err(reason) => WorkerState::Reporting(Control::Failed { reason }),
                    },
                    Payload::Control(Control::Done { .. }) => WorkerState::Reporting(Control::Done {
                        pixels: self.workers[slot].pixels_done,
                    }),
                    Payload::Control(Control::Failed { .. }) => WorkerState::Waiting,
                };
                (next, event)
            }
            WorkerState::Converting(tile) => {
                let wk = &mut self.workers[slot];
                let mut out = vec![0u8; tile.samples.len()];
                convert_samples(&tile.samples, &mut out, &wk.matrix, wk.path);
                let pixels = tile.pixels() as u64;
                wk.pixels_done += pixels;
                let ops = ops_per_pixel(wk.space) * pixels;
                self.ledger.charge_compute(me, ops, pixels);
                let result = Tile {
                    samples: out,
                    ..tile
                };
                (WorkerState::Replying(result), (TraceKind::Yield, None, None))
            }
            WorkerState::Replying(tile) => {
                let event = self.send(me, PeId::MASTER, Payload::Bulk(tile));
                (WorkerState::Waiting, event)
            }
            WorkerState::Reporting(ctl) => {
                let event = self.send(me, PeId::MASTER, Payload::Control(ctl));
                (WorkerState::Finishing, event)
            }
            WorkerState::Finishing => (WorkerState::Finished, (TraceKind::TaskDone, None, None)),
            WorkerState::Finished => unreachable!("not runnable"),
        };
        self.workers[slot].state = next;
        event
    }

    fn check_tile(&mut self, slot: usize, tile: &Tile) -> Result<(), String> {
        #[cfg(test)]
        if let Some(reason) = self.workers[slot].fault.take() {
            return Err(reason);
        }
        let _ = slot;
        if tile.is_well_formed() {
            Ok(())
        } else {
            Err(format!("malformed tile at row {}", tile.row_offset))
        }
    }

    #[cfg(test)]
    fn inject_fault(&mut self, pe: PeId, reason: &str) {
        let slot = self.slot_of_pe[pe.0].unwrap();
        self.workers[slot].fault = Some(reason.to_string());
    }
}
