use super::PeId;

/// Bytes per accounted message word.
pub const WORD_BYTES: usize = 4;

/// A band of full-width RGB rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub row_offset: usize,
    pub width: usize,
    pub total_height: usize,
    pub samples: Vec<u8>,
}

impl Tile {
    pub fn rows(&self) -> usize {
        self.samples.len() / (self.width * 3)
    }

    pub fn pixels(&self) -> usize {
        self.samples.len() / 3
    }

    pub(crate) fn is_well_formed(&self) -> bool {
        self.width > 0
            && self.samples.len().is_multiple_of(self.width * 3)
            && self.row_offset + self.rows() <= self.total_height
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Control {
    /// End of a stream; a worker reports how many pixels it converted.
    Done { pixels: u64 },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Bulk(Tile),
    Control(Control),
}

/// Value-passed mailbox entry. `seq` counts up from 0 on each (src, dst) channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub src: PeId,
    pub dst: PeId,
    pub seq: u64,
    pub payload: Payload,
}

impl Message {
    pub fn payload_bytes(&self) -> usize {
        match &self.payload {
            Payload::Bulk(t) => t.samples.len(),
            Payload::Control(_) => 0,
        }
    }

    /// Words moved over the link: bulk data rounded up to whole words, one
    /// word for a control record.
    pub fn words(&self) -> u64 {
        match &self.payload {
            Payload::Bulk(t) => t.samples.len().div_ceil(WORD_BYTES) as u64,
            Payload::Control(_) => 1,
        }
    }
}
