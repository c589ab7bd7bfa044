//! Abstract cycle accounting.
//!
//! Each processing element accumulates operation counts; compute cycles are
//! their weighted sum. Throughput is reported in pixels per compute-cycle,
//! with and without the words moved over inter-PE links.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::colorspace::ColorSpace;

use super::PeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounts {
    pub multiplies: u64,
    pub adds: u64,
    pub subtracts: u64,
    /// Comparisons, including the two-sided clamp to [0, 255].
    pub compares: u64,
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(self, rhs: Self) -> Self {
        OpCounts {
            multiplies: self.multiplies + rhs.multiplies,
            adds: self.adds + rhs.adds,
            subtracts: self.subtracts + rhs.subtracts,
            compares: self.compares + rhs.compares,
        }
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Mul<u64> for OpCounts {
    type Output = OpCounts;

    fn mul(self, n: u64) -> Self {
        OpCounts {
            multiplies: self.multiplies * n,
            adds: self.adds * n,
            subtracts: self.subtracts * n,
            compares: self.compares * n,
        }
    }
}

/// Operations needed to convert one pixel.
///
/// A matrix conversion is 9 multiplies, 6 adds and 3 clamps; the complement
/// is 3 subtracts from 255.
pub fn ops_per_pixel(space: ColorSpace) -> OpCounts {
    match space {
        ColorSpace::Cmy => OpCounts {
            subtracts: 3,
            ..OpCounts::default()
        },
        ColorSpace::Ycc | ColorSpace::Yiq | ColorSpace::Yuv => OpCounts {
            multiplies: 9,
            adds: 6,
            compares: 3,
            subtracts: 0,
        },
    }
}

/// Cycle weight of each counted quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostWeights {
    pub multiply: u64,
    pub add: u64,
    pub subtract: u64,
    pub compare: u64,
    pub message_word: u64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            multiply: 1,
            add: 1,
            subtract: 1,
            compare: 1,
            message_word: 1,
        }
    }
}

impl CostWeights {
    pub fn compute_cycles(&self, ops: &OpCounts) -> u64 {
        ops.multiplies * self.multiply
            + ops.adds * self.add
            + ops.subtracts * self.subtract
            + ops.compares * self.compare
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PeCounters {
    pub ops: OpCounts,
    pub message_words: u64,
    pub pixels: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    weights: CostWeights,
    per_pe: Vec<PeCounters>,
}

impl CostLedger {
    pub fn new(pe_count: usize, weights: CostWeights) -> Self {
        Self {
            weights,
            per_pe: vec![PeCounters::default(); pe_count],
        }
    }

    pub fn weights(&self) -> &CostWeights {
        &self.weights
    }

    pub fn charge_compute(&mut self, pe: PeId, ops: OpCounts, pixels: u64) {
        let c = &mut self.per_pe[pe.0];
        c.ops += ops;
        c.pixels += pixels;
    }

    pub fn charge_words(&mut self, pe: PeId, words: u64) {
        self.per_pe[pe.0].message_words += words;
    }

    pub fn counters(&self, pe: PeId) -> &PeCounters {
        &self.per_pe[pe.0]
    }

    pub fn compute_cycles(&self, pe: PeId) -> u64 {
        self.weights.compute_cycles(&self.per_pe[pe.0].ops)
    }

    pub fn ipc_cycles(&self, pe: PeId) -> u64 {
        self.per_pe[pe.0].message_words * self.weights.message_word
    }
}

/// One worker's line in the throughput table.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRow {
    pub conversion: ColorSpace,
    pub pe: PeId,
    pub pixels: u64,
    pub compute_cycles: u64,
    pub message_words: u64,
    pub ipc_cycles: u64,
    /// pixels / compute cycles
    pub pixels_per_cycle: f64,
    /// pixels / (compute + link cycles)
    pub pixels_per_cycle_with_ipc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerReport {
    pub rows: Vec<ThroughputRow>,
}

impl LedgerReport {
    pub fn row(&self, space: ColorSpace) -> Option<&ThroughputRow> {
        self.rows.iter().find(|r| r.conversion == space)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "conversion,pe,pixels,compute_cycles,message_words,pixels_per_cycle,pixels_per_cycle_with_ipc\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6}\n",
                r.conversion, r.pe.0, r.pixels, r.compute_cycles, r.message_words,
                r.pixels_per_cycle, r.pixels_per_cycle_with_ipc
            ));
        }
        out
    }
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>4} {:>10} {:>14} {:>13} {:>12} {:>14}",
            "conversion", "pe", "pixels", "compute_cyc", "msg_words", "px/cycle", "px/cycle+ipc"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<10} {:>4} {:>10} {:>14} {:>13} {:>12.6} {:>14.6}",
                r.conversion.name(),
                r.pe.0,
                r.pixels,
                r.compute_cycles,
                r.message_words,
                r.pixels_per_cycle,
                r.pixels_per_cycle_with_ipc
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight_costs() {
        let w = CostWeights::default();
        assert_eq!(w.compute_cycles(&ops_per_pixel(ColorSpace::Cmy)), 3);
        for space in [ColorSpace::Ycc, ColorSpace::Yiq, ColorSpace::Yuv] {
            assert_eq!(w.compute_cycles(&ops_per_pixel(space)), 18);
        }
    }

    #[test]
    fn ledger_is_additive() {
        let mut l = CostLedger::new(2, CostWeights::default());
        l.charge_compute(PeId(1), ops_per_pixel(ColorSpace::Yiq) * 10, 10);
        l.charge_compute(PeId(1), ops_per_pixel(ColorSpace::Yiq) * 5, 5);
        l.charge_words(PeId(1), 7);
        assert_eq!(l.compute_cycles(PeId(1)), 18 * 15);
        assert_eq!(l.counters(PeId(1)).pixels, 15);
        assert_eq!(l.ipc_cycles(PeId(1)), 7);
        assert_eq!(l.compute_cycles(PeId(0)), 0);
    }

    #[test]
    fn weights_are_configurable() {
        let w = CostWeights {
            multiply: 4,
            ..CostWeights::default()
        };
        assert_eq!(w.compute_cycles(&ops_per_pixel(ColorSpace::Ycc)), 36 + 9);
    }
}
