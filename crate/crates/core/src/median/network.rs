//! Wide-register median: nine pixels packed into a 16-lane register and run
//! through a fixed compare-exchange network, the way the extension
//! instruction sorts them in the configurable fabric.

use super::{MedianError, Window3x3};

pub const WIDE_REGISTER_LANES: usize = 16;

/// 16 packed 8-bit lanes. Lanes at or above `occupancy` are always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WideRegister {
    lanes: [u8; WIDE_REGISTER_LANES],
    occupancy: u8,
}

impl WideRegister {
    pub fn pack(values: &[u8]) -> Result<Self, MedianError> {
        if values.len() > WIDE_REGISTER_LANES {
            return Err(MedianError::InvalidArgument(format!(
                "{} values do not fit a {WIDE_REGISTER_LANES}-lane register",
                values.len()
            )));
        }
        let mut lanes = [0u8; WIDE_REGISTER_LANES];
        lanes[..values.len()].copy_from_slice(values);
        Ok(Self {
            lanes,
            occupancy: values.len() as u8,
        })
    }

    #[inline]
    pub fn from_window(w: &Window3x3) -> Self {
        let mut lanes = [0u8; WIDE_REGISTER_LANES];
        lanes[..9].copy_from_slice(&w.0);
        Self { lanes, occupancy: 9 }
    }

    pub fn lanes(&self) -> &[u8; WIDE_REGISTER_LANES] {
        &self.lanes
    }

    pub fn occupancy(&self) -> usize {
        usize::from(self.occupancy)
    }
}

/// The 19-comparator median-of-9 network. Each pair `(lo, hi)` leaves the
/// smaller value in lane `lo` and the larger in lane `hi`; the median ends up
/// in lane 4.
pub const MEDIAN9_NETWORK: [(usize, usize); 19] = [
    (1, 2), (4, 5), (7, 8),
    (0, 1), (3, 4), (6, 7),
    (1, 2), (4, 5), (7, 8),
    (0, 3), (5, 8), (4, 7),
    (3, 6), (1, 4), (2, 5),
    (4, 7), (4, 2), (6, 4),
    (4, 2),
];

const MEDIAN_LANE: usize = 4;

#[inline(always)]
fn compare_exchange(lanes: &mut [u8; WIDE_REGISTER_LANES], lo: usize, hi: usize) {
    let (a, b) = (lanes[lo], lanes[hi]);
    lanes[lo] = a.min(b);
    lanes[hi] = a.max(b);
}

/// Runs the network, reporting every executed lane pair to `observe`.
pub fn run_median9_network(
    r: &WideRegister,
    mut observe: impl FnMut(usize, usize),
) -> Result<u8, MedianError> {
    if r.occupancy() != 9 {
        return Err(MedianError::InvalidArgument(format!(
            "median instruction needs 9 occupied lanes, got {}",
            r.occupancy()
        )));
    }
    let mut lanes = r.lanes;
    for &(lo, hi) in MEDIAN9_NETWORK.iter() {
        observe(lo, hi);
        compare_exchange(&mut lanes, lo, hi);
    }
    Ok(lanes[MEDIAN_LANE])
}

pub fn median9_widereg(r: &WideRegister) -> Result<u8, MedianError> {
    run_median9_network(r, |_, _| {})
}

/// Unchecked fast path used by the image driver; the window always fills 9 lanes.
#[inline]
pub(crate) fn median9_widereg_window(w: &Window3x3) -> u8 {
    let mut lanes = WideRegister::from_window(w).lanes;
    for &(lo, hi) in MEDIAN9_NETWORK.iter() {
        compare_exchange(&mut lanes, lo, hi);
    }
    lanes[MEDIAN_LANE]
}
