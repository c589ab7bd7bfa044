use super::Window3x3;

/// Exact median: the 5th smallest of the nine values, by full sort.
#[inline]
pub fn median9_naive(w: &Window3x3) -> u8 {
    let mut v = w.0;
    v.sort_unstable();
    v[4]
}

#[inline(always)]
fn median3(a: u8, b: u8, c: u8) -> u8 {
    a.min(b).max(a.max(b).min(c))
}

/// Pseudo-median: the median of the three row medians.
///
/// Not exact, and not invariant under permutation of the window, but its
/// rank among the nine values is always 4, 5 or 6.
#[inline]
pub fn median9_approx(w: &Window3x3) -> u8 {
    let v = &w.0;
    median3(
        median3(v[0], v[1], v[2]),
        median3(v[3], v[4], v[5]),
        median3(v[6], v[7], v[8]),
    )
}
