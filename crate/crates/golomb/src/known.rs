//! Known optimal Golomb ruler lengths, used for span pruning during search.
//!
//! `OPTIMAL_LENGTHS[k-1]` is the exact minimum length G(k) of a k-mark Golomb
//! ruler; values are known for k <= 27. The shipped witness file
//! `data/g_optimal.txt` is cross-validated against this table at load.

pub(crate) const OPTIMAL_LENGTHS: [u32; 27] = [
    0, 1, 3, 6, 11, 17, 25, 34, 44, 55, 72, 85, 106, 127, 151, 177, 199, 216, 246, 283, 333, 356,
    372, 425, 480, 492, 553,
];

/// Lower bound on the length of any k-mark Golomb ruler.
///
/// Exact for k <= 27. Beyond that, the k(k-1)/2 pairwise differences are
/// distinct positive integers, so the largest (the length) is at least
/// k(k-1)/2.
#[inline]
pub(crate) fn min_length(k: usize) -> u32 {
    if k == 0 {
        0
    } else if k <= OPTIMAL_LENGTHS.len() {
        OPTIMAL_LENGTHS[k - 1]
    } else {
        (k as u32 * (k as u32 - 1)) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_strictly_increasing() {
        for w in OPTIMAL_LENGTHS.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn fallback_never_exceeds_exact_values() {
        // The difference-count bound k(k-1)/2 must stay at or below the true
        // optimum wherever the optimum is known; otherwise using it past the
        // table would be an unsound prune.
        for k in 1..=27usize {
            let count_bound = (k as u32 * (k as u32 - 1)) / 2;
            assert!(count_bound <= min_length(k), "k={k}");
        }
        assert_eq!(min_length(28), 378);
    }
}
