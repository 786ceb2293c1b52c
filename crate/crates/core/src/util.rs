//! Small internal helpers: a seedable PRNG and mixed-radix counters.

/// SplitMix64. Hand-rolled so that seeded generation is byte-identical
/// across platforms and toolchain upgrades.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n`. The modulo bias is irrelevant for
    /// test-instance sampling and keeps the stream reproducible.
    pub(crate) fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub(crate) fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }
}

/// Strides for mixed-radix indexing of a tuple space, last position fastest.
/// Returns `None` when the total product overflows `u64`.
pub(crate) fn radix_strides(sizes: &[usize]) -> Option<(Vec<u64>, u64)> {
    let mut strides = vec![0u64; sizes.len()];
    let mut total: u64 = 1;
    for i in (0..sizes.len()).rev() {
        strides[i] = total;
        total = total.checked_mul(sizes[i] as u64)?;
    }
    Some((strides, total))
}

/// Counts a digit vector through the mixed-radix space `sizes`.
/// Returns false once the space is exhausted.
pub(crate) fn radix_advance(digits: &mut [u32], sizes: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if (digits[i] as usize) < sizes[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}
