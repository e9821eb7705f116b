use crate::error::{Error, Result};

/// Number of unordered leaf pairs, C(n, 2).
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A leaf pair `1 <= i < j <= n` together with its position in the
/// lexicographic order (1,2), (1,3), ..., (n-1,n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
    pub position: usize,
}

impl PairIndex {
    /// Accepts the two labels in either order.
    pub fn new(n: usize, a: usize, b: usize) -> Result<Self> {
        for label in [a, b] {
            if label == 0 || label > n {
                return Err(Error::UnknownLeaf(label));
            }
        }
        if a == b {
            return Err(Error::InvalidArgument(format!("pair ({a}, {b}) repeats a leaf")));
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        Ok(Self {
            i,
            j,
            position: position_unchecked(n, i, j),
        })
    }

    pub fn from_position(n: usize, position: usize) -> Result<Self> {
        if position >= pair_count(n) {
            return Err(Error::InvalidArgument(format!(
                "pair position {position} out of range for n = {n}"
            )));
        }
        let mut i = 1;
        let mut start = 0;
        loop {
            let row = n - i;
            if position < start + row {
                let j = i + 1 + (position - start);
                return Ok(Self { i, j, position });
            }
            start += row;
            i += 1;
        }
    }
}

/// Position of `(i, j)` with `i < j`; no bounds checks.
#[inline]
pub(crate) fn position_unchecked(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// All pairs in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = PairIndex> {
    (1..=n)
        .flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
        .enumerate()
        .map(|(position, (i, j))| PairIndex { i, j, position })
}
