use std::fmt;

/// A set of leaf labels from `1..=n`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafSet {
    words: Vec<u64>,
}

impl LeafSet {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut set = Self::empty(n);
        for label in 1..=n {
            set.insert(label);
        }
        set
    }

    pub fn singleton(n: usize, label: usize) -> Self {
        let mut set = Self::empty(n);
        set.insert(label);
        set
    }

    pub fn from_labels(n: usize, labels: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for label in labels {
            set.insert(label);
        }
        set
    }

    pub fn insert(&mut self, label: usize) {
        let bit = label - 1;
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn remove(&mut self, label: usize) {
        let bit = label - 1;
        self.words[bit / 64] &= !(1 << (bit % 64));
    }

    pub fn contains(&self, label: usize) -> bool {
        let bit = label - 1;
        bit / 64 < self.words.len() && self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Smallest label in the set.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize + 1)
    }

    /// Labels in increasing order.
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit + 1)
            })
        })
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}
