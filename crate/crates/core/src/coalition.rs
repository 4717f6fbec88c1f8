//! Fixed-width bit sets over token positions.

use std::fmt;

/// A set of kept positions of one instance.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coalition {
    words: Vec<u64>,
    len: usize,
}

impl Coalition {
    pub fn empty(len: usize) -> Self {
        Coalition {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut c = Coalition::empty(len);
        for i in 0..len {
            c.insert(i);
        }
        c
    }

    /// Positions out of range are ignored.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Coalition::empty(len);
        for p in positions {
            if p < len {
                c.insert(p);
            }
        }
        c
    }

    /// Coalition over the low `len` bits of `bits` (for `len <= 64`).
    pub fn from_bits(len: usize, bits: u64) -> Self {
        debug_assert!(len <= 64);
        let mut c = Coalition::empty(len);
        if len > 0 {
            c.words[0] = bits;
        }
        c
    }

    /// Number of positions in the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "position {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "position {i} out of range {}", self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn with(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.insert(i);
        c
    }

    pub fn without(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.remove(i);
        c
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_across_words() {
        let mut c = Coalition::empty(130);
        c.insert(0);
        c.insert(64);
        c.insert(129);
        assert_eq!(c.count(), 3);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        c.remove(64);
        assert!(!c.contains(64));
        assert_eq!(Coalition::full(130).count(), 130);
    }

    #[test]
    fn from_bits_matches_positions() {
        let c = Coalition::from_bits(5, 0b10110);
        assert_eq!(c, Coalition::from_positions(5, [1, 2, 4]));
    }
}
