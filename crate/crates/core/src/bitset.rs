//! Fixed-size vertex subsets backed by 64-bit words.
//!
//! Cut families can hold thousands of bipartitions and membership tests
//! dominate, so sides are packed bitsets rather than hash sets.

/// Subset of the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { n, words: vec![0; n.div_ceil(64)] }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Self::new(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// Singleton `{v}`.
    pub fn singleton(n: usize, v: usize) -> Self {
        Self::from_members(n, [v])
    }

    pub fn len_universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.n);
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Proper nonempty subset: ∅ ⊂ S ⊂ V.
    pub fn is_proper_nonempty(&self) -> bool {
        let c = self.count();
        c > 0 && c < self.n
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    /// Canonical form: the side containing vertex 0.
    pub fn canonical(&self) -> Self {
        if self.n == 0 || self.contains(0) {
            self.clone()
        } else {
            self.complement()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }

    /// Number of 64-bit words backing the set (space accounting).
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    fn mask_tail(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::new(70);
        s.insert(0);
        s.insert(65);
        assert!(s.contains(0) && s.contains(65) && !s.contains(64));
        assert_eq!(s.count(), 2);
        s.remove(65);
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn complement_masks_tail_bits() {
        let s = VertexSet::from_members(67, [1, 2]);
        let c = s.complement();
        assert_eq!(c.count(), 65);
        assert!(!c.contains(1) && c.contains(0) && c.contains(66));
    }

    #[test]
    fn canonical_side_contains_vertex_zero() {
        let s = VertexSet::from_members(10, [3, 4]);
        let canon = s.canonical();
        assert!(canon.contains(0));
        assert_eq!(canon, s.complement());
        assert_eq!(s.complement().canonical(), canon);
    }

    #[test]
    fn proper_nonempty() {
        assert!(!VertexSet::new(4).is_proper_nonempty());
        assert!(VertexSet::singleton(4, 2).is_proper_nonempty());
        assert!(!VertexSet::from_members(4, 0..4).is_proper_nonempty());
    }
}
