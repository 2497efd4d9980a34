use std::fmt;

/// Subset of the simple roots, as a bitmask over 0-based indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet(u64);

pub const MAX_RANK: usize = 64;

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_RANK);
        if n == MAX_RANK {
            RootSet(u64::MAX)
        } else {
            RootSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        RootSet(1u64 << i)
    }

    pub fn from_bits(bits: u64) -> Self {
        RootSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RANK && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        RootSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        RootSet(self.0 & !(1 << i))
    }

    pub fn union(self, o: RootSet) -> Self {
        RootSet(self.0 | o.0)
    }

    pub fn intersection(self, o: RootSet) -> Self {
        RootSet(self.0 & o.0)
    }

    pub fn difference(self, o: RootSet) -> Self {
        RootSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: RootSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_RANK).filter(move |&i| bits >> i & 1 == 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = RootSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(RootSet(cur))
        })
    }
}

impl FromIterator<usize> for RootSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(RootSet::EMPTY, RootSet::with)
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i + 1)).finish()
    }
}
