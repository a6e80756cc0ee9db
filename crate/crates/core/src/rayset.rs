use std::fmt;

/// Ray identifier. Generated rays are numbered 1..=40; fixture rays use the
/// same range under their own labeling.
pub type RayId = u8;

/// Largest ray id that fits in a [`RaySet`].
pub const MAX_RAY_ID: RayId = 63;

/// A set of ray ids as a bitmask (bit `id` set iff `id` is a member).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySet(pub u64);

impl RaySet {
    pub const EMPTY: Self = Self(0);

    pub fn single(id: RayId) -> Self {
        debug_assert!(id <= MAX_RAY_ID);
        Self(1 << id)
    }

    pub fn contains(self, id: RayId) -> bool {
        id <= MAX_RAY_ID && self.0 & (1 << id) != 0
    }

    pub fn insert(&mut self, id: RayId) {
        self.0 |= 1 << id;
    }

    pub fn remove(&mut self, id: RayId) {
        self.0 &= !(1 << id);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = RayId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let id = bits.trailing_zeros() as RayId;
            bits &= bits - 1;
            Some(id)
        })
    }

    pub fn first(self) -> Option<RayId> {
        self.iter().next()
    }
}

impl FromIterator<RayId> for RaySet {
    fn from_iter<T: IntoIterator<Item = RayId>>(iter: T) -> Self {
        let mut s = Self::EMPTY;
        for id in iter {
            s.insert(id);
        }
        s
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn iter_roundtrips(ids in proptest::collection::btree_set(1u8..=40, 0..20)) {
            let set: RaySet = ids.iter().copied().collect();
            prop_assert_eq!(set.len(), ids.len());
            prop_assert_eq!(set.iter().collect::<Vec<_>>(), ids.into_iter().collect::<Vec<_>>());
        }
    }
}
