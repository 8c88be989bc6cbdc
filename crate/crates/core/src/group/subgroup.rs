use fixedbitset::FixedBitSet;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Subgroup stored as a bit vector over the parent's element indices.
///
/// The parent group is not stored; every operation takes it explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupSet {
    bits: FixedBitSet,
    size: usize,
}

impl SubgroupSet {
    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut bits = FixedBitSet::with_capacity(g.order());
        bits.insert(0);
        SubgroupSet { bits, size: 1 }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        let mut bits = FixedBitSet::with_capacity(g.order());
        bits.insert_range(..);
        SubgroupSet { bits, size: g.order() }
    }

    /// Checks closure and Lagrange before accepting an element set.
    pub fn from_elements(g: &FiniteGroup, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(g.order());
        for e in elems {
            if e >= g.order() {
                return Err(Error::IndexOutOfRange { index: e, order: g.order() });
            }
            bits.insert(e);
        }
        let s = Self::from_bits_unchecked(bits);
        if !s.contains(0) {
            return Err(Error::Precondition("subgroup must contain the identity".into()));
        }
        for a in s.iter() {
            if !s.contains(g.inv(a)) || s.iter().any(|b| !s.contains(g.mul(a, b))) {
                return Err(Error::Precondition("element set is not closed".into()));
            }
        }
        debug_assert_eq!(g.order() % s.size, 0);
        Ok(s)
    }

    pub(crate) fn from_bits_unchecked(bits: FixedBitSet) -> Self {
        let size = bits.count_ones(..);
        SubgroupSet { bits, size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn is_subset(&self, other: &SubgroupSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &SubgroupSet) -> SubgroupSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self::from_bits_unchecked(bits)
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Materializes the subgroup as a standalone group, identity first.
    ///
    /// Returns the group together with the embedding `new index -> parent index`.
    pub fn to_group(&self, g: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let elems = self.elements();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let k = elems.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &elems {
            for &b in &elems {
                table.push(pos[g.mul(a, b)] as u16);
            }
        }
        let sub = FiniteGroup::assemble(k, table);
        (sub, elems)
    }
}
