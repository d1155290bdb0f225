use std::fmt;
use std::ops::{BitAnd, BitOr};

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard limit on ground-set size for bitmask subsets.
pub const MAX_GROUND: usize = 32;

/// A subset of point indices `{0, ..., m-1}` as a bitmask.
///
/// Masks compare and sort as their integer value, which refines inclusion:
/// `s ⊆ t` implies `s <= t`. Display and serialization are 1-based.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_GROUND, "ground set too large for a bitmask");
        if m == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << m) - 1)
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn singleton(index: usize) -> Self {
        assert!(index < MAX_GROUND);
        SubsetMask(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u32;
        for i in indices {
            assert!(i < MAX_GROUND, "index {i} out of bitmask range");
            bits |= 1 << i;
        }
        SubsetMask(bits)
    }

    /// Parses 1-based indices, validating against a ground-set size.
    pub fn from_one_based(indices: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > m {
                return Err(Error::IndexOutOfRange { index: i, size: m });
            }
            bits |= 1 << (i - 1);
        }
        Ok(SubsetMask(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_GROUND && self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        assert!(index < MAX_GROUND);
        SubsetMask(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> Self {
        assert!(index < MAX_GROUND);
        SubsetMask(self.0 & !(1 << index))
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement_in(self, m: usize) -> Self {
        SubsetMask(Self::full(m).0 & !self.0)
    }

    /// 0-based member indices, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_GROUND).filter(move |&i| self.contains(i))
    }

    /// 1-based member indices, ascending.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All `2^m` subsets of `{0, ..., m-1}`, ascending as integers.
    pub fn all_subsets(m: usize) -> impl Iterator<Item = SubsetMask> {
        assert!(m < MAX_GROUND, "full subset enumeration needs m < 32");
        (0u32..(1u32 << m)).map(SubsetMask)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let indices = self.one_based();
        let mut seq = serializer.serialize_seq(Some(indices.len()))?;
        for i in indices {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MaskVisitor;

        impl<'de> Visitor<'de> for MaskVisitor {
            type Value = SubsetMask;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a sequence of 1-based indices")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<SubsetMask, A::Error> {
                let mut bits = 0u32;
                while let Some(i) = seq.next_element::<usize>()? {
                    if i == 0 || i > MAX_GROUND {
                        return Err(serde::de::Error::custom(format!(
                            "index {i} out of range 1..={MAX_GROUND}"
                        )));
                    }
                    bits |= 1 << (i - 1);
                }
                Ok(SubsetMask(bits))
            }
        }

        deserializer.deserialize_seq(MaskVisitor)
    }
}
