use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Binary opinion vector; bit `i` is the opinion of agent `i`.
///
/// Text form is a string over `{0,1}` whose character `i` is the opinion of agent `i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Labelling(BitVec<u64, Lsb0>);

impl Labelling {
    pub fn zeros(n: usize) -> Self {
        Labelling(bitvec![u64, Lsb0; 0; n])
    }

    pub fn ones(n: usize) -> Self {
        Labelling(bitvec![u64, Lsb0; 1; n])
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        Labelling((0..n).map(f).collect())
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Labelling(bits.iter().copied().collect())
    }

    /// Bit `i` of `value` becomes the opinion of agent `i`. Requires `n <= 64`.
    pub fn from_u64(n: usize, value: u64) -> Self {
        assert!(n <= 64, "from_u64 needs n <= 64");
        Self::from_fn(n, |i| value >> i & 1 == 1)
    }

    /// Inverse of [`Labelling::from_u64`]; `None` when longer than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        (self.len() <= 64).then(|| {
            self.0
                .iter_ones()
                .fold(0u64, |acc, i| acc | (1u64 << i))
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.0.set(i, value);
    }

    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().by_vals()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Every opinion flipped.
    pub fn complement(&self) -> Self {
        Labelling(!self.0.clone())
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Labelling) -> bool {
        self.len() == other.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| !*a || *b)
    }

    /// All agents hold the same opinion.
    pub fn is_constant(&self) -> bool {
        self.0.all() || self.0.not_any()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: n,
                got: self.len(),
            })
        }
    }
}

impl fmt::Display for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Labelling({self})")
    }
}

impl FromStr for Labelling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::LabellingParse(format!(
                    "character {other:?} at position {i} is not 0 or 1"
                ))),
            })
            .collect::<Result<BitVec<u64, Lsb0>>>()
            .map(Labelling)
    }
}

impl Serialize for Labelling {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Labelling {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
