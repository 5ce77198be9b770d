//! Fixed-width bit strings with the leftmost character as the most
//! significant bit, matching ket labels like |0011>.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A bit string of known width. `value` packs the bits with the first
/// (leftmost) bit as the most significant one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitString {
    value: u64,
    len: u32,
}

impl BitString {
    pub fn new(value: u64, len: u32) -> Self {
        debug_assert!(len <= 64 && (len == 64 || value < (1u64 << len)));
        Self { value, len }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::MalformedFamily(format!("bad bit string {s:?}")));
        }
        let value = u64::from_str_radix(s, 2).expect("validated binary digits");
        Ok(Self {
            value,
            len: s.len() as u32,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `i`, counting the leftmost bit as position 0.
    pub fn bit(&self, i: u32) -> u64 {
        debug_assert!(i < self.len);
        (self.value >> (self.len - 1 - i)) & 1
    }

    /// Number of ones.
    pub fn ones(&self) -> u32 {
        self.value.count_ones()
    }

    /// Bitwise complement within the fixed width.
    pub fn complement(&self) -> Self {
        let mask = if self.len == 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        };
        Self {
            value: self.value ^ mask,
            len: self.len,
        }
    }

    pub fn xor(&self, other: Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            value: self.value ^ other.value,
            len: self.len,
        }
    }

    /// GF(2) inner product: parity of the bitwise AND.
    pub fn dot(&self, other: Self) -> u64 {
        debug_assert_eq!(self.len, other.len);
        u64::from((self.value & other.value).count_ones() & 1)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.len as usize)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        BitString::parse(&s)
    }
}

/// All subsets of `0..n` with exactly `k` elements, in ascending bitmask
/// order. Used for half-table enumeration; n stays small (<= 16).
pub fn subsets_of_size(n: u32, k: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let n = n as u64;
    for mask in 0u64..(1 << n) {
        if mask.count_ones() == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let b = BitString::parse("0011").unwrap();
        assert_eq!(b.value(), 3);
        assert_eq!(b.len(), 4);
        assert_eq!(b.to_string(), "0011");
        assert_eq!(b.bit(0), 0);
        assert_eq!(b.bit(2), 1);
    }

    #[test]
    fn complement_and_dot() {
        let b = BitString::parse("0011").unwrap();
        assert_eq!(b.complement().to_string(), "1100");
        let s = BitString::parse("0110").unwrap();
        assert_eq!(b.dot(s), 1);
        assert_eq!(b.dot(b.complement()), 0);
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(8, 4).len(), 70);
    }

    #[test]
    fn rejects_malformed() {
        assert!(BitString::parse("01x1").is_err());
        assert!(BitString::parse("").is_err());
    }
}
