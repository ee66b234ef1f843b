//! Fixed-width binary codewords and value-indexed code tables.

use std::fmt;

use crate::error::{Error, Result};

/// Widest codeword supported. Tables hold `2^width` entries.
pub const MAX_WIDTH: u32 = 16;

/// An `width`-bit binary tuple.
///
/// Bit 1 is the rightmost, least significant bit. Leading zeros are
/// significant: `0001` and `001` are different codewords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    // Field order gives `Ord` = (width, bits), i.e. lexicographic on the
    // bit string for equal widths.
    width: u32,
    bits: u32,
}

impl Codeword {
    pub fn new(bits: u32, width: u32) -> Result<Self> {
        check_width(width, 1)?;
        if u64::from(bits) >= 1u64 << width {
            return Err(Error::ValueOutOfRange {
                value: bits.into(),
                width,
            });
        }
        Ok(Codeword { width, bits })
    }

    /// Builds a codeword without range checks. Callers guarantee
    /// `1 <= width <= MAX_WIDTH` and `bits < 2^width`.
    pub(crate) fn from_raw(bits: u32, width: u32) -> Self {
        debug_assert!((1..=MAX_WIDTH).contains(&width) && bits < (1 << width));
        Codeword { width, bits }
    }

    /// Parses an MSB-first bit string such as `"1011"`; the width is the
    /// string length.
    pub fn parse(s: &str) -> Result<Self> {
        let width = u32::try_from(s.len()).unwrap_or(u32::MAX);
        check_width(width, 1)?;
        let mut bits = 0;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::config(
                            "codeword",
                            format!("`{s}` is not a binary string"),
                        ))
                    }
                };
        }
        Ok(Codeword { width, bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub(crate) fn mask(self) -> u32 {
        width_mask(self.width)
    }

    /// Flips every bit within the codeword's width.
    pub fn complement(self) -> Self {
        Codeword {
            width: self.width,
            bits: !self.bits & self.mask(),
        }
    }

    /// XORs an error pattern into the codeword. Bits of `pattern` above the
    /// width are ignored.
    pub fn flip(self, pattern: u32) -> Self {
        Codeword {
            width: self.width,
            bits: (self.bits ^ pattern) & self.mask(),
        }
    }

    /// Prepends `bit` as the new most significant bit.
    pub fn with_prefix(self, bit: bool) -> Result<Self> {
        let width = self.width + 1;
        check_width(width, 1)?;
        Ok(Codeword {
            width,
            bits: self.bits | (u32::from(bit) << self.width),
        })
    }

    /// Value of bit `position`, counted from 1 at the right.
    pub fn bit(self, position: u32) -> bool {
        assert!(
            (1..=self.width).contains(&position),
            "bit position {position} outside 1..={}",
            self.width
        );
        (self.bits >> (position - 1)) & 1 == 1
    }

    /// True if the codeword has an odd number of ones.
    pub fn odd_parity(self) -> bool {
        self.bits.count_ones() % 2 == 1
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width as usize)
    }
}

pub(crate) fn width_mask(width: u32) -> u32 {
    ((1u64 << width) - 1) as u32
}

pub(crate) fn check_width(width: u32, min: u32) -> Result<()> {
    if (min..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange {
            width,
            min,
            max: MAX_WIDTH,
        })
    }
}

/// A bijection between the values `0..2^width` and all `width`-bit
/// codewords: `entries[v]` represents value `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeTable {
    width: u32,
    entries: Vec<Codeword>,
    inverse: Vec<u32>,
}

impl CodeTable {
    /// Builds a table from an ordering of codewords, which must visit every
    /// `width`-bit word exactly once.
    pub fn from_sequence(entries: Vec<Codeword>) -> Result<Self> {
        let width = match entries.first() {
            Some(cw) => cw.width,
            None => return Err(Error::NotCountingSequence("empty sequence".into())),
        };
        let size = 1usize << width;
        if entries.len() != size {
            return Err(Error::NotCountingSequence(format!(
                "{} entries, expected {size} for width {width}",
                entries.len()
            )));
        }
        let mut inverse = vec![u32::MAX; size];
        for (value, cw) in entries.iter().enumerate() {
            if cw.width != width {
                return Err(Error::NotCountingSequence(format!(
                    "entry {value} has width {}, expected {width}",
                    cw.width
                )));
            }
            let slot = &mut inverse[cw.bits as usize];
            if *slot != u32::MAX {
                return Err(Error::NotCountingSequence(format!(
                    "codeword {cw} appears at both {} and {value}",
                    *slot
                )));
            }
            *slot = value as u32;
        }
        Ok(CodeTable {
            width,
            entries,
            inverse,
        })
    }

    /// Same as [`CodeTable::from_sequence`] but from raw bit patterns.
    pub fn from_bits(bits: &[u32], width: u32) -> Result<Self> {
        let entries = bits
            .iter()
            .map(|&b| Codeword::new(b, width))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sequence(entries)
    }

    /// Natural binary: value `v` is represented by its own bit pattern.
    pub fn natural_binary(width: u32) -> Result<Self> {
        check_width(width, 1)?;
        let entries = (0..1u32 << width)
            .map(|v| Codeword::from_raw(v, width))
            .collect();
        Self::from_sequence(entries)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest representable value, `2^width - 1`.
    pub fn max_value(&self) -> u32 {
        width_mask(self.width)
    }

    pub fn entries(&self) -> &[Codeword] {
        &self.entries
    }

    pub fn encode(&self, value: u32) -> Result<Codeword> {
        self.entries
            .get(value as usize)
            .copied()
            .ok_or(Error::ValueOutOfRange {
                value: value.into(),
                width: self.width,
            })
    }

    /// Inverse of [`CodeTable::encode`].
    ///
    /// # Panics
    ///
    /// Panics if the codeword width differs from the table width.
    pub fn decode(&self, cw: Codeword) -> u32 {
        assert_eq!(
            cw.width, self.width,
            "codeword width does not match table width"
        );
        self.inverse[cw.bits as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_keeps_leading_zeros() {
        let cw = Codeword::new(0b0011, 4).unwrap();
        assert_eq!(cw.to_string(), "0011");
        assert_eq!(Codeword::parse("0011").unwrap(), cw);
        assert_ne!(Codeword::parse("011").unwrap(), cw);
    }

    #[test]
    fn rejects_bad_widths_and_values() {
        assert!(matches!(
            Codeword::new(0, 0),
            Err(Error::WidthOutOfRange { .. })
        ));
        assert!(matches!(
            Codeword::new(0, 17),
            Err(Error::WidthOutOfRange { .. })
        ));
        assert!(matches!(
            Codeword::new(8, 3),
            Err(Error::ValueOutOfRange { .. })
        ));
        assert!(Codeword::new(0xffff, 16).is_ok());
        assert!(Codeword::parse("10a1").is_err());
        assert!(Codeword::parse("").is_err());
    }

    #[test]
    fn complement_examples() {
        let c = |s| Codeword::parse(s).unwrap();
        assert_eq!(c("001").complement(), c("110"));
        assert_eq!(c("000").complement(), c("111"));
        assert_eq!(c("1011").complement().complement(), c("1011"));
    }

    #[test]
    fn bit_positions_count_from_the_right() {
        let cw = Codeword::parse("1000").unwrap();
        assert!(cw.bit(4));
        assert!(!cw.bit(1));
    }

    #[test]
    fn table_rejects_duplicates_and_short_sequences() {
        assert!(CodeTable::from_bits(&[0, 1, 1, 2], 2).is_err());
        assert!(CodeTable::from_bits(&[0, 1, 2], 2).is_err());
        assert!(CodeTable::from_sequence(vec![]).is_err());
        let t = CodeTable::from_bits(&[0, 3, 1, 2], 2).unwrap();
        assert_eq!(t.decode(Codeword::parse("11").unwrap()), 1);
        assert!(t.encode(4).is_err());
    }
}
