use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use num_bigint::BigUint;

use crate::{QuantError, Result};

/// A finite sequence of bits.
///
/// Serialized as a 64-bit big-endian bit count followed by the bits packed
/// most significant first, zero-padded to whole bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitString {
    bits: BitVec<u8, Msb0>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).map(|b| *b)
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn append(&mut self, other: &BitString) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    /// `value` in `width` bits, most significant first.
    ///
    /// # Panics
    /// If `value` needs more than `width` bits.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        assert!(width >= 64 || value >> width == 0, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.bits.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    /// Like [`push_uint`](Self::push_uint) for arbitrary-size integers.
    pub fn push_big(&mut self, value: &BigUint, width: u64) {
        assert!(value.bits() <= width, "value does not fit in {width} bits");
        for i in (0..width).rev() {
            self.bits.push(value.bit(i));
        }
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: &self.bits, pos: 0 }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = (self.bits.len() as u64).to_be_bytes().to_vec();
        for chunk in self.bits.chunks(8) {
            let mut byte = 0u8;
            for (i, b) in chunk.iter().enumerate() {
                if *b {
                    byte |= 0x80 >> i;
                }
            }
            out.push(byte);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(QuantError::Malformed("missing 8-byte length header".into()));
        }
        let n = u64::from_be_bytes(bytes[..8].try_into().expect("8 bytes"));
        let body = &bytes[8..];
        if (body.len() as u64) != n.div_ceil(8) {
            return Err(QuantError::Malformed(format!("{n} bits announced but {} payload bytes present", body.len())));
        }
        let mut bits: BitVec<u8, Msb0> = BitVec::from_slice(body);
        if bits[n as usize..].any() {
            return Err(QuantError::Malformed("nonzero padding bits".into()));
        }
        bits.truncate(n as usize);
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter() {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                c => return Err(QuantError::Malformed(format!("unexpected character {c:?} in bit string"))),
            }
        }
        Ok(out)
    }
}

/// Sequential reader over a [`BitString`].
pub struct BitReader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    pos: usize,
}

impl BitReader<'_> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let b = self.bits.get(self.pos).map(|b| *b).ok_or(QuantError::Truncated(self.bits.len()))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Result<u64> {
        if width > 64 {
            return Err(QuantError::Malformed(format!("field of {width} bits is too wide")));
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }

    pub fn read_big(&mut self, width: u64) -> Result<BigUint> {
        if (self.remaining() as u64) < width {
            return Err(QuantError::Truncated(self.bits.len()));
        }
        let mut v = BigUint::default();
        for i in (0..width).rev() {
            if self.read_bit()? {
                v.set_bit(i, true);
            }
        }
        Ok(v)
    }
}
