// SPDX-License-Identifier: Apache-2.0

//! Fixed-width operand types, nibble decomposition, the reference multiply
//! and the analytical cycle-latency model shared by every architecture.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Longest vector a single job may carry.
pub const MAX_VECTOR_LEN: usize = 64;

/// Operand bit-width of every vector element and of the broadcast scalar.
pub const OPERAND_BITS: u32 = 8;

/// A 4-bit unsigned digit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nibble(u8);

impl Nibble {
    pub const ZERO: Nibble = Nibble(0);

    pub fn new(value: u8) -> Result<Nibble> {
        if value < 16 {
            Ok(Nibble(value))
        } else {
            Err(Error::NibbleOutOfRange(value))
        }
    }

    /// Keeps the low four bits of `value`.
    pub const fn truncate(value: u8) -> Nibble {
        Nibble(value & 0xF)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub fn bit(self, i: u32) -> bool {
        (self.0 >> i) & 1 == 1
    }

    /// All sixteen nibbles in ascending order.
    pub fn all() -> impl Iterator<Item = Nibble> {
        (0..16u8).map(Nibble)
    }
}

impl fmt::Display for Nibble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:X}", self.0)
    }
}

/// An 8-bit unsigned operand.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operand8(pub u8);

impl Operand8 {
    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn lo(self) -> Nibble {
        Nibble::truncate(self.0)
    }

    pub const fn hi(self) -> Nibble {
        Nibble::truncate(self.0 >> 4)
    }
}

impl From<u8> for Operand8 {
    fn from(v: u8) -> Self {
        Operand8(v)
    }
}

/// A 16-bit product of two 8-bit operands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Product16(pub u16);

impl Product16 {
    pub const fn value(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Product16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A vector of 8-bit elements multiplied by one broadcast 8-bit scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorJob {
    a_ops: Vec<Operand8>,
    b: Operand8,
}

impl VectorJob {
    pub fn new(a_ops: Vec<Operand8>, b: Operand8) -> Result<VectorJob> {
        check_len(a_ops.len())?;
        Ok(VectorJob { a_ops, b })
    }

    pub fn from_bytes(a: &[u8], b: u8) -> Result<VectorJob> {
        VectorJob::new(a.iter().copied().map(Operand8).collect(), Operand8(b))
    }

    pub fn single(a: u8, b: u8) -> VectorJob {
        VectorJob {
            a_ops: vec![Operand8(a)],
            b: Operand8(b),
        }
    }

    pub fn a_ops(&self) -> &[Operand8] {
        &self.a_ops
    }

    pub fn b(&self) -> Operand8 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.a_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_ops.is_empty()
    }

    /// Reference products for every element.
    pub fn oracle(&self) -> Vec<Product16> {
        self.a_ops.iter().map(|&a| oracle_mul(a, self.b)).collect()
    }
}

pub(crate) fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyJob)
    } else if n > MAX_VECTOR_LEN {
        Err(Error::JobTooLong(n))
    } else {
        Ok(())
    }
}

/// The five multiplier architectures under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArchKind {
    ShiftAdd,
    Booth,
    Nibble,
    Wallace,
    LutArray,
}

impl ArchKind {
    pub const ALL: [ArchKind; 5] = [
        ArchKind::ShiftAdd,
        ArchKind::Booth,
        ArchKind::Nibble,
        ArchKind::Wallace,
        ArchKind::LutArray,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArchKind::ShiftAdd => "shiftadd",
            ArchKind::Booth => "booth",
            ArchKind::Nibble => "nibble",
            ArchKind::Wallace => "wallace",
            ArchKind::LutArray => "lutarray",
        }
    }

    pub fn is_sequential(self) -> bool {
        matches!(
            self,
            ArchKind::ShiftAdd | ArchKind::Booth | ArchKind::Nibble
        )
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ArchKind> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "shiftadd" => Ok(ArchKind::ShiftAdd),
            "booth" | "boothradix4" | "boothradix2" => Ok(ArchKind::Booth),
            "nibble" => Ok(ArchKind::Nibble),
            "wallace" => Ok(ArchKind::Wallace),
            "lutarray" | "array" | "lut" => Ok(ArchKind::LutArray),
            _ => Err(Error::UnknownArch(s.to_string())),
        }
    }
}

/// Cycle latency per architecture for 8-bit operands.
#[derive(Clone, Copy, Debug, Default)]
pub struct LatencyModel;

impl LatencyModel {
    /// Cycles to multiply a single 8-bit operand.
    pub fn per_operand_cycles(&self, arch: ArchKind) -> u64 {
        match arch {
            ArchKind::ShiftAdd => u64::from(OPERAND_BITS),
            ArchKind::Booth => u64::from(OPERAND_BITS / 2),
            ArchKind::Nibble => u64::from(OPERAND_BITS / 4),
            ArchKind::Wallace | ArchKind::LutArray => 1,
        }
    }

    pub fn vector_cycles(&self, arch: ArchKind, n: usize) -> Result<u64> {
        check_len(n)?;
        Ok(if arch.is_sequential() {
            self.per_operand_cycles(arch) * n as u64
        } else {
            1
        })
    }
}

/// Exact product, used as ground truth for every architecture.
pub fn oracle_mul(a: Operand8, b: Operand8) -> Product16 {
    Product16(u16::from(a.0) * u16::from(b.0))
}

pub fn split_nibbles(x: Operand8) -> (Nibble, Nibble) {
    (x.lo(), x.hi())
}

/// Total cycles for an `n`-element job on a single datapath.
pub fn vector_latency(arch: ArchKind, n: usize) -> Result<u64> {
    LatencyModel.vector_cycles(arch, n)
}
