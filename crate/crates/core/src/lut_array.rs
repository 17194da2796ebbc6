// SPDX-License-Identifier: Apache-2.0

//! Single-cycle LUT-based array multiplier.
//!
//! A hex-string table holds, for every scalar nibble `b`, a 120-bit string of
//! fifteen byte slices where slice `a` (1-based) is `a * b`. A lookup
//! multiplier (LM) takes a 16-bit word packing two 8-bit elements, selects the
//! two strings addressed by the scalar's nibbles once, and composes each
//! element's product from four slices with fixed shifts. Wider vectors
//! replicate identical LM blocks that all share the two selected strings.

use crate::arith::{check_len, Nibble, Operand8, Product16, VectorJob};
use crate::trace::{CycleTrace, TraceEvent};
use crate::Result;

/// Bits per slice.
pub const SLICE_BITS: u32 = 8;
/// Slices per result string (multiplicands 1..=15).
pub const SLICES: u32 = 15;
/// Width of one result string.
pub const RES_STRING_BITS: u32 = SLICE_BITS * SLICES;

/// 120-bit precomputed result string for one scalar nibble.
///
/// Slice `a` occupies bits `8(a-1) ..= 8a-1`, so slice 1 sits in the least
/// significant byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResString(u128);

impl ResString {
    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Byte slice `a`; `a = 0` addresses no slice and reads as zero.
    pub fn slice(self, a: Nibble) -> u8 {
        extract_slice(self, a)
    }
}

pub fn build_res_string(b: Nibble) -> ResString {
    let bits = (1..=SLICES as u128).fold(0u128, |acc, a| {
        acc | ((a * u128::from(b.value())) << (SLICE_BITS as u128 * (a - 1)))
    });
    ResString(bits)
}

pub fn extract_slice(s: ResString, a: Nibble) -> u8 {
    match a.value() {
        0 => 0,
        a => ((s.0 >> (SLICE_BITS * (u32::from(a) - 1))) & 0xFF) as u8,
    }
}

/// Sixteen result strings indexed by scalar nibble; entry 0 is all zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexLut {
    entries: [ResString; 16],
}

impl Default for HexLut {
    fn default() -> Self {
        HexLut::new()
    }
}

impl HexLut {
    pub fn new() -> HexLut {
        let mut entries = [ResString(0); 16];
        for b in Nibble::all() {
            entries[usize::from(b.value())] = build_res_string(b);
        }
        HexLut { entries }
    }

    pub fn entry(&self, b: Nibble) -> ResString {
        self.entries[usize::from(b.value())]
    }

    pub fn entries(&self) -> &[ResString; 16] {
        &self.entries
    }

    /// Total table storage in bytes.
    pub fn storage_bytes(&self) -> usize {
        self.entries.len() * RES_STRING_BITS as usize / 8
    }

    /// Selects the two strings addressed by the scalar's low and high nibble.
    pub fn select(&self, b: Operand8) -> SelectedStrings {
        SelectedStrings {
            rs0: self.entry(b.lo()),
            rs1: self.entry(b.hi()),
        }
    }
}

/// The pair of strings chosen for one broadcast scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectedStrings {
    /// String for the scalar's low nibble.
    pub rs0: ResString,
    /// String for the scalar's high nibble.
    pub rs1: ResString,
}

/// Input to one lookup multiplier: two packed elements and the scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LmInput {
    /// Element 0 in the low byte, element 1 in the high byte.
    pub a16: u16,
    pub b: Operand8,
}

impl LmInput {
    pub fn new(lo: Operand8, hi: Operand8, b: Operand8) -> LmInput {
        LmInput {
            a16: u16::from(lo.0) | (u16::from(hi.0) << 8),
            b,
        }
    }

    /// The four A nibbles, least significant first.
    pub fn nibbles(&self) -> [Nibble; 4] {
        [0, 4, 8, 12].map(|s| Nibble::truncate((self.a16 >> s) as u8))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LmOutput {
    /// Product of the low element.
    pub out1: Product16,
    /// Product of the high element.
    pub out2: Product16,
}

/// Composes one element's product from its two A nibbles.
fn compose(strings: &SelectedStrings, a_lo: Nibble, a_hi: Nibble) -> Product16 {
    let p0 = u16::from(extract_slice(strings.rs0, a_lo));
    let p2 = u16::from(extract_slice(strings.rs1, a_lo));
    let p1 = u16::from(extract_slice(strings.rs0, a_hi));
    let p3 = u16::from(extract_slice(strings.rs1, a_hi));
    Product16(p0 + (p2 << 4) + (p1 << 4) + (p3 << 8))
}

/// Runs one LM on strings that were already selected for the scalar.
pub fn lm_compute(strings: &SelectedStrings, a16: u16) -> LmOutput {
    let [a0, a1, a2, a3] = LmInput {
        a16,
        b: Operand8(0),
    }
    .nibbles();
    LmOutput {
        out1: compose(strings, a0, a1),
        out2: compose(strings, a2, a3),
    }
}

/// Single LM evaluation including its own string selection.
pub fn lm_multiply(inp: LmInput, lut: &HexLut) -> LmOutput {
    lm_compute(&lut.select(inp.b), inp.a16)
}

/// Outcome of one vector job on the LM array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LutArrayRun {
    pub products: Vec<Product16>,
    pub cycles: u64,
    /// Number of result-string reads from the table for this job.
    pub res_string_lookups: usize,
    pub lm_blocks: usize,
}

/// An array of LM blocks sharing one table.
#[derive(Clone, Debug, Default)]
pub struct LutArrayMultiplier {
    lut: HexLut,
}

impl LutArrayMultiplier {
    pub fn new() -> Self {
        LutArrayMultiplier { lut: HexLut::new() }
    }

    pub fn lut(&self) -> &HexLut {
        &self.lut
    }

    pub fn multiply(&self, job: &VectorJob) -> Result<LutArrayRun> {
        self.run(job, None)
    }

    pub fn multiply_traced(&self, job: &VectorJob) -> Result<(LutArrayRun, CycleTrace)> {
        let mut trace = CycleTrace::new(job.b().0);
        let run = self.run(job, Some(&mut trace))?;
        Ok((run, trace))
    }

    fn run(&self, job: &VectorJob, trace: Option<&mut CycleTrace>) -> Result<LutArrayRun> {
        check_len(job.len())?;
        let strings = self.lut.select(job.b());
        let a = job.a_ops();
        let mut products = Vec::with_capacity(a.len());
        let lm_blocks = a.len().div_ceil(2);
        for pair in a.chunks(2) {
            // Odd lengths pad the last block's high element with zero.
            let hi = pair.get(1).copied().unwrap_or_default();
            let out = lm_compute(&strings, LmInput::new(pair[0], hi, job.b()).a16);
            products.push(out.out1);
            if pair.len() == 2 {
                products.push(out.out2);
            }
        }
        if let Some(trace) = trace {
            for (i, op) in a.iter().enumerate() {
                trace.push(1, i, TraceEvent::Load, u32::from(op.0));
            }
            for (i, p) in products.iter().enumerate() {
                trace.push(1, i, TraceEvent::WriteOutput, u32::from(p.0));
            }
        }
        Ok(LutArrayRun {
            products,
            cycles: 1,
            res_string_lookups: 2,
            lm_blocks,
        })
    }
}

pub fn lut_array_multiply(job: &VectorJob) -> Result<Vec<Product16>> {
    Ok(LutArrayMultiplier::new().multiply(job)?.products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::oracle_mul;
    use crate::Error;

    fn nib(v: u8) -> Nibble {
        Nibble::new(v).unwrap()
    }

    #[test]
    fn res_string_examples() {
        assert_eq!(build_res_string(nib(0)).bits(), 0);
        let one = build_res_string(nib(1));
        for a in 1..=15u8 {
            assert_eq!(one.slice(nib(a)), a);
        }
        assert_eq!(build_res_string(nib(13)).slice(nib(11)), 0x8F);
    }

    #[test]
    fn slice_examples() {
        for b in Nibble::all() {
            assert_eq!(extract_slice(build_res_string(b), Nibble::ZERO), 0);
        }
        assert_eq!(extract_slice(build_res_string(nib(7)), nib(9)), 0x3F);
        assert_eq!(extract_slice(build_res_string(nib(15)), nib(15)), 0xE1);
    }

    #[test]
    fn strings_fit_in_120_bits() {
        for b in Nibble::all() {
            assert_eq!(build_res_string(b).bits() >> RES_STRING_BITS, 0);
        }
    }

    #[test]
    fn table_shape() {
        let lut = HexLut::new();
        assert_eq!(lut.entry(Nibble::ZERO).bits(), 0);
        assert_eq!(lut.storage_bytes(), 240);
    }

    #[test]
    fn lm_examples() {
        let lut = HexLut::new();
        let run = |a16, b| {
            let o = lm_multiply(
                LmInput {
                    a16,
                    b: Operand8(b),
                },
                &lut,
            );
            (o.out1.0, o.out2.0)
        };
        assert_eq!(run(0x0000, 0x00), (0, 0));
        assert_eq!(run(0xFFFF, 0xFF), (0xFE01, 0xFE01));
        assert_eq!(run(0x1203, 0x25), (0x006F, 0x029A));
    }

    #[test]
    fn lm_low_byte_sweep_matches_oracle() {
        let lut = HexLut::new();
        for b in 0..=255u8 {
            let strings = lut.select(Operand8(b));
            for lo in 0..=255u8 {
                let hi = lo.wrapping_mul(37).wrapping_add(b);
                let out = lm_compute(&strings, u16::from(lo) | (u16::from(hi) << 8));
                assert_eq!(out.out1, oracle_mul(Operand8(lo), Operand8(b)));
                assert_eq!(out.out2, oracle_mul(Operand8(hi), Operand8(b)));
            }
        }
    }

    #[test]
    fn vector_examples() {
        let m = LutArrayMultiplier::new();
        let p = |a: &[u8], b| {
            let run = m.multiply(&VectorJob::from_bytes(a, b).unwrap()).unwrap();
            assert_eq!(run.cycles, 1);
            assert_eq!(run.res_string_lookups, 2);
            run.products.iter().map(|p| p.0).collect::<Vec<_>>()
        };
        assert_eq!(p(&[1, 2, 3, 4], 5), vec![5, 10, 15, 20]);
        assert_eq!(p(&[9, 9, 9], 0), vec![0, 0, 0]);
        assert_eq!(p(&[0xFF; 8], 0xFF), vec![0xFE01; 8]);
    }

    #[test]
    fn odd_length_uses_padded_block() {
        let run = LutArrayMultiplier::new()
            .multiply(&VectorJob::from_bytes(&[7, 8, 9], 11).unwrap())
            .unwrap();
        assert_eq!(run.lm_blocks, 2);
        assert_eq!(run.products.len(), 3);
    }

    #[test]
    fn trace_is_single_cycle() {
        let job = VectorJob::from_bytes(&[3; 8], 9).unwrap();
        let (_, trace) = LutArrayMultiplier::new().multiply_traced(&job).unwrap();
        let writes = trace.writes();
        assert_eq!(writes.len(), 8);
        assert!(writes.iter().all(|&(c, _, v)| c == 1 && v == 27));
    }

    #[test]
    fn empty_job_rejected() {
        assert_eq!(
            VectorJob::new(vec![], Operand8(1)).unwrap_err(),
            Error::EmptyJob
        );
    }
}
