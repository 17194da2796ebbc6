// SPDX-License-Identifier: Apache-2.0

use super::{run_serial, BaselineRun, SerialDatapath};
use crate::arith::{Operand8, Product16, VectorJob};
use crate::trace::CycleTrace;
use crate::Result;

/// Radix-2 shift-add datapath with a 16-bit product register.
///
/// The low half of the register starts out holding the multiplier. Every
/// cycle the multiplicand is added into the high half when the register's
/// bit 0 is set, then the whole register (plus the adder carry) shifts right
/// by one. After eight cycles the register holds the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftAddState {
    pub multiplicand: Operand8,
    /// Multiplier bits not yet consumed, right-aligned.
    pub multiplier_bits: u8,
    /// Product register `{hi, lo}`.
    pub acc: u16,
    /// Steps taken so far, 0..=8.
    pub bit_index: u8,
}

impl ShiftAddState {
    pub fn is_done(&self) -> bool {
        self.bit_index == Self::STEPS
    }
}

impl SerialDatapath for ShiftAddState {
    const STEPS: u8 = 8;

    fn load(a: Operand8, b: Operand8) -> Self {
        ShiftAddState {
            multiplicand: a,
            multiplier_bits: b.0,
            acc: u16::from(b.0),
            bit_index: 0,
        }
    }

    fn step(&mut self) -> u32 {
        assert!(
            !self.is_done(),
            "shift-add datapath stepped past completion"
        );
        let hi = u32::from(self.acc >> 8);
        let lo = u32::from(self.acc & 0xFF);
        let addend = if lo & 1 == 1 {
            u32::from(self.multiplicand.0)
        } else {
            0
        };
        let sum = hi + addend; // 9 bits
        self.acc = (((sum << 8) | lo) >> 1) as u16;
        self.multiplier_bits >>= 1;
        self.bit_index += 1;
        u32::from(self.acc)
    }

    fn product(&self) -> Product16 {
        Product16(self.acc)
    }
}

pub fn shift_add_multiply(job: &VectorJob) -> Result<BaselineRun> {
    run_serial::<ShiftAddState>(job, None)
}

pub fn shift_add_traced(job: &VectorJob) -> Result<(BaselineRun, CycleTrace)> {
    let mut trace = CycleTrace::new(job.b().0);
    let run = run_serial::<ShiftAddState>(job, Some(&mut trace))?;
    Ok((run, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::oracle_mul;

    #[test]
    fn exhaustive_against_oracle() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                let mut dp = ShiftAddState::load(Operand8(a), Operand8(b));
                for _ in 0..8 {
                    dp.step();
                }
                assert!(dp.is_done());
                assert_eq!(dp.multiplier_bits, 0);
                assert_eq!(dp.product(), oracle_mul(Operand8(a), Operand8(b)));
            }
        }
    }

    #[test]
    fn cycles_are_eight_per_element() {
        for n in [1usize, 4, 8, 16] {
            let a: Vec<u8> = (0..n as u8).map(|i| i.wrapping_mul(53)).collect();
            let job = VectorJob::from_bytes(&a, 0x9D).unwrap();
            let run = shift_add_multiply(&job).unwrap();
            assert_eq!(run.cycles, 8 * n as u64);
            assert_eq!(run.products, job.oracle());
        }
    }

    #[test]
    fn zero_multiplicand() {
        let run = shift_add_multiply(&VectorJob::from_bytes(&[0, 0], 0xAB).unwrap()).unwrap();
        assert_eq!(run.products, vec![Product16(0); 2]);
    }

    #[test]
    fn single_element_writes_at_cycle_eight() {
        let (_, trace) = shift_add_traced(&VectorJob::single(200, 201)).unwrap();
        assert_eq!(trace.writes(), vec![(8, 0, 40200)]);
    }
}
